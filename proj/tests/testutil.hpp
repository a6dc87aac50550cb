// Shared test fixtures and independent oracles. Everything here recomputes
// results from first principles (direct enumeration, naive counting) so the
// library implementations are checked against a second route, not themselves.
#ifndef MLTC_TESTS_TESTUTIL_HPP
#define MLTC_TESTS_TESTUTIL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testutil {

using Matrix = std::vector<std::vector<double>>;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double gauss(std::mt19937_64& rng, double mean = 0.0, double sd = 1.0) {
    return std::normal_distribution<double>(mean, sd)(rng);
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t d, double lo = 0.0,
                            double hi = 1.0) {
    Matrix m(n, std::vector<double>(d));
    for (auto& row : m) {
        for (auto& v : row) v = uniform(rng, lo, hi);
    }
    return m;
}

// ---------------------------------------------------------------------------
// Regression-tree oracles.
// ---------------------------------------------------------------------------

struct OracleSplit {
    int feature = -1;
    double threshold = 0.0;
};

inline double subset_sse(const std::vector<double>& targets, const std::vector<std::size_t>& idx) {
    if (idx.empty()) return 0.0;
    double mean = 0.0;
    for (auto i : idx) mean += targets[i];
    mean /= static_cast<double>(idx.size());
    double sse = 0.0;
    for (auto i : idx) sse += (targets[i] - mean) * (targets[i] - mean);
    return sse;
}

inline std::vector<OracleSplit> candidate_splits(const Matrix& features,
                                                 const std::vector<std::size_t>& idx,
                                                 std::size_t dim) {
    std::vector<OracleSplit> out;
    for (std::size_t f = 0; f < dim; ++f) {
        std::vector<double> values;
        for (auto i : idx) values.push_back(features[i][f]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t k = 1; k < values.size(); ++k) {
            out.push_back({static_cast<int>(f), (values[k - 1] + values[k]) / 2.0});
        }
    }
    return out;
}

inline void partition(const Matrix& features, const std::vector<std::size_t>& idx,
                      const OracleSplit& split, std::vector<std::size_t>& left,
                      std::vector<std::size_t>& right) {
    left.clear();
    right.clear();
    for (auto i : idx) {
        (features[i][static_cast<std::size_t>(split.feature)] <= split.threshold ? left : right)
            .push_back(i);
    }
}

// Naive recursive re-implementation of exact-greedy fitting: every candidate
// split is scored by direct recomputation of both child SSEs (no prefix-sum
// shortcuts), lowest feature then lowest threshold breaking ties, splitting
// whenever a valid candidate exists. Returns the training SSE of the tree it
// builds. min_samples_leaf is fixed at 1.
inline double naive_greedy_tree_sse(const Matrix& features, const std::vector<double>& targets,
                                    const std::vector<std::size_t>& idx, std::size_t depth_left) {
    bool pure = true;
    for (auto i : idx) {
        if (targets[i] != targets[idx.front()]) {
            pure = false;
            break;
        }
    }
    if (depth_left == 0 || pure) return subset_sse(targets, idx);

    OracleSplit best;
    double best_sse = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> left, right;
    for (const auto& split : candidate_splits(features, idx, features.front().size())) {
        partition(features, idx, split, left, right);
        if (left.empty() || right.empty()) continue;
        double sse = subset_sse(targets, left) + subset_sse(targets, right);
        if (sse < best_sse) {
            best_sse = sse;
            best = split;
        }
    }
    if (best.feature < 0) return subset_sse(targets, idx);
    partition(features, idx, best, left, right);
    return naive_greedy_tree_sse(features, targets, left, depth_left - 1) +
           naive_greedy_tree_sse(features, targets, right, depth_left - 1);
}

// Global minimum training SSE over every axis-aligned tree of at most the
// given depth with midpoint thresholds, by exhaustive enumeration. Exponential
// in depth; meant for tiny fixtures.
inline double global_best_tree_sse(const Matrix& features, const std::vector<double>& targets,
                                   const std::vector<std::size_t>& idx, std::size_t depth_left) {
    double best = subset_sse(targets, idx);
    if (depth_left == 0) return best;
    std::vector<std::size_t> left, right;
    for (const auto& split : candidate_splits(features, idx, features.front().size())) {
        partition(features, idx, split, left, right);
        if (left.empty() || right.empty()) continue;
        double sse = global_best_tree_sse(features, targets, left, depth_left - 1) +
                     global_best_tree_sse(features, targets, right, depth_left - 1);
        best = std::min(best, sse);
    }
    return best;
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

// ---------------------------------------------------------------------------
// Line-search oracle: dense grid argmin of the stage loss.
// ---------------------------------------------------------------------------

inline double grid_search_beta(const std::vector<double>& targets,
                               const std::vector<double>& prev_predictions,
                               const std::vector<double>& tree_outputs, double lo, double hi,
                               std::size_t points) {
    double best_beta = lo;
    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < points; ++k) {
        double beta = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
        double loss = 0.0;
        for (std::size_t i = 0; i < targets.size(); ++i) {
            double d = targets[i] - prev_predictions[i] - beta * tree_outputs[i];
            loss += d * d;
        }
        if (loss < best_loss) {
            best_loss = loss;
            best_beta = beta;
        }
    }
    return best_beta;
}

// ---------------------------------------------------------------------------
// ML-KNN oracle: all-pairs distances and direct Bayes counting, no shared
// code with the library implementation.
// ---------------------------------------------------------------------------

struct BruteMlknn {
    Matrix features;
    std::vector<std::set<std::size_t>> labels; // label indices per instance
    std::size_t label_count = 0;
    std::size_t k = 1;
    double s = 1.0;

    std::vector<std::size_t> neighbors_of(const std::vector<double>& x, std::size_t exclude) const {
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t i = 0; i < features.size(); ++i) {
            if (i == exclude) continue;
            double d2 = 0.0;
            for (std::size_t f = 0; f < x.size(); ++f) {
                d2 += (features[i][f] - x[f]) * (features[i][f] - x[f]);
            }
            all.emplace_back(d2, i);
        }
        std::sort(all.begin(), all.end());
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < std::min(k, all.size()); ++i) out.push_back(all[i].second);
        return out;
    }

    // MAP decision per label for a query; mirrors the published estimator by
    // direct counting over the whole training set each call.
    std::vector<std::size_t> predict(const std::vector<double>& x) const {
        const std::size_t n = features.size();
        std::vector<double> ratio(label_count);
        auto query_neighbors = neighbors_of(x, static_cast<std::size_t>(-1));
        for (std::size_t j = 0; j < label_count; ++j) {
            std::size_t positives = 0;
            for (const auto& ls : labels) positives += ls.count(j);
            double prior = (s + static_cast<double>(positives)) / (2.0 * s + static_cast<double>(n));

            std::size_t c_query = 0;
            for (auto nb : query_neighbors) c_query += labels[nb].count(j);

            std::size_t with_label = 0;
            std::size_t without_label = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t c = 0;
                for (auto nb : neighbors_of(features[i], i)) c += labels[nb].count(j);
                if (c != c_query) continue;
                if (labels[i].count(j)) {
                    ++with_label;
                } else {
                    ++without_label;
                }
            }
            double p_c_given_h = (s + static_cast<double>(with_label)) /
                                 (s * static_cast<double>(k + 1) + static_cast<double>(positives));
            double p_c_given_not =
                (s + static_cast<double>(without_label)) /
                (s * static_cast<double>(k + 1) + static_cast<double>(n - positives));
            ratio[j] = prior * p_c_given_h / ((1.0 - prior) * p_c_given_not);
        }
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < label_count; ++j) {
            if (ratio[j] >= 1.0) out.push_back(j);
        }
        if (out.empty() && label_count > 0) {
            std::size_t best = 0;
            for (std::size_t j = 1; j < label_count; ++j) {
                if (ratio[j] > ratio[best]) best = j;
            }
            out.push_back(best);
        }
        return out;
    }
};

} // namespace testutil

#endif
