#include "mltc/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mltc/error.hpp"

namespace mltc {
namespace gbdt {

namespace {

// Neumaier-compensated sum: keeps the loss monotonicity argument valid in
// floating point even when per-iteration improvements get tiny.
double stable_sum(std::span<const double> values) {
    double sum = 0.0;
    double compensation = 0.0;
    for (double v : values) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    return sum + compensation;
}

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double children_sse = std::numeric_limits<double>::infinity();
};

struct TreeBuilder {
    const std::vector<std::vector<double>>& features;
    const std::vector<double>& targets;
    TreeConfig config;
    std::vector<TreeNode> nodes;

    // Best exact-greedy split of the sample subset, or feature -1 when no
    // candidate respects min_samples_leaf. For each feature the samples are
    // sorted once and the left-side sums swept; the per-side SSE comes from
    // the identity sum (t - mean)^2 = sum t^2 - (sum t)^2 / n.
    SplitChoice find_split(const std::vector<std::size_t>& samples) const {
        SplitChoice best;
        const std::size_t n = samples.size();
        const std::size_t dim = features[samples.front()].size();

        double total_sum = 0.0;
        double total_sq = 0.0;
        for (std::size_t i : samples) {
            total_sum += targets[i];
            total_sq += targets[i] * targets[i];
        }

        std::vector<std::size_t> order(n);
        for (std::size_t f = 0; f < dim; ++f) {
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return features[samples[a]][f] < features[samples[b]][f];
            });

            double left_sum = 0.0;
            double left_sq = 0.0;
            for (std::size_t pos = 0; pos + 1 < n; ++pos) {
                double t = targets[samples[order[pos]]];
                left_sum += t;
                left_sq += t * t;
                double v = features[samples[order[pos]]][f];
                double v_next = features[samples[order[pos + 1]]][f];
                if (v == v_next) continue;
                std::size_t left_n = pos + 1;
                std::size_t right_n = n - left_n;
                if (left_n < config.min_samples_leaf || right_n < config.min_samples_leaf) continue;
                double right_sum = total_sum - left_sum;
                double right_sq = total_sq - left_sq;
                double sse = (left_sq - left_sum * left_sum / static_cast<double>(left_n)) +
                             (right_sq - right_sum * right_sum / static_cast<double>(right_n));
                if (sse < best.children_sse) {
                    best.children_sse = sse;
                    best.feature = static_cast<int>(f);
                    best.threshold = (v + v_next) / 2.0;
                }
            }
        }
        return best;
    }

    int build(std::vector<std::size_t> samples, std::size_t depth) {
        double sum = 0.0;
        for (std::size_t i : samples) sum += targets[i];
        double mean = sum / static_cast<double>(samples.size());

        bool pure = true;
        for (std::size_t i : samples) {
            if (targets[i] != targets[samples.front()]) {
                pure = false;
                break;
            }
        }

        int index = static_cast<int>(nodes.size());
        nodes.push_back({});
        if (depth >= config.max_depth || samples.size() < 2 * config.min_samples_leaf || pure) {
            nodes[index].value = mean;
            return index;
        }
        SplitChoice split = find_split(samples);
        if (split.feature < 0) {
            nodes[index].value = mean;
            return index;
        }

        std::vector<std::size_t> left_samples;
        std::vector<std::size_t> right_samples;
        for (std::size_t i : samples) {
            (features[i][static_cast<std::size_t>(split.feature)] <= split.threshold
                 ? left_samples
                 : right_samples)
                .push_back(i);
        }
        samples.clear();
        samples.shrink_to_fit();

        nodes[index].feature = split.feature;
        nodes[index].threshold = split.threshold;
        nodes[index].left = build(std::move(left_samples), depth + 1);
        nodes[index].right = build(std::move(right_samples), depth + 1);
        return index;
    }
};

} // namespace

RegressionTree RegressionTree::fit(const std::vector<std::vector<double>>& features,
                                   const std::vector<double>& targets, const TreeConfig& config) {
    if (features.size() != targets.size()) {
        throw LengthMismatchError(features.size(), targets.size());
    }
    if (features.empty()) throw EmptyTargetsError();

    TreeBuilder builder{features, targets, config, {}};
    std::vector<std::size_t> all(features.size());
    std::iota(all.begin(), all.end(), 0);
    builder.build(std::move(all), 0);
    return RegressionTree(std::move(builder.nodes));
}

double RegressionTree::predict(std::span<const double> x) const {
    int index = 0;
    while (!nodes_[static_cast<std::size_t>(index)].is_leaf()) {
        const TreeNode& node = nodes_[static_cast<std::size_t>(index)];
        index = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    return nodes_[static_cast<std::size_t>(index)].value;
}

double GbdtModel::predict(std::span<const double> x) const {
    if (x.size() != feature_dim) throw DimensionMismatchError(feature_dim, x.size());
    double result = f0;
    for (const auto& stage : stages) {
        result += shrinkage * stage.beta * stage.tree.predict(x);
    }
    return result;
}

double init_constant(const std::vector<double>& targets) {
    if (targets.empty()) throw EmptyTargetsError();
    return stable_sum(targets) / static_cast<double>(targets.size());
}

std::vector<double> negative_gradient(const std::vector<double>& targets,
                                      const std::vector<double>& predictions) {
    if (targets.size() != predictions.size()) {
        throw LengthMismatchError(targets.size(), predictions.size());
    }
    std::vector<double> residuals(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) residuals[i] = targets[i] - predictions[i];
    return residuals;
}

double line_search(const std::vector<double>& targets, const std::vector<double>& prev_predictions,
                   const std::vector<double>& tree_outputs) {
    if (targets.size() != prev_predictions.size()) {
        throw LengthMismatchError(targets.size(), prev_predictions.size());
    }
    if (targets.size() != tree_outputs.size()) {
        throw LengthMismatchError(targets.size(), tree_outputs.size());
    }
    double numerator = 0.0;
    double denominator = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        double residual = targets[i] - prev_predictions[i];
        numerator += residual * tree_outputs[i];
        denominator += tree_outputs[i] * tree_outputs[i];
    }
    if (denominator == 0.0) return 0.0;
    return numerator / denominator;
}

GbdtModel train(const std::vector<std::vector<double>>& features,
                const std::vector<double>& targets, const TrainConfig& config,
                std::vector<double>* loss_log) {
    if (features.size() != targets.size()) {
        throw LengthMismatchError(features.size(), targets.size());
    }
    if (features.empty()) throw EmptyTargetsError();
    if (config.iterations < 1 || config.max_depth < 1 || config.min_samples_leaf < 1 ||
        !(config.shrinkage > 0.0 && config.shrinkage <= 1.0)) {
        throw std::invalid_argument("training configuration out of range");
    }

    std::size_t holdout = 0;
    if (config.early_stop_patience > 0 && features.size() >= 2) {
        holdout = static_cast<std::size_t>(
            std::ceil(config.validation_fraction * static_cast<double>(features.size())));
        holdout = std::min(holdout, features.size() - 1);
    }
    const std::size_t fit_n = features.size() - holdout;

    std::vector<std::vector<double>> fit_features(features.begin(),
                                                  features.begin() + static_cast<long>(fit_n));
    std::vector<double> fit_targets(targets.begin(), targets.begin() + static_cast<long>(fit_n));

    GbdtModel model;
    model.shrinkage = config.shrinkage;
    model.feature_dim = features.front().size();
    model.f0 = init_constant(fit_targets);

    std::vector<double> predictions(features.size(), model.f0);
    auto fit_loss = [&] {
        std::vector<double> terms(fit_n);
        for (std::size_t i = 0; i < fit_n; ++i) {
            double d = fit_targets[i] - predictions[i];
            terms[i] = d * d;
        }
        return stable_sum(terms);
    };
    if (loss_log) {
        loss_log->clear();
        loss_log->push_back(fit_loss());
    }

    TreeConfig tree_config{config.max_depth, config.min_samples_leaf};
    double best_holdout_loss = std::numeric_limits<double>::infinity();
    std::size_t best_stage_count = 0;
    std::size_t stale = 0;

    for (std::size_t m = 0; m < config.iterations; ++m) {
        std::vector<double> fit_predictions(predictions.begin(),
                                            predictions.begin() + static_cast<long>(fit_n));
        std::vector<double> residuals = negative_gradient(fit_targets, fit_predictions);
        RegressionTree tree = RegressionTree::fit(fit_features, residuals, tree_config);

        std::vector<double> outputs(fit_n);
        for (std::size_t i = 0; i < fit_n; ++i) outputs[i] = tree.predict(fit_features[i]);
        double beta = line_search(fit_targets, fit_predictions, outputs);

        for (std::size_t i = 0; i < features.size(); ++i) {
            double h = i < fit_n ? outputs[i] : tree.predict(features[i]);
            predictions[i] += config.shrinkage * beta * h;
        }
        model.stages.push_back({std::move(tree), beta});
        if (loss_log) loss_log->push_back(fit_loss());

        if (holdout > 0) {
            std::vector<double> holdout_terms(holdout);
            for (std::size_t i = 0; i < holdout; ++i) {
                double d = targets[fit_n + i] - predictions[fit_n + i];
                holdout_terms[i] = d * d;
            }
            double holdout_loss = stable_sum(holdout_terms);
            if (holdout_loss < best_holdout_loss) {
                best_holdout_loss = holdout_loss;
                best_stage_count = model.stages.size();
                stale = 0;
            } else if (++stale >= config.early_stop_patience) {
                model.stages.resize(best_stage_count);
                break;
            }
        }
    }
    return model;
}

} // namespace gbdt
} // namespace mltc
