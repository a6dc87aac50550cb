#include "mltc/mlknn.hpp"

#include <algorithm>
#include <cmath>

#include "mltc/error.hpp"
#include "mltc/multilabel.hpp"

namespace mltc {

std::vector<std::size_t> nearest_neighbors(const std::vector<FeatureVector>& rows,
                                           std::span<const double> x, std::size_t k,
                                           std::size_t exclude) {
    std::vector<std::pair<double, std::size_t>> distances;
    distances.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == exclude) continue;
        if (rows[i].size() != x.size()) throw DimensionMismatchError(rows[i].size(), x.size());
        double d2 = 0.0;
        for (std::size_t f = 0; f < x.size(); ++f) {
            double d = rows[i][f] - x[f];
            d2 += d * d;
        }
        distances.emplace_back(d2, i);
    }
    k = std::min(k, distances.size());
    std::partial_sort(distances.begin(), distances.begin() + static_cast<long>(k), distances.end());
    std::vector<std::size_t> neighbors(k);
    for (std::size_t i = 0; i < k; ++i) neighbors[i] = distances[i].second;
    return neighbors;
}

MlknnModel MlknnModel::train(const std::vector<LabeledInstance>& instances,
                             const std::vector<std::string>& universe, std::size_t k,
                             double smoothing) {
    const std::size_t n = instances.size();
    if (n == 0) throw EmptyTargetsError();
    if (k + 1 > n) throw KTooLargeError(k, n);
    if (!(smoothing > 0.0)) throw std::invalid_argument("smoothing must be positive");

    MlknnModel model;
    model.universe_ = universe;
    model.k_ = k;
    model.smoothing_ = smoothing;
    model.features_.reserve(n);
    model.label_matrix_.assign(n, std::vector<std::uint8_t>(universe.size(), 0));
    for (std::size_t i = 0; i < n; ++i) {
        model.features_.push_back(instances[i].features);
        for (std::size_t j = 0; j < universe.size(); ++j) {
            if (instances[i].labels.count(universe[j])) model.label_matrix_[i][j] = 1;
        }
    }

    const std::size_t q = universe.size();
    const double s = smoothing;

    std::vector<std::size_t> positives(q, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < q; ++j) positives[j] += model.label_matrix_[i][j];
    }
    model.priors_.resize(q);
    for (std::size_t j = 0; j < q; ++j) {
        model.priors_[j] = (s + static_cast<double>(positives[j])) / (2.0 * s + static_cast<double>(n));
    }

    // Count, per label, how many positive neighbors each training instance
    // sees among its own k nearest (itself excluded).
    std::vector<std::vector<std::size_t>> count_pos(q, std::vector<std::size_t>(k + 1, 0));
    std::vector<std::vector<std::size_t>> count_neg(q, std::vector<std::size_t>(k + 1, 0));
    for (std::size_t i = 0; i < n; ++i) {
        auto neighbors = nearest_neighbors(model.features_, model.features_[i], k, i);
        for (std::size_t j = 0; j < q; ++j) {
            std::size_t c = 0;
            for (std::size_t nb : neighbors) c += model.label_matrix_[nb][j];
            (model.label_matrix_[i][j] ? count_pos : count_neg)[j][c] += 1;
        }
    }

    model.posterior_pos_.assign(q, std::vector<double>(k + 1, 0.0));
    model.posterior_neg_.assign(q, std::vector<double>(k + 1, 0.0));
    for (std::size_t j = 0; j < q; ++j) {
        double denom_pos = s * static_cast<double>(k + 1) + static_cast<double>(positives[j]);
        double denom_neg = s * static_cast<double>(k + 1) + static_cast<double>(n - positives[j]);
        for (std::size_t c = 0; c <= k; ++c) {
            model.posterior_pos_[j][c] = (s + static_cast<double>(count_pos[j][c])) / denom_pos;
            model.posterior_neg_[j][c] = (s + static_cast<double>(count_neg[j][c])) / denom_neg;
        }
    }
    return model;
}

std::vector<double> MlknnModel::scores(std::span<const double> x) const {
    auto neighbors = nearest_neighbors(features_, x, k_, static_cast<std::size_t>(-1));
    const std::size_t q = universe_.size();
    std::vector<double> out(q);
    for (std::size_t j = 0; j < q; ++j) {
        std::size_t c = 0;
        for (std::size_t nb : neighbors) c += label_matrix_[nb][j];
        double claim = priors_[j] * posterior_pos_[j][c];
        double refute = (1.0 - priors_[j]) * posterior_neg_[j][c];
        out[j] = claim / refute;
    }
    return out;
}

std::vector<std::string> MlknnModel::predict(std::span<const double> x) const {
    std::vector<double> ratio = scores(x);
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < ratio.size(); ++j) {
        if (ratio[j] >= 1.0) labels.push_back(universe_[j]);
    }
    if (labels.empty() && !ratio.empty()) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < ratio.size(); ++j) {
            if (ratio[j] > ratio[best]) best = j;
        }
        labels.push_back(universe_[best]);
    }
    return labels;
}

MlknnModel MlknnModel::from_parts(std::vector<std::string> universe, std::size_t k, double smoothing,
                                  std::vector<FeatureVector> features,
                                  std::vector<std::vector<std::uint8_t>> label_matrix,
                                  std::vector<double> priors,
                                  std::vector<std::vector<double>> posterior_pos,
                                  std::vector<std::vector<double>> posterior_neg) {
    const std::size_t q = universe.size();
    if (features.empty() || k + 1 > features.size()) {
        throw std::invalid_argument("neighbor count does not fit the stored training set");
    }
    if (label_matrix.size() != features.size()) {
        throw std::invalid_argument("label matrix does not match the training set");
    }
    for (const auto& row : label_matrix) {
        if (row.size() != q) throw std::invalid_argument("label matrix width differs from universe");
    }
    for (const auto& row : features) {
        if (row.size() != features.front().size()) {
            throw std::invalid_argument("stored feature rows have mixed dimensions");
        }
    }
    if (priors.size() != q || posterior_pos.size() != q || posterior_neg.size() != q) {
        throw std::invalid_argument("per-label tables differ from universe size");
    }
    for (std::size_t j = 0; j < q; ++j) {
        if (posterior_pos[j].size() != k + 1 || posterior_neg[j].size() != k + 1) {
            throw std::invalid_argument("posterior tables must cover counts 0..k");
        }
        if (!(priors[j] > 0.0 && priors[j] < 1.0)) {
            throw std::invalid_argument("priors must lie strictly inside (0, 1)");
        }
    }
    MlknnModel model;
    model.universe_ = std::move(universe);
    model.k_ = k;
    model.smoothing_ = smoothing;
    model.features_ = std::move(features);
    model.label_matrix_ = std::move(label_matrix);
    model.priors_ = std::move(priors);
    model.posterior_pos_ = std::move(posterior_pos);
    model.posterior_neg_ = std::move(posterior_neg);
    return model;
}

} // namespace mltc
