#include "mltc/multilabel.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "mltc/error.hpp"

namespace mltc {

double LinearModel::score(std::span<const double> x) const {
    if (x.size() != weights.size()) throw DimensionMismatchError(weights.size(), x.size());
    double s = bias;
    for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * x[i];
    return s;
}

BrModel::BrModel(std::vector<std::string> universe, std::vector<gbdt::GbdtModel> scorers)
    : universe_(std::move(universe)), kind_(ScorerKind::Gbdt), gbdt_scorers_(std::move(scorers)) {
    if (universe_.size() != gbdt_scorers_.size()) {
        throw LengthMismatchError(universe_.size(), gbdt_scorers_.size());
    }
    for (const auto& scorer : gbdt_scorers_) {
        if (scorer.feature_dim != gbdt_scorers_.front().feature_dim) {
            throw DimensionMismatchError(gbdt_scorers_.front().feature_dim, scorer.feature_dim);
        }
    }
}

BrModel::BrModel(std::vector<std::string> universe, std::vector<LinearModel> scorers)
    : universe_(std::move(universe)), kind_(ScorerKind::Linear), linear_scorers_(std::move(scorers)) {
    if (universe_.size() != linear_scorers_.size()) {
        throw LengthMismatchError(universe_.size(), linear_scorers_.size());
    }
    for (const auto& scorer : linear_scorers_) {
        if (scorer.weights.size() != linear_scorers_.front().weights.size()) {
            throw DimensionMismatchError(linear_scorers_.front().weights.size(),
                                         scorer.weights.size());
        }
    }
}

std::size_t BrModel::feature_dim() const {
    if (kind_ == ScorerKind::Gbdt) {
        return gbdt_scorers_.empty() ? 0 : gbdt_scorers_.front().feature_dim;
    }
    return linear_scorers_.empty() ? 0 : linear_scorers_.front().weights.size();
}

std::vector<double> BrModel::scores(std::span<const double> x) const {
    std::vector<double> out;
    out.reserve(universe_.size());
    if (kind_ == ScorerKind::Gbdt) {
        for (const auto& scorer : gbdt_scorers_) out.push_back(scorer.predict(x));
    } else {
        for (const auto& scorer : linear_scorers_) out.push_back(scorer.score(x));
    }
    return out;
}

std::vector<std::string> BrModel::predict(std::span<const double> x) const {
    std::vector<double> s = scores(x);
    std::vector<std::string> labels;
    for (std::size_t j : select_labels(s)) labels.push_back(universe_[j]);
    return labels;
}

std::vector<std::pair<FeatureVector, double>> binarize(const std::vector<LabeledInstance>& instances,
                                                       const std::string& label,
                                                       const std::vector<std::string>& universe) {
    if (std::find(universe.begin(), universe.end(), label) == universe.end()) {
        throw UnknownLabelError(label);
    }
    std::vector<std::pair<FeatureVector, double>> out;
    out.reserve(instances.size());
    for (const auto& instance : instances) {
        out.emplace_back(instance.features, instance.labels.count(label) ? 1.0 : -1.0);
    }
    return out;
}

std::vector<std::size_t> select_labels(std::span<const double> scores) {
    std::vector<std::size_t> selected;
    for (std::size_t j = 0; j < scores.size(); ++j) {
        if (scores[j] > 0.0) selected.push_back(j);
    }
    if (selected.empty() && !scores.empty()) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < scores.size(); ++j) {
            if (scores[j] > scores[best]) best = j;
        }
        selected.push_back(best);
    }
    return selected;
}

namespace {

// All-positive or all-negative targets cannot drive a fit; emit a scorer that
// always answers with that class.
bool degenerate_targets(const std::vector<std::pair<FeatureVector, double>>& data, double& value) {
    value = data.front().second;
    for (const auto& [x, t] : data) {
        if (t != value) return false;
    }
    return true;
}

} // namespace

BrModel train_br_gbdt(const std::vector<LabeledInstance>& instances,
                      const std::vector<std::string>& universe, const gbdt::TrainConfig& config,
                      std::vector<std::string>* degenerate_labels, std::size_t threads,
                      std::vector<std::vector<double>>* loss_logs) {
    if (instances.empty()) throw EmptyTargetsError();

    std::vector<gbdt::GbdtModel> scorers(universe.size());
    std::vector<char> degenerate(universe.size(), 0);
    if (loss_logs) loss_logs->assign(universe.size(), {});

    auto train_one = [&](std::size_t j) {
        auto data = binarize(instances, universe[j], universe);
        double constant = 0.0;
        if (degenerate_targets(data, constant)) {
            gbdt::GbdtModel model;
            model.f0 = constant;
            model.shrinkage = config.shrinkage;
            model.feature_dim = instances.front().features.size();
            scorers[j] = std::move(model);
            degenerate[j] = 1;
            return;
        }
        std::vector<std::vector<double>> features;
        std::vector<double> targets;
        features.reserve(data.size());
        targets.reserve(data.size());
        for (auto& [x, t] : data) {
            features.push_back(std::move(x));
            targets.push_back(t);
        }
        scorers[j] = gbdt::train(features, targets, config, loss_logs ? &(*loss_logs)[j] : nullptr);
    };

    if (threads <= 1 || universe.size() <= 1) {
        for (std::size_t j = 0; j < universe.size(); ++j) train_one(j);
    } else {
        std::vector<std::thread> workers;
        std::size_t worker_count = std::min(threads, universe.size());
        for (std::size_t w = 0; w < worker_count; ++w) {
            workers.emplace_back([&, w] {
                for (std::size_t j = w; j < universe.size(); j += worker_count) train_one(j);
            });
        }
        for (auto& worker : workers) worker.join();
    }

    for (std::size_t j = 0; j < universe.size(); ++j) {
        if (!degenerate[j]) continue;
        log_warning("label '" + universe[j] + "' has single-class targets; using constant scorer");
        if (degenerate_labels) degenerate_labels->push_back(universe[j]);
    }
    return BrModel(universe, std::move(scorers));
}

double lr_loss_and_gradient(const std::vector<FeatureVector>& features,
                            const std::vector<double>& targets, const LinearModel& model, double l2,
                            LinearModel& gradient) {
    const std::size_t n = features.size();
    const std::size_t dim = model.weights.size();
    gradient.weights.assign(dim, 0.0);
    gradient.bias = 0.0;

    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double margin = targets[i] * model.score(features[i]);
        // log(1 + exp(-m)) computed stably for large |m|
        loss += margin > 0 ? std::log1p(std::exp(-margin))
                           : -margin + std::log1p(std::exp(margin));
        double sigma = 1.0 / (1.0 + std::exp(margin)); // d/dm log(1+e^-m) = -sigma
        double scale = -targets[i] * sigma;
        for (std::size_t d = 0; d < dim; ++d) gradient.weights[d] += scale * features[i][d];
        gradient.bias += scale;
    }
    loss /= static_cast<double>(n);
    gradient.bias /= static_cast<double>(n);
    double penalty = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        gradient.weights[d] = gradient.weights[d] / static_cast<double>(n) + l2 * model.weights[d];
        penalty += model.weights[d] * model.weights[d];
    }
    return loss + 0.5 * l2 * penalty;
}

BrModel train_br_lr(const std::vector<LabeledInstance>& instances,
                    const std::vector<std::string>& universe, const LrConfig& config,
                    std::vector<std::string>* degenerate_labels) {
    if (instances.empty()) throw EmptyTargetsError();
    const std::size_t dim = instances.front().features.size();

    std::vector<LinearModel> scorers;
    scorers.reserve(universe.size());
    for (const auto& label : universe) {
        auto data = binarize(instances, label, universe);
        double constant = 0.0;
        if (degenerate_targets(data, constant)) {
            log_warning("label '" + label + "' has single-class targets; using constant scorer");
            if (degenerate_labels) degenerate_labels->push_back(label);
            LinearModel model;
            model.weights.assign(dim, 0.0);
            model.bias = constant;
            scorers.push_back(std::move(model));
            continue;
        }
        std::vector<FeatureVector> features;
        std::vector<double> targets;
        features.reserve(data.size());
        targets.reserve(data.size());
        for (auto& [x, t] : data) {
            features.push_back(std::move(x));
            targets.push_back(t);
        }

        LinearModel model;
        model.weights.assign(dim, 0.0);
        LinearModel gradient;
        for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
            double loss = lr_loss_and_gradient(features, targets, model, config.l2, gradient);
            if (!std::isfinite(loss)) {
                throw NonFiniteLossError("logistic loss diverged for label '" + label +
                                         "'; lower the step size");
            }
            for (std::size_t d = 0; d < dim; ++d) {
                model.weights[d] -= config.step_size * gradient.weights[d];
            }
            model.bias -= config.step_size * gradient.bias;
        }
        scorers.push_back(std::move(model));
    }
    return BrModel(universe, std::move(scorers));
}

} // namespace mltc
