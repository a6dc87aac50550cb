#ifndef MLTC_MULTILABEL_HPP
#define MLTC_MULTILABEL_HPP

#include <span>
#include <string>
#include <vector>

#include "mltc/gbdt.hpp"
#include "mltc/labelmine.hpp"

namespace mltc {

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;

    double score(std::span<const double> x) const;
};

struct LrConfig {
    std::size_t epochs = 500;
    double step_size = 0.1;
    double l2 = 1e-4;
};

// One independent binary scorer per label. A positive score claims the label;
// the shared sign threshold works because training targets are encoded -1/+1.
class BrModel {
public:
    enum class ScorerKind { Gbdt, Linear };

    BrModel() = default;
    BrModel(std::vector<std::string> universe, std::vector<gbdt::GbdtModel> scorers);
    BrModel(std::vector<std::string> universe, std::vector<LinearModel> scorers);

    const std::vector<std::string>& universe() const { return universe_; }
    ScorerKind kind() const { return kind_; }
    std::size_t feature_dim() const;

    std::vector<double> scores(std::span<const double> x) const;
    std::vector<std::string> predict(std::span<const double> x) const;

    const std::vector<gbdt::GbdtModel>& gbdt_scorers() const { return gbdt_scorers_; }
    const std::vector<LinearModel>& linear_scorers() const { return linear_scorers_; }

private:
    std::vector<std::string> universe_;
    ScorerKind kind_ = ScorerKind::Gbdt;
    std::vector<gbdt::GbdtModel> gbdt_scorers_;
    std::vector<LinearModel> linear_scorers_;
};

// Per-label view of the training set: +1 when the instance carries the label,
// -1 otherwise, in instance order.
std::vector<std::pair<FeatureVector, double>> binarize(const std::vector<LabeledInstance>& instances,
                                                       const std::string& label,
                                                       const std::vector<std::string>& universe);

// Positive-score labels; when every score is non-positive, the single
// highest-scoring label (lowest index on ties) so the result is never empty.
std::vector<std::size_t> select_labels(std::span<const double> scores);

// Trains one boosted scorer per universe label. Labels whose targets are all
// one class get a constant scorer instead of a fitted one; such labels are
// appended to degenerate_labels when given. threads > 1 trains labels
// concurrently; results are identical to the sequential run. loss_logs, when
// given, receives one per-iteration training-loss curve per label.
BrModel train_br_gbdt(const std::vector<LabeledInstance>& instances,
                      const std::vector<std::string>& universe, const gbdt::TrainConfig& config,
                      std::vector<std::string>* degenerate_labels = nullptr,
                      std::size_t threads = 1,
                      std::vector<std::vector<double>>* loss_logs = nullptr);

// Loss and gradient of L2-regularized logistic loss with -1/+1 targets, mean
// over instances; the bias is not penalized. Exposed for gradient checking.
double lr_loss_and_gradient(const std::vector<FeatureVector>& features,
                            const std::vector<double>& targets, const LinearModel& model, double l2,
                            LinearModel& gradient);

// Full-batch gradient-descent logistic regression per label.
BrModel train_br_lr(const std::vector<LabeledInstance>& instances,
                    const std::vector<std::string>& universe, const LrConfig& config,
                    std::vector<std::string>* degenerate_labels = nullptr);

} // namespace mltc

#endif
