#ifndef MLTC_GBDT_HPP
#define MLTC_GBDT_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mltc {
namespace gbdt {

// Flat binary tree. Internal nodes route x left iff x[feature] <= threshold;
// leaves carry the fitted value. Index 0 is the root.
struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    double value = 0.0;
    int left = -1;
    int right = -1;

    bool is_leaf() const { return feature < 0; }
};

struct TreeConfig {
    std::size_t max_depth = 3;
    std::size_t min_samples_leaf = 1;
};

class RegressionTree {
public:
    RegressionTree() = default;
    explicit RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

    // Exact greedy CART fit: every (feature, midpoint-between-distinct-values)
    // candidate is scored by the sum of squared deviations from the two child
    // means; the lowest feature index and then the lowest threshold win ties.
    // A node splits whenever a valid candidate exists, even at zero gain, so
    // structure two levels deep (an interaction between two features) is still
    // reachable within the depth budget.
    static RegressionTree fit(const std::vector<std::vector<double>>& features,
                              const std::vector<double>& targets, const TreeConfig& config);

    double predict(std::span<const double> x) const;

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    bool empty() const { return nodes_.empty(); }

private:
    std::vector<TreeNode> nodes_;
};

struct TrainConfig {
    std::size_t iterations = 100;
    std::size_t max_depth = 3;
    std::size_t min_samples_leaf = 1;
    double shrinkage = 0.1;
    std::int64_t seed = 0; // reserved; exact-greedy training is deterministic
    // Holdout-based early stopping, off by default. When patience > 0 the
    // trailing validation_fraction of the samples is held out and boosting
    // stops after that many iterations without improvement, keeping the best
    // prefix of stages.
    std::size_t early_stop_patience = 0;
    double validation_fraction = 0.2;
};

struct BoostStage {
    RegressionTree tree;
    double beta = 0.0;
};

// Additive model: prediction(x) = f0 + shrinkage * sum_m beta_m * tree_m(x).
struct GbdtModel {
    double f0 = 0.0;
    double shrinkage = 1.0;
    std::size_t feature_dim = 0;
    std::vector<BoostStage> stages;

    double predict(std::span<const double> x) const;
};

// Constant minimizing the squared-error loss: the mean of the targets.
double init_constant(const std::vector<double>& targets);

// Working residuals y - f; the factor two of the squared-error derivative is
// absorbed by the later line search.
std::vector<double> negative_gradient(const std::vector<double>& targets,
                                      const std::vector<double>& predictions);

// Scale for the new tree: the closed-form minimizer of
// sum_i (y_i - f_i - beta * h_i)^2, zero when h is identically zero.
double line_search(const std::vector<double>& targets, const std::vector<double>& prev_predictions,
                   const std::vector<double>& tree_outputs);

// Full boosting loop. When loss_log is given it receives the training loss
// after every accepted iteration (index 0 holds the loss of the constant
// model).
GbdtModel train(const std::vector<std::vector<double>>& features,
                const std::vector<double>& targets, const TrainConfig& config,
                std::vector<double>* loss_log = nullptr);

} // namespace gbdt
} // namespace mltc

#endif
