#ifndef MLTC_MLKNN_HPP
#define MLTC_MLKNN_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mltc/labelmine.hpp"

namespace mltc {

// Lazy multi-label k-nearest-neighbor classifier. For each label it keeps the
// smoothed prior and, for every possible neighbor count c in 0..k, the
// likelihood of seeing c positive neighbors given that the label does or does
// not apply. Prediction counts the query's positive neighbors per label and
// takes the MAP decision.
class MlknnModel {
public:
    MlknnModel() = default;

    static MlknnModel train(const std::vector<LabeledInstance>& instances,
                            const std::vector<std::string>& universe, std::size_t k,
                            double smoothing);

    std::vector<std::string> predict(std::span<const double> x) const;
    // Posterior ratio P(H|C) / P(!H|C) per label; >= 1 claims the label.
    std::vector<double> scores(std::span<const double> x) const;

    const std::vector<std::string>& universe() const { return universe_; }
    std::size_t k() const { return k_; }
    double smoothing() const { return smoothing_; }
    std::size_t feature_dim() const { return features_.empty() ? 0 : features_.front().size(); }

    // Serialization accessors.
    const std::vector<FeatureVector>& features() const { return features_; }
    const std::vector<std::vector<std::uint8_t>>& label_matrix() const { return label_matrix_; }
    const std::vector<double>& priors() const { return priors_; }
    const std::vector<std::vector<double>>& posterior_pos() const { return posterior_pos_; }
    const std::vector<std::vector<double>>& posterior_neg() const { return posterior_neg_; }

    static MlknnModel from_parts(std::vector<std::string> universe, std::size_t k, double smoothing,
                                 std::vector<FeatureVector> features,
                                 std::vector<std::vector<std::uint8_t>> label_matrix,
                                 std::vector<double> priors,
                                 std::vector<std::vector<double>> posterior_pos,
                                 std::vector<std::vector<double>> posterior_neg);

private:
    std::vector<std::string> universe_;
    std::size_t k_ = 0;
    double smoothing_ = 1.0;
    std::vector<FeatureVector> features_;
    std::vector<std::vector<std::uint8_t>> label_matrix_; // [instance][label]
    std::vector<double> priors_;                          // P(H_j)
    std::vector<std::vector<double>> posterior_pos_;      // P(C=c | H_j)
    std::vector<std::vector<double>> posterior_neg_;      // P(C=c | !H_j)
};

// k nearest rows by Euclidean distance; ties resolved by lower row index.
// exclude marks a row index to skip (or npos for none).
std::vector<std::size_t> nearest_neighbors(const std::vector<FeatureVector>& rows,
                                           std::span<const double> x, std::size_t k,
                                           std::size_t exclude);

} // namespace mltc

#endif
