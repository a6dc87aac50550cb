#ifndef MLTC_EVAL_HPP
#define MLTC_EVAL_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mltc/labelmine.hpp"

namespace mltc {

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 1;
};

struct LabelCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MetricsReport {
    LabelCounts micro;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    std::map<std::string, LabelCounts> per_label;
    // Set when any ratio hit the 0/0 convention and was reported as zero.
    bool zero_division = false;
};

// Seeded Fisher-Yates shuffle, then the first ceil(fraction * n) instances
// become the training side. The engine and the index draw are pinned so the
// same seed gives the same split on every platform.
std::pair<std::vector<LabeledInstance>, std::vector<LabeledInstance>> split(
    const std::vector<LabeledInstance>& instances, const SplitSpec& spec);

// Micro-averaged precision/recall/F1 over pooled (instance, label) decisions,
// with a per-label breakdown and macro averages alongside.
MetricsReport score(const std::vector<std::set<std::string>>& truth,
                    const std::vector<std::set<std::string>>& predicted,
                    const std::vector<std::string>& universe);

} // namespace mltc

#endif
