#include "mltc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mltc/error.hpp"

namespace mltc {

namespace {

// Unbiased bounded draw by rejection; keeps the shuffle independent of the
// standard library's distribution implementations.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t value;
    do {
        value = rng();
    } while (value >= limit);
    return value % bound;
}

void fill_ratios(LabelCounts& counts, bool& zero_division) {
    if (counts.tp + counts.fp > 0) {
        counts.precision = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fp);
    } else {
        zero_division = true;
    }
    if (counts.tp + counts.fn > 0) {
        counts.recall = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
    } else {
        zero_division = true;
    }
    if (counts.precision + counts.recall > 0) {
        counts.f1 = 2.0 * counts.precision * counts.recall / (counts.precision + counts.recall);
    } else {
        zero_division = true;
    }
}

} // namespace

std::pair<std::vector<LabeledInstance>, std::vector<LabeledInstance>> split(
    const std::vector<LabeledInstance>& instances, const SplitSpec& spec) {
    if (instances.size() < 2) throw TooFewInstancesError(instances.size());
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw std::invalid_argument("train_fraction must be in (0, 1)");
    }

    std::vector<std::size_t> order(instances.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(spec.seed);
    for (std::size_t i = order.size() - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(draw_below(rng, i + 1));
        std::swap(order[i], order[j]);
    }

    auto train_size = static_cast<std::size_t>(
        std::ceil(spec.train_fraction * static_cast<double>(instances.size())));
    train_size = std::min(train_size, instances.size());

    std::pair<std::vector<LabeledInstance>, std::vector<LabeledInstance>> result;
    result.first.reserve(train_size);
    result.second.reserve(instances.size() - train_size);
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < train_size ? result.first : result.second).push_back(instances[order[i]]);
    }
    return result;
}

MetricsReport score(const std::vector<std::set<std::string>>& truth,
                    const std::vector<std::set<std::string>>& predicted,
                    const std::vector<std::string>& universe) {
    if (truth.size() != predicted.size()) throw LengthMismatchError(truth.size(), predicted.size());

    MetricsReport report;
    for (const auto& label : universe) report.per_label[label] = LabelCounts{};

    auto check_known = [&](const std::set<std::string>& labels) {
        for (const auto& label : labels) {
            if (!report.per_label.count(label)) throw UnknownLabelError(label);
        }
    };

    for (std::size_t i = 0; i < truth.size(); ++i) {
        check_known(truth[i]);
        check_known(predicted[i]);
        for (const auto& label : predicted[i]) {
            if (truth[i].count(label)) {
                ++report.per_label[label].tp;
            } else {
                ++report.per_label[label].fp;
            }
        }
        for (const auto& label : truth[i]) {
            if (!predicted[i].count(label)) ++report.per_label[label].fn;
        }
    }

    for (auto& [label, counts] : report.per_label) {
        report.micro.tp += counts.tp;
        report.micro.fp += counts.fp;
        report.micro.fn += counts.fn;
        fill_ratios(counts, report.zero_division);
        report.macro_precision += counts.precision;
        report.macro_recall += counts.recall;
        report.macro_f1 += counts.f1;
    }
    fill_ratios(report.micro, report.zero_division);
    if (!report.per_label.empty()) {
        const auto q = static_cast<double>(report.per_label.size());
        report.macro_precision /= q;
        report.macro_recall /= q;
        report.macro_f1 /= q;
    }
    return report;
}

} // namespace mltc
