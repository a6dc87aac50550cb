#ifndef MLTC_JSONL_HPP
#define MLTC_JSONL_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mltc/vectorize.hpp"

namespace mltc {

// One line of a JSON-lines dataset. Unlabeled corpora carry id + text;
// labeled data carries id, labels and either text or a precomputed feature
// vector.
struct DataRecord {
    std::string id;
    std::optional<std::string> text;
    std::optional<FeatureVector> features;
    std::optional<std::vector<std::string>> labels;
};

// Reads a JSON-lines file, enforcing nonempty unique ids. Unknown fields are
// ignored. Throws MalformedLineError with the 1-based line number on bad
// input.
std::vector<DataRecord> read_jsonl(const std::string& path);

std::string record_to_json(const DataRecord& record);

} // namespace mltc

#endif
