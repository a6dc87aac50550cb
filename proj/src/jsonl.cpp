#include "mltc/jsonl.hpp"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "mltc/error.hpp"

namespace mltc {

using nlohmann::json;

std::vector<DataRecord> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset: " + path);

    std::vector<DataRecord> records;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw MalformedLineError(path, line_no, std::string("invalid JSON: ") + e.what());
        }
        try {
            if (!j.is_object()) throw MalformedLineError(path, line_no, "expected a JSON object");
            DataRecord record;
            record.id = j.at("id").get<std::string>();
            if (record.id.empty()) throw MalformedLineError(path, line_no, "empty id");
            if (!seen_ids.insert(record.id).second) {
                throw MalformedLineError(path, line_no, "duplicate id: " + record.id);
            }
            if (j.contains("text")) record.text = j.at("text").get<std::string>();
            if (j.contains("features")) {
                record.features = j.at("features").get<FeatureVector>();
            }
            if (j.contains("labels")) {
                record.labels = j.at("labels").get<std::vector<std::string>>();
            }
            records.push_back(std::move(record));
        } catch (const json::exception& e) {
            throw MalformedLineError(path, line_no, e.what());
        }
    }
    return records;
}

std::string record_to_json(const DataRecord& record) {
    json j;
    j["id"] = record.id;
    if (record.text) j["text"] = *record.text;
    if (record.features) j["features"] = *record.features;
    if (record.labels) j["labels"] = *record.labels;
    return j.dump();
}

} // namespace mltc
