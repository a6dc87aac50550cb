#include "mltc/vectorize.hpp"

#include <charconv>
#include <fstream>

#include "mltc/error.hpp"

namespace mltc {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (start <= line.size()) {
        std::size_t space = line.find(' ', start);
        if (space == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, space - start));
        start = space + 1;
    }
    return fields;
}

} // namespace

EmbeddingTable load_embeddings(const std::string& path, std::optional<std::size_t> expected_dim) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open embedding file: " + path);

    EmbeddingTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto fields = split_fields(line);
        if (fields.size() < 2 || fields[0].empty()) {
            throw MalformedLineError(path, line_no, "expected a token followed by vector values");
        }
        std::size_t value_count = fields.size() - 1;
        if (table.dim == 0) {
            if (expected_dim && *expected_dim != value_count) {
                throw DimensionMismatchError(*expected_dim, value_count);
            }
            table.dim = value_count;
        } else if (value_count != table.dim) {
            throw MalformedLineError(path, line_no,
                                     "expected " + std::to_string(table.dim) + " values, got " +
                                         std::to_string(value_count));
        }
        FeatureVector values(value_count);
        for (std::size_t i = 0; i < value_count; ++i) {
            const std::string_view field = fields[i + 1];
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), values[i]);
            if (ec != std::errc() || ptr != field.data() + field.size()) {
                throw MalformedLineError(path, line_no,
                                         "bad number '" + std::string(field) + "'");
            }
        }
        std::string token(fields[0]);
        auto it = table.vectors.find(token);
        if (it != table.vectors.end()) {
            log_warning("duplicate embedding token '" + token + "' at " + path + ":" +
                        std::to_string(line_no) + "; keeping the later entry");
            it->second = std::move(values);
        } else {
            table.vectors.emplace(std::move(token), std::move(values));
        }
    }
    if (table.vectors.empty()) throw EmptyFileError(path);
    return table;
}

EmbedResult embed(const Document& doc, const EmbeddingTable& table) {
    EmbedResult result;
    result.values.assign(table.dim, 0.0);
    std::size_t hits = 0;
    for (const auto& token : doc.tokens) {
        auto it = table.vectors.find(token);
        if (it == table.vectors.end()) continue;
        ++hits;
        for (std::size_t i = 0; i < table.dim; ++i) result.values[i] += it->second[i];
    }
    if (hits == 0) {
        result.out_of_vocabulary = true;
        return result;
    }
    for (double& v : result.values) v /= static_cast<double>(hits);
    return result;
}

} // namespace mltc
