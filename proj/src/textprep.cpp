#include "mltc/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>

#include "mltc/error.hpp"

namespace mltc {

std::string ascii_lower(std::string text) {
    for (char& c : text) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return text;
}

TextCleaner::TextCleaner(CleanerConfig config) : config_(std::move(config)) {
    for (const auto& [name, pattern] : config_.patterns) {
        try {
            std::regex compiled(pattern);
        } catch (const std::regex_error& e) {
            throw ConfigError("bad noise pattern '" + name + "': " + e.what());
        }
    }
}

namespace {

std::string remove_all_literal(std::string text, const std::string& needle) {
    if (needle.empty()) return text;
    std::size_t pos;
    while ((pos = text.find(needle)) != std::string::npos) {
        text.erase(pos, needle.size());
    }
    return text;
}

// Repeats regex removal until the text stops changing. Deleting a match can
// splice the surrounding text into a new match; the fixed point makes clean
// idempotent. Terminates because each pass shortens the text.
std::string remove_all_matches(std::string text, const std::regex& pattern) {
    for (;;) {
        std::string next = std::regex_replace(text, pattern, "");
        if (next.size() >= text.size()) return next;
        text = std::move(next);
    }
}

} // namespace

std::string TextCleaner::clean(const RawRecord& record, const std::set<std::string>& drop_fields) const {
    std::string text = record.text;
    for (const auto& name : drop_fields) {
        auto field = record.noise_fields.find(name);
        if (field != record.noise_fields.end()) {
            text = remove_all_literal(std::move(text), field->second);
        }
        auto pattern = config_.patterns.find(name);
        if (pattern != config_.patterns.end()) {
            text = remove_all_matches(std::move(text), std::regex(pattern->second));
        }
    }
    return text;
}

std::string TextCleaner::clean(const RawRecord& record) const {
    std::set<std::string> all;
    for (const auto& [name, value] : record.noise_fields) all.insert(name);
    for (const auto& [name, pattern] : config_.patterns) all.insert(name);
    return clean(record, all);
}

Tokenizer::Tokenizer(TokenizerConfig config) : config_(std::move(config)) {
    for (const auto& word : config_.stopwords) {
        stopwords_.insert(config_.lowercase ? ascii_lower(word) : word);
    }
    for (const auto& phrase : config_.protected_phrases) {
        std::string normalized = config_.lowercase ? ascii_lower(phrase) : phrase;
        if (normalized.empty()) continue;
        if (stopwords_.count(normalized)) {
            throw ConfigError("protected phrase is also a stopword: " + phrase);
        }
        phrases_.push_back(std::move(normalized));
    }
    // Longest first so the longest match wins at any position; lexicographic
    // second key keeps the order reproducible.
    std::sort(phrases_.begin(), phrases_.end(), [](const std::string& a, const std::string& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    });
    phrases_.erase(std::unique(phrases_.begin(), phrases_.end()), phrases_.end());
    if (!config_.token_pattern.empty()) {
        try {
            std::regex compiled(config_.token_pattern);
        } catch (const std::regex_error& e) {
            throw ConfigError(std::string("bad token pattern: ") + e.what());
        }
    }
}

namespace {

bool is_token_byte(unsigned char c) {
    // Non-ASCII bytes are token material: CJK and other multi-byte characters
    // must survive byte-level splitting intact.
    return std::isalnum(c) != 0 || c >= 0x80;
}

void split_segment(const std::string& segment, const std::string& token_pattern,
                   std::vector<std::string>& out) {
    if (token_pattern.empty()) {
        std::size_t i = 0;
        while (i < segment.size()) {
            if (!is_token_byte(static_cast<unsigned char>(segment[i]))) {
                ++i;
                continue;
            }
            std::size_t start = i;
            while (i < segment.size() && is_token_byte(static_cast<unsigned char>(segment[i]))) ++i;
            out.push_back(segment.substr(start, i - start));
        }
        return;
    }
    std::regex pattern(token_pattern);
    auto begin = std::sregex_iterator(segment.begin(), segment.end(), pattern);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        if (!it->str().empty()) out.push_back(it->str());
    }
}

} // namespace

Document Tokenizer::tokenize(const std::string& id, const std::string& text) const {
    std::string source = config_.lowercase ? ascii_lower(text) : text;

    std::vector<std::string> raw_tokens;
    std::size_t segment_start = 0;
    std::size_t i = 0;
    while (i < source.size()) {
        const std::string* matched = nullptr;
        for (const auto& phrase : phrases_) {
            if (source.compare(i, phrase.size(), phrase) == 0) {
                matched = &phrase;
                break; // phrases_ is longest-first
            }
        }
        if (matched) {
            split_segment(source.substr(segment_start, i - segment_start),
                          config_.token_pattern, raw_tokens);
            raw_tokens.push_back(*matched);
            i += matched->size();
            segment_start = i;
        } else {
            ++i;
        }
    }
    split_segment(source.substr(segment_start), config_.token_pattern, raw_tokens);

    Document doc;
    doc.id = id;
    doc.tokens.reserve(raw_tokens.size());
    for (auto& token : raw_tokens) {
        if (stopwords_.count(token)) continue;
        doc.tokens.push_back(std::move(token));
    }
    return doc;
}

std::vector<std::string> load_dictionary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dictionary file: " + path);
    std::vector<std::string> entries;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim surrounding ASCII whitespace
        auto first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r\n");
        entries.push_back(line.substr(first, last - first + 1));
    }
    return entries;
}

} // namespace mltc
