#ifndef MLTC_TEXTPREP_HPP
#define MLTC_TEXTPREP_HPP

#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

namespace mltc {

// One raw corpus entry before any processing. noise_fields carries
// structured junk (work-order numbers, caller ids, ...) that cleaning can
// strip out of the text by literal value.
struct RawRecord {
    std::string id;
    std::string text;
    std::map<std::string, std::string> noise_fields;
};

// Named regex patterns for in-text noise. Pattern syntax is ECMAScript.
struct CleanerConfig {
    std::map<std::string, std::string> patterns;
};

// Strips noise from raw text. Removal runs to a fixed point so that
// clean(clean(x)) == clean(x) even when deleting one match exposes another.
class TextCleaner {
public:
    TextCleaner() = default;
    explicit TextCleaner(CleanerConfig config);

    // Removes every occurrence of the selected noise sources from record.text.
    // A name in drop_fields selects either a configured pattern or a literal
    // noise_fields value of the record; unknown names are ignored.
    std::string clean(const RawRecord& record, const std::set<std::string>& drop_fields) const;

    // Applies every configured pattern and every noise field of the record.
    std::string clean(const RawRecord& record) const;

private:
    CleanerConfig config_;
};

struct TokenizerConfig {
    std::vector<std::string> protected_phrases;
    std::unordered_set<std::string> stopwords;
    bool lowercase = true; // ASCII letters only; multi-byte sequences untouched
    // Optional ECMAScript regex describing a token. Empty selects the built-in
    // default: maximal runs of alphanumerics, where any non-ASCII byte counts
    // as alphanumeric.
    std::string token_pattern;
};

struct Document {
    std::string id;
    std::vector<std::string> tokens;

    bool empty() const { return tokens.empty(); }
};

// Tokenizer with protected-phrase extraction. Phrases are matched first,
// left to right, longest match winning, so a technical term never gets split
// or discarded. Remaining text is split by the token pattern and filtered
// against the stopword list.
class Tokenizer {
public:
    explicit Tokenizer(TokenizerConfig config);

    Document tokenize(const std::string& id, const std::string& text) const;

    const TokenizerConfig& config() const { return config_; }

private:
    TokenizerConfig config_;
    std::vector<std::string> phrases_; // normalized, sorted longest first
    std::unordered_set<std::string> stopwords_; // normalized
};

// ASCII-only lowercasing; leaves multi-byte UTF-8 sequences alone.
std::string ascii_lower(std::string text);

// Dictionary file format: one entry per line, UTF-8, '#' starts a comment.
std::vector<std::string> load_dictionary(const std::string& path);

} // namespace mltc

#endif
