#ifndef MLTC_LABELMINE_HPP
#define MLTC_LABELMINE_HPP

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "mltc/textprep.hpp"
#include "mltc/vectorize.hpp"

namespace mltc {

// Corpus-level counts backing tf-idf. doc_freq counts documents containing a
// token at least once; doc_token_counts counts token occurrences per document.
struct CorpusStats {
    std::size_t num_docs = 0;
    std::unordered_map<std::string, std::size_t> doc_freq;
    std::unordered_map<std::string, std::size_t> doc_token_counts;
};

struct TfIdfScore {
    double tf = 0.0;
    double idf = 0.0;
    double tfidf = 0.0;
};

// How the cumulative tf-idf mass of a candidate prefix is normalized before
// comparing against the threshold.
//   TotalMass — divide by the document's total positive tf-idf mass, so the
//               threshold selects "this share of what distinguishes the text".
//   Literal   — divide by the number of distinct words in the document.
enum class NormalizerMode { TotalMass, Literal };

struct MinedLabels {
    std::map<std::string, std::vector<std::string>> per_doc; // id -> ordered labels
    std::vector<std::string> universe;                       // sorted, deduplicated
    double threshold = 0.5;
    NormalizerMode mode = NormalizerMode::TotalMass;
};

struct LabeledInstance {
    FeatureVector features;
    std::set<std::string> labels;
};

CorpusStats compute_stats(const std::vector<Document>& corpus);

TfIdfScore tfidf(const std::string& word, const Document& doc, const CorpusStats& stats);

// Per-document label extraction: distinct words sorted by tf-idf descending
// (ties lexicographic), then the shortest prefix whose normalized cumulative
// mass reaches the threshold. When the threshold is unreachable the single
// top-ranked word becomes the label.
MinedLabels mine_labels(const std::vector<Document>& corpus, const CorpusStats& stats,
                        double threshold, NormalizerMode mode = NormalizerMode::TotalMass);

// Pairs each document's feature vector with its mined label set, in corpus
// order.
std::vector<LabeledInstance> build_training_set(
    const std::vector<Document>& corpus,
    const std::unordered_map<std::string, FeatureVector>& vectors, const MinedLabels& mined);

} // namespace mltc

#endif
