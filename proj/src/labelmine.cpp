#include "mltc/labelmine.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "mltc/error.hpp"

namespace mltc {

CorpusStats compute_stats(const std::vector<Document>& corpus) {
    if (corpus.empty()) throw EmptyCorpusError();
    CorpusStats stats;
    stats.num_docs = corpus.size();
    for (const auto& doc : corpus) {
        if (doc.tokens.empty()) {
            throw std::invalid_argument("document has no tokens: " + doc.id);
        }
        if (stats.doc_token_counts.count(doc.id)) {
            throw std::invalid_argument("duplicate document id: " + doc.id);
        }
        stats.doc_token_counts[doc.id] = doc.tokens.size();
        std::unordered_set<std::string> seen;
        for (const auto& token : doc.tokens) {
            if (seen.insert(token).second) ++stats.doc_freq[token];
        }
    }
    return stats;
}

TfIdfScore tfidf(const std::string& word, const Document& doc, const CorpusStats& stats) {
    auto total_it = stats.doc_token_counts.find(doc.id);
    if (total_it == stats.doc_token_counts.end()) {
        throw std::invalid_argument("document not covered by stats: " + doc.id);
    }
    std::size_t occurrences = 0;
    for (const auto& token : doc.tokens) {
        if (token == word) ++occurrences;
    }
    std::size_t df = 0;
    if (auto it = stats.doc_freq.find(word); it != stats.doc_freq.end()) df = it->second;

    TfIdfScore score;
    score.tf = static_cast<double>(occurrences) / static_cast<double>(total_it->second);
    // The +1 in the denominator is kept as-is: a token present in every
    // document gets a negative idf and is treated as carrying no mass.
    score.idf = std::log(static_cast<double>(stats.num_docs) / static_cast<double>(df + 1));
    score.tfidf = score.tf * score.idf;
    return score;
}

namespace {

struct RankedWord {
    std::string word;
    double tfidf;
};

// Distinct words of the document ranked by tf-idf descending, lexicographic
// on ties. Input order of the tokens never influences the result.
std::vector<RankedWord> rank_words(const Document& doc, const CorpusStats& stats) {
    std::vector<RankedWord> ranked;
    std::unordered_set<std::string> seen;
    for (const auto& token : doc.tokens) {
        if (!seen.insert(token).second) continue;
        ranked.push_back({token, tfidf(token, doc, stats).tfidf});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedWord& a, const RankedWord& b) {
        if (a.tfidf != b.tfidf) return a.tfidf > b.tfidf;
        return a.word < b.word;
    });
    return ranked;
}

} // namespace

MinedLabels mine_labels(const std::vector<Document>& corpus, const CorpusStats& stats,
                        double threshold, NormalizerMode mode) {
    if (mode == NormalizerMode::TotalMass) {
        if (!(threshold > 0.0 && threshold <= 1.0)) {
            throw InvalidThresholdError("threshold must be in (0, 1] for total-mass mode");
        }
    } else if (!(threshold > 0.0)) {
        throw InvalidThresholdError("threshold must be positive");
    }

    MinedLabels mined;
    mined.threshold = threshold;
    mined.mode = mode;

    std::set<std::string> universe;
    for (const auto& doc : corpus) {
        auto ranked = rank_words(doc, stats);

        double denominator;
        if (mode == NormalizerMode::TotalMass) {
            denominator = 0.0;
            for (const auto& rw : ranked) denominator += std::max(rw.tfidf, 0.0);
        } else {
            denominator = static_cast<double>(ranked.size());
        }

        std::vector<std::string> labels;
        if (denominator > 0.0) {
            double cumulative = 0.0;
            bool reached = false;
            for (const auto& rw : ranked) {
                cumulative += mode == NormalizerMode::TotalMass ? std::max(rw.tfidf, 0.0) : rw.tfidf;
                labels.push_back(rw.word);
                if (cumulative / denominator >= threshold) {
                    reached = true;
                    break;
                }
            }
            if (!reached) labels.clear();
        }
        if (labels.empty()) {
            // Threshold unreachable: keep the single top-ranked word so no
            // document ends up unlabeled.
            labels.push_back(ranked.front().word);
        }
        for (const auto& label : labels) universe.insert(label);
        mined.per_doc.emplace(doc.id, std::move(labels));
    }
    mined.universe.assign(universe.begin(), universe.end());
    return mined;
}

std::vector<LabeledInstance> build_training_set(
    const std::vector<Document>& corpus,
    const std::unordered_map<std::string, FeatureVector>& vectors, const MinedLabels& mined) {
    std::vector<LabeledInstance> instances;
    instances.reserve(corpus.size());
    for (const auto& doc : corpus) {
        auto vec_it = vectors.find(doc.id);
        if (vec_it == vectors.end()) throw MissingVectorError(doc.id);
        auto label_it = mined.per_doc.find(doc.id);
        if (label_it == mined.per_doc.end()) {
            throw std::invalid_argument("document not covered by mined labels: " + doc.id);
        }
        LabeledInstance instance;
        instance.features = vec_it->second;
        instance.labels.insert(label_it->second.begin(), label_it->second.end());
        instances.push_back(std::move(instance));
    }
    return instances;
}

} // namespace mltc
