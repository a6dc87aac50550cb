#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mltc/error.hpp"
#include "mltc/labelmine.hpp"

using namespace mltc;

namespace {

Document doc(std::string id, std::vector<std::string> tokens) {
    Document d;
    d.id = std::move(id);
    d.tokens = std::move(tokens);
    return d;
}

// d1 carries x/y/z with term frequencies 0.6/0.3/0.1 and a shared idf, so the
// normalized tf-idf masses are 0.6/0.3/0.1 by hand.
std::vector<Document> mass_corpus() {
    return {doc("d1", {"x", "x", "x", "x", "x", "x", "y", "y", "y", "z"}), doc("d2", {"w"}),
            doc("d3", {"w"})};
}

} // namespace

TEST_CASE("compute_stats counts documents and occurrences") {
    std::vector<Document> corpus = {doc("d1", {"a", "b", "a"}), doc("d2", {"b", "c"})};
    auto stats = compute_stats(corpus);
    CHECK(stats.num_docs == 2);
    CHECK(stats.doc_freq.at("a") == 1);
    CHECK(stats.doc_freq.at("b") == 2);
    CHECK(stats.doc_freq.at("c") == 1);
    CHECK(stats.doc_token_counts.at("d1") == 3);
    CHECK(stats.doc_token_counts.at("d2") == 2);
}

TEST_CASE("compute_stats degenerate corpora") {
    auto single = compute_stats({doc("d1", {"a"})});
    CHECK(single.num_docs == 1);
    CHECK(single.doc_freq.at("a") == 1);

    auto twins = compute_stats({doc("d1", {"a"}), doc("d2", {"a"})});
    CHECK(twins.doc_freq.at("a") == 2);

    CHECK_THROWS_AS(compute_stats({}), EmptyCorpusError);
    CHECK_THROWS_AS(compute_stats({doc("d1", {})}), std::invalid_argument);
    CHECK_THROWS_AS(compute_stats({doc("d1", {"a"}), doc("d1", {"b"})}), std::invalid_argument);
}

TEST_CASE("tfidf matches hand evaluation") {
    std::vector<Document> corpus = {doc("d1", {"a", "b", "a"}), doc("d2", {"b", "c"})};
    auto stats = compute_stats(corpus);

    // tf(a, d1) = 2/3; idf(a) = ln(2 / (1+1)) = 0; tfidf = 0
    auto a = tfidf("a", corpus[0], stats);
    CHECK(a.tf == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(a.idf == 0.0);
    CHECK(a.tfidf == 0.0);

    // b occurs in both documents: idf(b) = ln(2/3) < 0 with the printed +1
    auto b = tfidf("b", corpus[0], stats);
    CHECK(b.idf == doctest::Approx(std::log(2.0 / 3.0)).epsilon(1e-15));
    CHECK(b.idf < 0.0);

    // word absent from the document
    auto c = tfidf("c", corpus[0], stats);
    CHECK(c.tf == 0.0);
    CHECK(c.tfidf == 0.0);
}

TEST_CASE("tf sums to one over distinct words of a document") {
    std::mt19937_64 rng(5);
    std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g"};
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Document> corpus;
        std::size_t n = 2 + rng() % 6;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::string> tokens;
            std::size_t len = 1 + rng() % 12;
            for (std::size_t t = 0; t < len; ++t) tokens.push_back(vocab[rng() % vocab.size()]);
            corpus.push_back(doc("doc" + std::to_string(i), std::move(tokens)));
        }
        auto stats = compute_stats(corpus);
        for (const auto& d : corpus) {
            std::set<std::string> distinct(d.tokens.begin(), d.tokens.end());
            double sum = 0.0;
            for (const auto& w : distinct) sum += tfidf(w, d, stats).tf;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("idf is non-increasing in document frequency") {
    // df 1..4 out of N=4 documents
    std::vector<Document> corpus = {doc("d1", {"a", "b", "c", "e"}), doc("d2", {"b", "c", "e"}),
                                    doc("d3", {"c", "e"}), doc("d4", {"e"})};
    auto stats = compute_stats(corpus);
    double prev = tfidf("a", corpus[0], stats).idf;
    for (const std::string w : {"b", "c", "e"}) {
        double cur = tfidf(w, corpus[0], stats).idf;
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("total-mass mining takes the shortest prefix reaching half the mass") {
    auto corpus = mass_corpus();
    auto stats = compute_stats(corpus);
    auto mined = mine_labels(corpus, stats, 0.5, NormalizerMode::TotalMass);
    // prefix mass of x alone is 0.6 >= 0.5
    CHECK(mined.per_doc.at("d1") == std::vector<std::string>{"x"});
}

TEST_CASE("ties break lexicographically") {
    // four words with identical tf-idf; delta = 0.5 selects exactly two
    std::vector<Document> corpus = {doc("d1", {"c", "a", "d", "b"}), doc("d2", {"e"}),
                                    doc("d3", {"e"})};
    auto stats = compute_stats(corpus);
    auto mined = mine_labels(corpus, stats, 0.5, NormalizerMode::TotalMass);
    CHECK(mined.per_doc.at("d1") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("all non-positive tfidf falls back to the first ranked word") {
    // every word appears in every document, so idf = ln(2/3) < 0 throughout
    std::vector<Document> corpus = {doc("d1", {"b", "a"}), doc("d2", {"a", "b"})};
    auto stats = compute_stats(corpus);
    auto mined = mine_labels(corpus, stats, 0.5, NormalizerMode::TotalMass);
    CHECK(mined.per_doc.at("d1") == std::vector<std::string>{"a"});
    CHECK(mined.per_doc.at("d2") == std::vector<std::string>{"a"});
    CHECK(mined.universe == std::vector<std::string>{"a"});
}

TEST_CASE("literal mode divides by the distinct word count") {
    auto corpus = mass_corpus();
    auto stats = compute_stats(corpus);

    // with |D_1| = 3 the masses are tiny; delta = 0.5 is unreachable
    auto strict = mine_labels(corpus, stats, 0.5, NormalizerMode::Literal);
    CHECK(strict.per_doc.at("d1") == std::vector<std::string>{"x"});

    // cum_1/3 = 0.081 < 0.1, cum_2/3 = 0.122 >= 0.1
    auto loose = mine_labels(corpus, stats, 0.1, NormalizerMode::Literal);
    CHECK(loose.per_doc.at("d1") == std::vector<std::string>{"x", "y"});

    // literal mode accepts delta > 1
    CHECK_NOTHROW(mine_labels(corpus, stats, 1.5, NormalizerMode::Literal));
}

TEST_CASE("invalid thresholds are rejected") {
    auto corpus = mass_corpus();
    auto stats = compute_stats(corpus);
    CHECK_THROWS_AS(mine_labels(corpus, stats, 0.0, NormalizerMode::TotalMass),
                    InvalidThresholdError);
    CHECK_THROWS_AS(mine_labels(corpus, stats, 1.5, NormalizerMode::TotalMass),
                    InvalidThresholdError);
    CHECK_THROWS_AS(mine_labels(corpus, stats, 0.0, NormalizerMode::Literal),
                    InvalidThresholdError);
    CHECK_THROWS_AS(mine_labels(corpus, stats, -1.0, NormalizerMode::Literal),
                    InvalidThresholdError);
}

TEST_CASE("mining properties on random corpora") {
    std::mt19937_64 rng(17);
    std::vector<std::string> vocab;
    for (int i = 0; i < 12; ++i) vocab.push_back("w" + std::to_string(i));

    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Document> corpus;
        std::size_t n = 3 + rng() % 10;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::string> tokens;
            std::size_t len = 1 + rng() % 15;
            for (std::size_t t = 0; t < len; ++t) tokens.push_back(vocab[rng() % vocab.size()]);
            corpus.push_back(doc("doc" + std::to_string(i), std::move(tokens)));
        }
        auto stats = compute_stats(corpus);
        double delta = 0.05 + 0.9 * std::uniform_real_distribution<double>(0, 1)(rng);
        auto mined = mine_labels(corpus, stats, delta, NormalizerMode::TotalMass);

        std::set<std::string> expected_universe;
        for (const auto& d : corpus) {
            const auto& labels = mined.per_doc.at(d.id);
            CHECK_FALSE(labels.empty());

            std::set<std::string> distinct(d.tokens.begin(), d.tokens.end());
            CHECK(labels.size() <= distinct.size());
            for (const auto& l : labels) CHECK(distinct.count(l) == 1);
            expected_universe.insert(labels.begin(), labels.end());

            // prefix minimality: dropping the last label falls short of the
            // threshold (single-word fallback exempt)
            double total = 0.0;
            for (const auto& w : distinct) total += std::max(tfidf(w, d, stats).tfidf, 0.0);
            if (labels.size() > 1) {
                double without_last = 0.0;
                for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
                    without_last += std::max(tfidf(labels[i], d, stats).tfidf, 0.0);
                }
                CHECK(without_last / total < delta);
                double with_last = without_last + std::max(tfidf(labels.back(), d, stats).tfidf, 0.0);
                CHECK(with_last / total >= delta);
            }
        }
        CHECK(mined.universe ==
              std::vector<std::string>(expected_universe.begin(), expected_universe.end()));

        // document order must not affect any per-document label list
        auto reversed_corpus = corpus;
        std::reverse(reversed_corpus.begin(), reversed_corpus.end());
        auto mined_reversed =
            mine_labels(reversed_corpus, compute_stats(reversed_corpus), delta,
                        NormalizerMode::TotalMass);
        CHECK(mined_reversed.per_doc == mined.per_doc);
        CHECK(mined_reversed.universe == mined.universe);
    }
}

TEST_CASE("build_training_set emits indicator subsets in corpus order") {
    std::vector<Document> corpus = {doc("d1", {"x", "x", "q"}), doc("d2", {"y", "z", "z", "q"})};
    auto stats = compute_stats(corpus);
    auto mined = mine_labels(corpus, stats, 0.9, NormalizerMode::TotalMass);

    std::unordered_map<std::string, FeatureVector> vectors = {{"d1", {1.0, 0.0}},
                                                              {"d2", {0.0, 1.0}}};
    auto instances = build_training_set(corpus, vectors, mined);
    REQUIRE(instances.size() == 2);
    CHECK(instances[0].features == FeatureVector{1.0, 0.0});
    CHECK(instances[1].features == FeatureVector{0.0, 1.0});
    for (std::size_t i = 0; i < 2; ++i) {
        for (const auto& label : instances[i].labels) {
            CHECK(std::find(mined.universe.begin(), mined.universe.end(), label) !=
                  mined.universe.end());
        }
    }
    CHECK(instances[0].labels ==
          std::set<std::string>(mined.per_doc.at("d1").begin(), mined.per_doc.at("d1").end()));

    vectors.erase("d2");
    CHECK_THROWS_AS(build_training_set(corpus, vectors, mined), MissingVectorError);
}
