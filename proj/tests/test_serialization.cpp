#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mltc/error.hpp"
#include "mltc/mlknn.hpp"
#include "mltc/model_io.hpp"
#include "mltc/multilabel.hpp"
#include "testutil.hpp"

using namespace mltc;

namespace {

std::vector<LabeledInstance> random_instances(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                                              const std::vector<std::string>& universe) {
    std::vector<LabeledInstance> out(n);
    for (auto& inst : out) {
        for (std::size_t f = 0; f < dim; ++f) inst.features.push_back(testutil::gauss(rng));
        for (const auto& l : universe) {
            if (rng() % 2) inst.labels.insert(l);
        }
    }
    // guarantee at least one positive and one negative per label
    for (std::size_t j = 0; j < universe.size(); ++j) {
        out[j % n].labels.insert(universe[j]);
        out[(j + 1) % n].labels.erase(universe[j]);
    }
    return out;
}

void check_roundtrip(const AnyModel& model, std::mt19937_64& rng, std::size_t dim,
                     const std::string& path) {
    save_model(model, path);
    auto loaded = load_model(path);
    for (int probe = 0; probe < 200; ++probe) {
        FeatureVector x;
        for (std::size_t f = 0; f < dim; ++f) x.push_back(testutil::gauss(rng));
        auto original = std::visit([&](const auto& m) { return m.scores(x); }, model);
        auto restored = std::visit([&](const auto& m) { return m.scores(x); }, loaded);
        REQUIRE(original.size() == restored.size());
        for (std::size_t j = 0; j < original.size(); ++j) {
            CHECK(original[j] == restored[j]); // bitwise
        }
        auto labels_a = std::visit([&](const auto& m) { return m.predict(x); }, model);
        auto labels_b = std::visit([&](const auto& m) { return m.predict(x); }, loaded);
        CHECK(labels_a == labels_b);
    }
    std::filesystem::remove(path);
}

} // namespace

TEST_CASE("br-gbdt round trip preserves every prediction bit") {
    auto rng = testutil::make_rng(41);
    std::vector<std::string> universe = {"u", "v", "w"};
    auto data = random_instances(rng, 40, 3, universe);
    auto model = train_br_gbdt(data, universe, gbdt::TrainConfig{15, 3, 1, 0.1});
    check_roundtrip(AnyModel(std::move(model)), rng, 3, "roundtrip_gbdt.json");
}

TEST_CASE("br-lr round trip preserves every prediction bit") {
    auto rng = testutil::make_rng(43);
    std::vector<std::string> universe = {"u", "v"};
    auto data = random_instances(rng, 30, 4, universe);
    auto model = train_br_lr(data, universe, LrConfig{100, 0.2, 1e-3});
    check_roundtrip(AnyModel(std::move(model)), rng, 4, "roundtrip_lr.json");
}

TEST_CASE("ml-knn round trip preserves every prediction bit") {
    auto rng = testutil::make_rng(47);
    std::vector<std::string> universe = {"u", "v", "w"};
    auto data = random_instances(rng, 25, 2, universe);
    auto model = MlknnModel::train(data, universe, 3, 1.0);
    check_roundtrip(AnyModel(std::move(model)), rng, 2, "roundtrip_mlknn.json");
}

TEST_CASE("loading rejects junk and version drift") {
    CHECK_THROWS_AS(model_from_json("not json at all"), IoError);
    CHECK_THROWS_AS(model_from_json("{\"format\": \"other\"}"), IoError);
    CHECK_THROWS_AS(
        model_from_json(
            R"({"format": "mltc-model", "version": 99, "type": "br-lr", "universe": []})"),
        IoError);
    CHECK_THROWS_AS(
        model_from_json(
            R"({"format": "mltc-model", "version": 1, "type": "mystery", "universe": []})"),
        IoError);
    CHECK_THROWS_AS(load_model("no_such_model_file.json"), IoError);
}

TEST_CASE("loading rejects structurally corrupt models") {
    // tree split on a feature outside the declared dimension
    CHECK_THROWS_AS(model_from_json(R"({"format": "mltc-model", "version": 1, "type": "br-gbdt",
        "universe": ["a"], "scorers": [{"f0": 0.0, "shrinkage": 0.1, "feature_dim": 2,
        "stages": [{"beta": 1.0, "tree": {"feature": 7, "threshold": 0.5,
        "left": {"value": 1.0}, "right": {"value": -1.0}}}]}]})"),
                    IoError);
    // mismatched per-label scorer dimensions
    CHECK_THROWS_AS(model_from_json(R"({"format": "mltc-model", "version": 1, "type": "br-lr",
        "universe": ["a", "b"], "scorers": [{"weights": [1.0, 2.0], "bias": 0.0},
        {"weights": [1.0], "bias": 0.0}]})"),
                    IoError);
    // posterior table too short for the stored k
    CHECK_THROWS_AS(model_from_json(R"({"format": "mltc-model", "version": 1, "type": "ml-knn",
        "universe": ["a"], "k": 2, "smoothing": 1.0,
        "features": [[0.0], [1.0], [2.0]], "labels": [[1], [0], [1]],
        "priors": [0.5], "posterior_pos": [[0.5, 0.5]], "posterior_neg": [[0.5, 0.5]]})"),
                    IoError);
}

TEST_CASE("atomic_write replaces content and leaves no temp file") {
    const std::string path = "atomic_probe.txt";
    atomic_write(path, "first");
    atomic_write(path, "second");
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "second");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    std::filesystem::remove(path);
}

TEST_CASE("the envelope carries the scorer type") {
    std::vector<LinearModel> scorers(1);
    scorers[0].weights = {1.0};
    BrModel lr({"a"}, std::move(scorers));
    CHECK(to_json(lr).find("\"br-lr\"") != std::string::npos);

    std::vector<gbdt::GbdtModel> boosted(1);
    boosted[0].feature_dim = 1;
    BrModel gb({"a"}, std::move(boosted));
    CHECK(to_json(gb).find("\"br-gbdt\"") != std::string::npos);
}
