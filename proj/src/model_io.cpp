#include "mltc/model_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mltc/error.hpp"

namespace mltc {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json tree_to_json(const std::vector<gbdt::TreeNode>& nodes, int index) {
    const auto& node = nodes[static_cast<std::size_t>(index)];
    if (node.is_leaf()) {
        return json{{"value", node.value}};
    }
    return json{{"feature", node.feature},
                {"threshold", node.threshold},
                {"left", tree_to_json(nodes, node.left)},
                {"right", tree_to_json(nodes, node.right)}};
}

int tree_from_json(const json& j, std::vector<gbdt::TreeNode>& nodes) {
    int index = static_cast<int>(nodes.size());
    nodes.push_back({});
    if (j.contains("value")) {
        nodes[static_cast<std::size_t>(index)].value = j.at("value").get<double>();
        return index;
    }
    nodes[static_cast<std::size_t>(index)].feature = j.at("feature").get<int>();
    nodes[static_cast<std::size_t>(index)].threshold = j.at("threshold").get<double>();
    int left = tree_from_json(j.at("left"), nodes);
    int right = tree_from_json(j.at("right"), nodes);
    nodes[static_cast<std::size_t>(index)].left = left;
    nodes[static_cast<std::size_t>(index)].right = right;
    return index;
}

json gbdt_to_json(const gbdt::GbdtModel& model) {
    json stages = json::array();
    for (const auto& stage : model.stages) {
        stages.push_back(json{{"beta", stage.beta}, {"tree", tree_to_json(stage.tree.nodes(), 0)}});
    }
    return json{{"f0", model.f0},
                {"shrinkage", model.shrinkage},
                {"feature_dim", model.feature_dim},
                {"stages", std::move(stages)}};
}

gbdt::GbdtModel gbdt_from_json(const json& j) {
    gbdt::GbdtModel model;
    model.f0 = j.at("f0").get<double>();
    model.shrinkage = j.at("shrinkage").get<double>();
    model.feature_dim = j.at("feature_dim").get<std::size_t>();
    for (const auto& stage : j.at("stages")) {
        std::vector<gbdt::TreeNode> nodes;
        tree_from_json(stage.at("tree"), nodes);
        for (const auto& node : nodes) {
            if (node.is_leaf()) {
                if (!std::isfinite(node.value)) throw IoError("non-finite leaf value in model");
                continue;
            }
            if (static_cast<std::size_t>(node.feature) >= model.feature_dim) {
                throw IoError("tree references feature " + std::to_string(node.feature) +
                              " outside the model dimension");
            }
            if (node.left < 0 || node.right < 0 ||
                node.left >= static_cast<int>(nodes.size()) ||
                node.right >= static_cast<int>(nodes.size())) {
                throw IoError("tree node points outside the node table");
            }
        }
        model.stages.push_back(
            {gbdt::RegressionTree(std::move(nodes)), stage.at("beta").get<double>()});
    }
    return model;
}

json envelope(const std::string& type) {
    return json{{"format", "mltc-model"}, {"version", kFormatVersion}, {"type", type}};
}

} // namespace

std::string to_json(const BrModel& model) {
    json j = envelope(model.kind() == BrModel::ScorerKind::Gbdt ? "br-gbdt" : "br-lr");
    j["universe"] = model.universe();
    json scorers = json::array();
    if (model.kind() == BrModel::ScorerKind::Gbdt) {
        for (const auto& scorer : model.gbdt_scorers()) scorers.push_back(gbdt_to_json(scorer));
    } else {
        for (const auto& scorer : model.linear_scorers()) {
            scorers.push_back(json{{"weights", scorer.weights}, {"bias", scorer.bias}});
        }
    }
    j["scorers"] = std::move(scorers);
    return j.dump();
}

std::string to_json(const MlknnModel& model) {
    json j = envelope("ml-knn");
    j["universe"] = model.universe();
    j["k"] = model.k();
    j["smoothing"] = model.smoothing();
    j["features"] = model.features();
    j["labels"] = model.label_matrix();
    j["priors"] = model.priors();
    j["posterior_pos"] = model.posterior_pos();
    j["posterior_neg"] = model.posterior_neg();
    return j.dump();
}

AnyModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (j.value("format", "") != "mltc-model") {
            throw IoError("not a model file (missing format marker)");
        }
        if (j.at("version").get<int>() != kFormatVersion) {
            throw IoError("unsupported model format version");
        }
        std::string type = j.at("type").get<std::string>();
        auto universe = j.at("universe").get<std::vector<std::string>>();
        if (type == "br-gbdt") {
            std::vector<gbdt::GbdtModel> scorers;
            for (const auto& s : j.at("scorers")) scorers.push_back(gbdt_from_json(s));
            return BrModel(std::move(universe), std::move(scorers));
        }
        if (type == "br-lr") {
            std::vector<LinearModel> scorers;
            for (const auto& s : j.at("scorers")) {
                LinearModel m;
                m.weights = s.at("weights").get<std::vector<double>>();
                m.bias = s.at("bias").get<double>();
                scorers.push_back(std::move(m));
            }
            return BrModel(std::move(universe), std::move(scorers));
        }
        if (type == "ml-knn") {
            return MlknnModel::from_parts(
                std::move(universe), j.at("k").get<std::size_t>(), j.at("smoothing").get<double>(),
                j.at("features").get<std::vector<FeatureVector>>(),
                j.at("labels").get<std::vector<std::vector<std::uint8_t>>>(),
                j.at("priors").get<std::vector<double>>(),
                j.at("posterior_pos").get<std::vector<std::vector<double>>>(),
                j.at("posterior_neg").get<std::vector<std::vector<double>>>());
        }
        throw IoError("unknown model type: " + type);
    } catch (const json::exception& e) {
        throw IoError(std::string("model file is malformed: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("model file is inconsistent: ") + e.what());
    } catch (const LengthMismatchError& e) {
        throw IoError(std::string("model file is inconsistent: ") + e.what());
    } catch (const DimensionMismatchError& e) {
        throw IoError(std::string("model file is inconsistent: ") + e.what());
    }
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write file: " + tmp.string());
        out << content;
        if (!out.flush()) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("cannot move " + tmp.string() + " to " + target.string() + ": " + ec.message());
    }
}

void save_model(const AnyModel& model, const std::string& path) {
    std::string text =
        std::visit([](const auto& m) { return to_json(m); }, model);
    atomic_write(path, text + "\n");
}

AnyModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

} // namespace mltc
