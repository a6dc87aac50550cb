// mltc — multi-label text classification pipeline driver.
//
// Subcommands: mine-labels, train, predict, eval. One flat config file feeds
// every stage; --set key=value overrides individual entries. Diagnostics go
// to stderr, data goes to files only.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mltc/config.hpp"
#include "mltc/error.hpp"
#include "mltc/eval.hpp"
#include "mltc/jsonl.hpp"
#include "mltc/labelmine.hpp"
#include "mltc/mlknn.hpp"
#include "mltc/model_io.hpp"
#include "mltc/multilabel.hpp"
#include "mltc/textprep.hpp"
#include "mltc/vectorize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitEmptyCorpus = 4;
constexpr int kExitDegenerate = 5;

using nlohmann::json;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides; // --set key=value
};

mltc::PipelineConfig resolve_config(const CommonArgs& args) {
    mltc::PipelineConfig config;
    if (!args.config_path.empty()) config = mltc::load_config(args.config_path);
    for (const auto& entry : args.overrides) {
        auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw mltc::ConfigError("--set expects key=value, got '" + entry + "'");
        }
        mltc::apply_config_entry(config, entry.substr(0, eq), entry.substr(eq + 1));
    }
    mltc::validate(config);
    return config;
}

mltc::Tokenizer build_tokenizer(const mltc::PipelineConfig& config) {
    mltc::TokenizerConfig tok;
    tok.lowercase = config.lowercase;
    tok.token_pattern = config.token_pattern;
    if (!config.stopwords_path.empty()) {
        for (auto& word : mltc::load_dictionary(config.stopwords_path)) {
            tok.stopwords.insert(std::move(word));
        }
    }
    if (!config.phrases_path.empty()) {
        tok.protected_phrases = mltc::load_dictionary(config.phrases_path);
    }
    return mltc::Tokenizer(std::move(tok));
}

mltc::TextCleaner build_cleaner(const mltc::PipelineConfig& config) {
    mltc::CleanerConfig cleaner;
    cleaner.patterns = config.noise_patterns;
    return mltc::TextCleaner(std::move(cleaner));
}

// Joins text from a secondary corpus file into records missing both text and
// features (mine-labels output carries only ids and labels).
void join_corpus_text(std::vector<mltc::DataRecord>& records, const std::string& corpus_path) {
    auto corpus = mltc::read_jsonl(corpus_path);
    std::map<std::string, std::string> text_by_id;
    for (auto& record : corpus) {
        if (record.text) text_by_id[record.id] = std::move(*record.text);
    }
    for (auto& record : records) {
        if (record.text || record.features) continue;
        auto it = text_by_id.find(record.id);
        if (it == text_by_id.end()) {
            throw mltc::IoError("record '" + record.id + "' has no text in the corpus file");
        }
        record.text = it->second;
    }
}

// Turns records into feature vectors: precomputed features pass through,
// text goes through cleaning, tokenization and embedding averaging.
std::vector<mltc::FeatureVector> featurize(const std::vector<mltc::DataRecord>& records,
                                           const mltc::PipelineConfig& config) {
    bool needs_text_path = false;
    for (const auto& record : records) {
        if (!record.features) needs_text_path = true;
    }

    std::optional<mltc::Tokenizer> tokenizer;
    std::optional<mltc::TextCleaner> cleaner;
    std::optional<mltc::EmbeddingTable> table;
    if (needs_text_path) {
        if (config.embedding_path.empty()) {
            throw mltc::ConfigError(
                "records carry raw text; set embedding.path to vectorize them");
        }
        tokenizer.emplace(build_tokenizer(config));
        cleaner.emplace(build_cleaner(config));
        std::optional<std::size_t> expected;
        if (config.embedding_dim > 0) expected = config.embedding_dim;
        table = mltc::load_embeddings(config.embedding_path, expected);
    }

    std::vector<mltc::FeatureVector> features;
    features.reserve(records.size());
    std::size_t dim = 0;
    std::size_t oov_count = 0;
    for (const auto& record : records) {
        mltc::FeatureVector vec;
        if (record.features) {
            vec = *record.features;
        } else if (record.text) {
            mltc::RawRecord raw{record.id, *record.text, {}};
            auto doc = tokenizer->tokenize(record.id, cleaner->clean(raw));
            auto embedded = mltc::embed(doc, *table);
            if (embedded.out_of_vocabulary) ++oov_count;
            vec = std::move(embedded.values);
        } else {
            throw mltc::IoError("record '" + record.id + "' has neither features nor text");
        }
        if (dim == 0) {
            dim = vec.size();
        } else if (vec.size() != dim) {
            throw mltc::IoError("record '" + record.id + "' has " + std::to_string(vec.size()) +
                                " features, expected " + std::to_string(dim));
        }
        features.push_back(std::move(vec));
    }
    if (oov_count > 0) {
        mltc::log_warning(std::to_string(oov_count) +
                          " document(s) had no in-vocabulary token; embedded as zero vectors");
    }
    return features;
}

std::vector<mltc::LabeledInstance> to_instances(const std::vector<mltc::DataRecord>& records,
                                                const std::vector<mltc::FeatureVector>& features) {
    std::vector<mltc::LabeledInstance> instances;
    instances.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!records[i].labels) {
            throw mltc::IoError("record '" + records[i].id + "' has no labels");
        }
        mltc::LabeledInstance instance;
        instance.features = features[i];
        instance.labels.insert(records[i].labels->begin(), records[i].labels->end());
        instances.push_back(std::move(instance));
    }
    return instances;
}

int cmd_mine_labels(const std::string& corpus_path, const CommonArgs& common,
                    const std::string& out_path) {
    auto config = resolve_config(common);
    auto records = mltc::read_jsonl(corpus_path);

    auto tokenizer = build_tokenizer(config);
    auto cleaner = build_cleaner(config);

    std::vector<mltc::Document> corpus;
    for (const auto& record : records) {
        if (!record.text) {
            throw mltc::IoError("record '" + record.id + "' has no text");
        }
        mltc::RawRecord raw{record.id, *record.text, {}};
        auto doc = tokenizer.tokenize(record.id, cleaner.clean(raw));
        if (doc.empty()) {
            mltc::log_warning("document '" + record.id + "' is empty after preprocessing; dropped");
            continue;
        }
        corpus.push_back(std::move(doc));
    }
    if (corpus.empty()) {
        std::cerr << "error: no documents survived preprocessing\n";
        return kExitEmptyCorpus;
    }

    auto stats = mltc::compute_stats(corpus);
    auto mined = mltc::mine_labels(corpus, stats, config.delta, config.normalizer);

    std::string body;
    std::map<std::size_t, std::size_t> cardinality;
    for (const auto& doc : corpus) {
        const auto& labels = mined.per_doc.at(doc.id);
        ++cardinality[labels.size()];
        mltc::DataRecord line;
        line.id = doc.id;
        line.labels = labels;
        body += mltc::record_to_json(line);
        body += "\n";
    }
    mltc::atomic_write(out_path, body);

    std::string universe_body;
    for (const auto& label : mined.universe) {
        universe_body += label;
        universe_body += "\n";
    }
    mltc::atomic_write(out_path + ".universe", universe_body);

    std::cerr << "mined " << mined.universe.size() << " distinct labels over " << corpus.size()
              << " documents\n";
    std::cerr << "label cardinality histogram:\n";
    for (const auto& [count, docs] : cardinality) {
        std::cerr << "  " << count << " label(s): " << docs << " document(s)\n";
    }
    return kExitOk;
}

std::vector<std::string> resolve_universe(const std::vector<mltc::DataRecord>& records,
                                          const std::string& universe_path) {
    if (!universe_path.empty()) {
        auto labels = mltc::load_dictionary(universe_path);
        std::set<std::string> unique(labels.begin(), labels.end());
        return {unique.begin(), unique.end()};
    }
    std::set<std::string> unique;
    for (const auto& record : records) {
        if (record.labels) unique.insert(record.labels->begin(), record.labels->end());
    }
    return {unique.begin(), unique.end()};
}

int cmd_train(const std::string& data_path, const std::string& corpus_path,
              const CommonArgs& common, const std::string& model_path,
              const std::string& algorithm, const std::string& universe_path, bool use_split,
              bool strict) {
    auto config = resolve_config(common);
    if (algorithm != "br-gbdt" && algorithm != "br-lr" && algorithm != "ml-knn") {
        throw mltc::ConfigError("unknown algorithm '" + algorithm +
                                "' (expected br-gbdt, br-lr or ml-knn)");
    }

    auto records = mltc::read_jsonl(data_path);
    if (!corpus_path.empty()) join_corpus_text(records, corpus_path);
    auto features = featurize(records, config);
    auto instances = to_instances(records, features);
    auto universe = resolve_universe(records, universe_path);
    if (universe.empty()) throw mltc::IoError("training data carries no labels");

    if (use_split) {
        auto [train_part, test_part] = mltc::split(instances, config.split);
        instances = std::move(train_part);
        std::cerr << "split: training on " << instances.size() << " of "
                  << instances.size() + test_part.size() << " instances\n";
    }

    if (strict) {
        for (const auto& label : universe) {
            std::size_t positives = 0;
            for (const auto& instance : instances) positives += instance.labels.count(label);
            if (positives == 0 || positives == instances.size()) {
                std::cerr << "error: label '" << label
                          << "' has single-class targets (strict mode)\n";
                return kExitDegenerate;
            }
        }
    }

    mltc::AnyModel model;
    if (algorithm == "br-gbdt") {
        std::vector<std::vector<double>> loss_logs;
        model = mltc::train_br_gbdt(instances, universe, config.gbdt, nullptr, config.threads,
                                    &loss_logs);
        for (std::size_t j = 0; j < universe.size(); ++j) {
            for (std::size_t m = 0; m < loss_logs[j].size(); ++m) {
                std::cerr << "loss label=" << universe[j] << " iter=" << m
                          << " value=" << loss_logs[j][m] << "\n";
            }
        }
    } else if (algorithm == "br-lr") {
        model = mltc::train_br_lr(instances, universe, config.lr);
    } else {
        model = mltc::MlknnModel::train(instances, universe, config.mlknn_k,
                                        config.mlknn_smoothing);
    }
    mltc::save_model(model, model_path);
    std::cerr << "model written to " << model_path << "\n";
    return kExitOk;
}

std::vector<double> model_scores(const mltc::AnyModel& model, const mltc::FeatureVector& x) {
    return std::visit([&](const auto& m) { return m.scores(x); }, model);
}

std::vector<std::string> model_predict(const mltc::AnyModel& model, const mltc::FeatureVector& x) {
    return std::visit([&](const auto& m) { return m.predict(x); }, model);
}

const std::vector<std::string>& model_universe(const mltc::AnyModel& model) {
    return std::visit([](const auto& m) -> const std::vector<std::string>& { return m.universe(); },
                      model);
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const CommonArgs& common, const std::string& out_path) {
    auto config = resolve_config(common);
    auto model = mltc::load_model(model_path);
    auto records = mltc::read_jsonl(data_path);
    auto features = featurize(records, config);

    std::string body;
    for (std::size_t i = 0; i < records.size(); ++i) {
        json line;
        line["id"] = records[i].id;
        line["labels"] = model_predict(model, features[i]);
        line["scores"] = model_scores(model, features[i]);
        body += line.dump();
        body += "\n";
    }
    mltc::atomic_write(out_path, body);
    std::cerr << "predictions for " << records.size() << " record(s) written to " << out_path
              << "\n";
    return kExitOk;
}

json counts_to_json(const mltc::LabelCounts& counts) {
    return json{{"tp", counts.tp},           {"fp", counts.fp},         {"fn", counts.fn},
                {"precision", counts.precision}, {"recall", counts.recall}, {"f1", counts.f1}};
}

int cmd_eval(const std::string& model_path, const std::string& data_path,
             const std::string& corpus_path, const CommonArgs& common,
             const std::string& report_path, bool use_split) {
    auto config = resolve_config(common);
    auto model = mltc::load_model(model_path);
    auto records = mltc::read_jsonl(data_path);
    if (!corpus_path.empty()) join_corpus_text(records, corpus_path);
    auto features = featurize(records, config);
    auto instances = to_instances(records, features);

    if (use_split) {
        auto [train_part, test_part] = mltc::split(instances, config.split);
        instances = std::move(test_part);
        std::cerr << "split: evaluating on " << instances.size() << " held-out instances\n";
    }

    std::vector<std::set<std::string>> truth;
    std::vector<std::set<std::string>> predicted;
    truth.reserve(instances.size());
    predicted.reserve(instances.size());
    for (const auto& instance : instances) {
        truth.push_back(instance.labels);
        auto labels = model_predict(model, instance.features);
        predicted.emplace_back(labels.begin(), labels.end());
    }

    auto report = mltc::score(truth, predicted, model_universe(model));

    json out;
    out["micro"] = counts_to_json(report.micro);
    out["macro"] = json{{"precision", report.macro_precision},
                        {"recall", report.macro_recall},
                        {"f1", report.macro_f1}};
    out["zero_division"] = report.zero_division;
    if (config.per_label_metrics) {
        json per_label = json::object();
        for (const auto& [label, counts] : report.per_label) {
            per_label[label] = counts_to_json(counts);
        }
        out["per_label"] = std::move(per_label);
    }
    mltc::atomic_write(report_path, out.dump(2) + "\n");

    auto row = [](const std::string& name, double p, double r, double f1) {
        char buffer[128];
        std::snprintf(buffer, sizeof(buffer), "%-24s %9.4f %9.4f %9.4f", name.c_str(), p, r, f1);
        return std::string(buffer);
    };
    std::cerr << "                         precision    recall        f1\n";
    std::cerr << row("micro", report.micro.precision, report.micro.recall, report.micro.f1) << "\n";
    std::cerr << row("macro", report.macro_precision, report.macro_recall, report.macro_f1) << "\n";
    if (config.per_label_metrics) {
        for (const auto& [label, counts] : report.per_label) {
            std::cerr << row(label, counts.precision, counts.recall, counts.f1) << "\n";
        }
    }
    return kExitOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"multi-label text classification pipeline"};
    app.require_subcommand(1);

    CommonArgs common;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", common.config_path, "pipeline configuration file");
        cmd->add_option("--set", common.overrides, "override a config entry (key=value)");
    };

    std::string corpus_path;
    std::string data_path;
    std::string out_path;
    std::string model_path;
    std::string report_path;
    std::string algorithm = "br-gbdt";
    std::string universe_path;
    std::string join_corpus_path;
    bool use_split = false;
    bool strict = false;

    auto* mine = app.add_subcommand("mine-labels",
                                    "construct a labeled dataset from a raw text corpus");
    mine->add_option("--corpus", corpus_path, "input corpus (JSON lines: id, text)")->required();
    mine->add_option("--out", out_path, "output labeled dataset (JSON lines)")->required();
    add_common(mine);

    auto* train = app.add_subcommand("train", "train a multi-label classifier");
    train->add_option("--data", data_path, "labeled dataset (JSON lines)")->required();
    train->add_option("--corpus", join_corpus_path,
                      "corpus file supplying text for records that lack it");
    train->add_option("--model", model_path, "output model file")->required();
    train->add_option("--algorithm", algorithm, "br-gbdt, br-lr or ml-knn");
    train->add_option("--universe", universe_path, "label universe file (one label per line)");
    train->add_flag("--split", use_split, "train on the configured train fraction only");
    train->add_flag("--strict", strict, "fail instead of warning on single-class labels");
    add_common(train);

    auto* predict = app.add_subcommand("predict", "predict label sets");
    predict->add_option("--model", model_path, "model file")->required();
    predict->add_option("--data", data_path, "dataset to predict (JSON lines)")->required();
    predict->add_option("--out", out_path, "output predictions (JSON lines)")->required();
    add_common(predict);

    auto* eval = app.add_subcommand("eval", "evaluate a model against labeled data");
    eval->add_option("--model", model_path, "model file")->required();
    eval->add_option("--data", data_path, "labeled dataset (JSON lines)")->required();
    eval->add_option("--corpus", join_corpus_path,
                     "corpus file supplying text for records that lack it");
    eval->add_option("--report", report_path, "output metrics report (JSON)")->required();
    eval->add_flag("--split", use_split, "evaluate on the configured held-out fraction only");
    add_common(eval);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (mine->parsed()) return cmd_mine_labels(corpus_path, common, out_path);
        if (train->parsed()) {
            return cmd_train(data_path, join_corpus_path, common, model_path, algorithm,
                             universe_path, use_split, strict);
        }
        if (predict->parsed()) return cmd_predict(model_path, data_path, common, out_path);
        if (eval->parsed()) {
            return cmd_eval(model_path, data_path, join_corpus_path, common, report_path,
                            use_split);
        }
    } catch (const mltc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const mltc::InvalidThresholdError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const mltc::KTooLargeError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const mltc::EmptyCorpusError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmptyCorpus;
    } catch (const mltc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitConfig;
}

} // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
