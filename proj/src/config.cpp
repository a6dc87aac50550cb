#include "mltc/config.hpp"

#include <charconv>
#include <fstream>

#include "mltc/error.hpp"

namespace mltc {

namespace {

std::string trim(const std::string& s) {
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(key + ": expected a boolean, got '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
    return out;
}

std::size_t parse_count(const std::string& key, const std::string& value, std::size_t min_value) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
    }
    if (out < min_value) {
        throw ConfigError(key + ": must be at least " + std::to_string(min_value));
    }
    return out;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
    return out;
}

} // namespace

void apply_config_entry(PipelineConfig& config, const std::string& key, const std::string& value) {
    if (key == "tokenizer.lowercase") {
        config.lowercase = parse_bool(key, value);
    } else if (key == "tokenizer.stopwords") {
        config.stopwords_path = value;
    } else if (key == "tokenizer.phrases") {
        config.phrases_path = value;
    } else if (key == "tokenizer.token_pattern") {
        config.token_pattern = value;
    } else if (key.rfind("clean.pattern.", 0) == 0) {
        std::string name = key.substr(std::string("clean.pattern.").size());
        if (name.empty()) throw ConfigError("noise pattern needs a name: " + key);
        config.noise_patterns[name] = value;
    } else if (key == "embedding.path") {
        config.embedding_path = value;
    } else if (key == "embedding.dim") {
        config.embedding_dim = parse_count(key, value, 0);
    } else if (key == "labelmine.delta") {
        config.delta = parse_double(key, value);
        if (!(config.delta > 0.0)) throw ConfigError("labelmine.delta: must be positive");
    } else if (key == "labelmine.normalizer") {
        if (value == "total-mass") {
            config.normalizer = NormalizerMode::TotalMass;
        } else if (value == "literal") {
            config.normalizer = NormalizerMode::Literal;
        } else {
            throw ConfigError("labelmine.normalizer: expected 'total-mass' or 'literal', got '" +
                              value + "'");
        }
    } else if (key == "gbdt.iterations") {
        config.gbdt.iterations = parse_count(key, value, 1);
    } else if (key == "gbdt.max_depth") {
        config.gbdt.max_depth = parse_count(key, value, 1);
    } else if (key == "gbdt.min_samples_leaf") {
        config.gbdt.min_samples_leaf = parse_count(key, value, 1);
    } else if (key == "gbdt.shrinkage") {
        config.gbdt.shrinkage = parse_double(key, value);
        if (!(config.gbdt.shrinkage > 0.0 && config.gbdt.shrinkage <= 1.0)) {
            throw ConfigError("gbdt.shrinkage: must be in (0, 1]");
        }
    } else if (key == "gbdt.seed") {
        config.gbdt.seed = parse_int(key, value);
    } else if (key == "gbdt.early_stop_patience") {
        config.gbdt.early_stop_patience = parse_count(key, value, 0);
    } else if (key == "gbdt.validation_fraction") {
        config.gbdt.validation_fraction = parse_double(key, value);
        if (!(config.gbdt.validation_fraction > 0.0 && config.gbdt.validation_fraction < 1.0)) {
            throw ConfigError("gbdt.validation_fraction: must be in (0, 1)");
        }
    } else if (key == "lr.epochs") {
        config.lr.epochs = parse_count(key, value, 1);
    } else if (key == "lr.step_size") {
        config.lr.step_size = parse_double(key, value);
        if (!(config.lr.step_size > 0.0)) throw ConfigError("lr.step_size: must be positive");
    } else if (key == "lr.l2") {
        config.lr.l2 = parse_double(key, value);
        if (config.lr.l2 < 0.0) throw ConfigError("lr.l2: must be non-negative");
    } else if (key == "mlknn.k") {
        config.mlknn_k = parse_count(key, value, 1);
    } else if (key == "mlknn.smoothing") {
        config.mlknn_smoothing = parse_double(key, value);
        if (!(config.mlknn_smoothing > 0.0)) throw ConfigError("mlknn.smoothing: must be positive");
    } else if (key == "split.train_fraction") {
        config.split.train_fraction = parse_double(key, value);
        if (!(config.split.train_fraction > 0.0 && config.split.train_fraction < 1.0)) {
            throw ConfigError("split.train_fraction: must be in (0, 1)");
        }
    } else if (key == "split.seed") {
        config.split.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "eval.per_label") {
        config.per_label_metrics = parse_bool(key, value);
    } else if (key == "train.threads") {
        config.threads = parse_count(key, value, 1);
    } else {
        throw ConfigError("unknown configuration key: " + key);
    }
}

void validate(const PipelineConfig& config) {
    if (config.normalizer == NormalizerMode::TotalMass && config.delta > 1.0) {
        throw ConfigError("labelmine.delta: must be in (0, 1] for total-mass normalization");
    }
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);

    PipelineConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string entry = trim(line);
        // comments are whole lines; '#' inside a value (say a regex) is data
        if (entry.empty() || entry.front() == '#') continue;
        auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(entry.substr(0, eq));
        std::string value = trim(entry.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": missing key");
        }
        try {
            apply_config_entry(config, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    validate(config);
    return config;
}

} // namespace mltc
