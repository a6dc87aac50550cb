#ifndef MLTC_CONFIG_HPP
#define MLTC_CONFIG_HPP

#include <map>
#include <string>

#include "mltc/eval.hpp"
#include "mltc/gbdt.hpp"
#include "mltc/labelmine.hpp"
#include "mltc/multilabel.hpp"
#include "mltc/textprep.hpp"

namespace mltc {

// Everything the pipeline can be told, from one flat key = value file.
// Unknown keys are rejected by name; every value is range-checked at load.
struct PipelineConfig {
    // textprep
    bool lowercase = true;
    std::string stopwords_path;
    std::string phrases_path;
    std::string token_pattern;
    std::map<std::string, std::string> noise_patterns; // clean.pattern.<name>

    // vectorize
    std::string embedding_path;
    std::size_t embedding_dim = 0; // 0 = infer from the file

    // labelmine
    double delta = 0.5;
    NormalizerMode normalizer = NormalizerMode::TotalMass;

    // gbdt
    gbdt::TrainConfig gbdt;

    // baselines
    LrConfig lr;
    std::size_t mlknn_k = 10;
    double mlknn_smoothing = 1.0;

    // eval
    SplitSpec split;
    bool per_label_metrics = true;

    // execution
    std::size_t threads = 1;
};

// Parses the key = value format ('#' comments, blank lines allowed).
PipelineConfig load_config(const std::string& path);

// Applies one assignment, validating key and value; used both by the file
// loader and by --set command-line overrides.
void apply_config_entry(PipelineConfig& config, const std::string& key, const std::string& value);

// Validates cross-field constraints; throws ConfigError.
void validate(const PipelineConfig& config);

} // namespace mltc

#endif
