#ifndef MLTC_VECTORIZE_HPP
#define MLTC_VECTORIZE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mltc/textprep.hpp"

namespace mltc {

using FeatureVector = std::vector<double>;

// Pretrained word vectors, all of one fixed dimension.
struct EmbeddingTable {
    std::size_t dim = 0;
    std::unordered_map<std::string, FeatureVector> vectors;
};

struct EmbedResult {
    FeatureVector values;
    // Set when no token of the document was found in the table; the vector is
    // then all zeros.
    bool out_of_vocabulary = false;
};

// Reads the plain-text vector format: one entry per line, token followed by
// dim space-separated decimal numbers, no header. The dimension comes from
// the first line unless expected_dim pins it. On duplicate tokens the last
// occurrence wins and a warning is logged.
EmbeddingTable load_embeddings(const std::string& path,
                               std::optional<std::size_t> expected_dim = std::nullopt);

// Mean of the vectors of all token occurrences found in the table. Repeats
// count once per occurrence; unknown tokens are skipped.
EmbedResult embed(const Document& doc, const EmbeddingTable& table);

} // namespace mltc

#endif
