#ifndef MLTC_MODEL_IO_HPP
#define MLTC_MODEL_IO_HPP

#include <string>
#include <variant>

#include "mltc/mlknn.hpp"
#include "mltc/multilabel.hpp"

namespace mltc {

using AnyModel = std::variant<BrModel, MlknnModel>;

// Versioned JSON envelope. Numbers are written with round-trip precision, so
// a saved and reloaded model scores bit-identically.
std::string to_json(const BrModel& model);
std::string to_json(const MlknnModel& model);

AnyModel model_from_json(const std::string& text);

void save_model(const AnyModel& model, const std::string& path);
AnyModel load_model(const std::string& path);

// Writes via a temporary file in the target directory and renames into
// place, so readers never observe a half-written file.
void atomic_write(const std::string& path, const std::string& content);

} // namespace mltc

#endif
