#include "mltc/error.hpp"

#include <iostream>

namespace mltc {

void log_warning(const std::string& message) {
    std::cerr << "warning: " << message << "\n";
}

} // namespace mltc
