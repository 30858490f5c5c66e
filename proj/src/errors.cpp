#include "gopa/errors.hpp"

#include <utility>

namespace gopa {

ValidationError::ValidationError(std::string path, const std::string& message)
    : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

void CellError::set_cell(std::string label) { cell_ = std::move(label); }

}  // namespace gopa
