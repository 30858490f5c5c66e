#pragma once

#include <stdexcept>
#include <string>

namespace gopa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-domain input. `path` locates the offending field in the
// input document, e.g. "alternative_ranks.E1.C2[3]".
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& message);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class EmptyCellError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ContextRangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DuplicateConstraintError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SignError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Errors raised while solving one (expert, attribute) cell. The pipeline tags
// them with the cell label before they reach the user.
class CellError : public Error {
 public:
  using Error::Error;
  const std::string& cell() const noexcept { return cell_; }
  void set_cell(std::string label);

 private:
  std::string cell_;
};

class InfeasibleContext : public CellError {
 public:
  using CellError::CellError;
};

class NumericFailure : public CellError {
 public:
  using CellError::CellError;
};

class UtilityShapeError : public Error {
 public:
  using Error::Error;
};

class DecompositionUnsupported : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InfeasibleStage2 : public Error {
 public:
  using Error::Error;
};

class BreakpointError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

class SampleSizeError : public Error {
 public:
  using Error::Error;
};

class TooManyExperts : public Error {
 public:
  using Error::Error;
};

}  // namespace gopa
