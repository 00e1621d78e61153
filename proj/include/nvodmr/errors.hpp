#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nvodmr {

// Bad input: non-finite parameters, violated preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The drive violates the f_mw >> f_ac separation the rotating-frame model needs,
// or the AC frequency is off the strain resonance assumed by the interaction picture.
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Integration blew an invariant, a linear system was singular, a fit diverged.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RankDeficient : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoDipsFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnpairableDips : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Spectrum CSV that does not follow the documented schema. `row` is 1-based over
// the physical lines of the file; 0 when the problem is not tied to a row.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& what, std::size_t row)
      : std::runtime_error(row == 0 ? what : "line " + std::to_string(row) + ": " + what),
        row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace nvodmr
