#pragma once

#include <stdexcept>
#include <string>

namespace lciclv {

// Input file / column-name problems.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Row-level data problems (out-of-range values, malformed records).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cross-file reference problems (e.g. scenario rows naming unknown respondents).
struct ReferentialError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model configuration problems.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical preconditions (non-PD covariance, out-of-range probability, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lciclv
