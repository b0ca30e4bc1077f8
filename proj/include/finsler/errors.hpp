#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace finsler {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation outside a function's domain (sqrt/ln of nonpositive values,
// metric evaluated off its chart, inadmissible change point).
struct domain_error : error {
  using error::error;
};

// Division by a jet with zero value slot, or a singular linear system.
struct singular_error : error {
  using error::error;
};

// Metric tensor not invertible at the sample point.
struct degenerate_metric_error : singular_error {
  using singular_error::singular_error;
};

// Change scalars undefined: m^2 or epsilon below threshold.
struct degenerate_change_error : domain_error {
  using domain_error::domain_error;
};

// Mismatched jet spaces, out-of-range multi-indices, bad dimensions.
struct config_error : error {
  using error::error;
};

struct parse_error : error {
  std::size_t offset;
  parse_error(const std::string& what, std::size_t off)
      : error(what + " (at offset " + std::to_string(off) + ")"), offset(off) {}
};

// CLI misuse: unknown labels, bad flags.
struct usage_error : error {
  using error::error;
};

// An operation invoked outside its stated hypotheses.
struct misuse_error : error {
  using error::error;
};

// Sampling found no admissible points.
struct sampling_error : error {
  using error::error;
};

}  // namespace finsler
