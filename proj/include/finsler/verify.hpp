#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finsler/change.hpp"

namespace finsler {

struct BlockResult {
  std::string name;
  double max_rel = 0.0;
  double tol = 0.0;
  bool pass = true;
  int samples = 0;
};

struct PairVerifyReport {
  std::string metric, change;
  int samples_used = 0;
  int samples_rejected = 0;
  int ill_conditioned = 0;  // samples where some metric tensor has cond > 1e8
  std::vector<BlockResult> blocks;
  bool pass = true;
  std::string note;
};

// Per-block tolerances; override_all (the CLI --tol flag) replaces every one.
struct VerifyTolerances {
  double metric_family = 1e-9;
  double inverse_consistency = 1e-10;
  double trace_identities = 1e-10;
  double cartan_family = 1e-8;
  double s_family = 1e-7;
  double indicatory = 1e-9;
  double t_family = 1e-7;
  double randers_t = 1e-8;
  double kropina_t = 1e-7;
  double beta_conformal_t = 1e-8;
  double t_trace_identity = 1e-8;
  double euler = 1e-9;
  std::optional<double> override_all;
};

// Runs every closed-form law of the change against direct jet computation on
// the transformed metric, at `samples` admissible points.
PairVerifyReport verify_pair(const ChangeSpec& c, const MetricSpec& base,
                             int samples, uint64_t seed,
                             const VerifyTolerances& tol = {},
                             const SampleBox& box = {});

}  // namespace finsler
