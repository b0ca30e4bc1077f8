#pragma once

#include <optional>

#include "finsler/change.hpp"
#include "finsler/curvature.hpp"

namespace finsler {

// Special-space defect tensors of one space at one point. Inapplicable
// entries (dimension gates, vanishing normalizers) are absent with a reason,
// never silently zero.
struct DefectTensors {
  int n = 0;
  double C_norm = 0, S_norm = 0, C2 = 0;

  std::optional<Ten3> K3;     // C-reducibility defect
  std::string K3_reason;
  std::optional<Ten3> eta3;   // C2-likeness defect
  std::string eta3_reason;
  std::optional<Ten4> mu4;    // S3-likeness defect (classification needs n > 3)
  std::string mu4_reason;
  bool mu4_classification_applicable = false;
  std::optional<Ten4> zeta4;  // S4-likeness defect, needs n > 4
  std::string zeta4_reason;

  // semi-C-reducibility split with r + t = 1 enforced
  std::optional<double> semi_r, semi_t;
  std::optional<double> semi_residual_rel;
  std::string semi_reason;
};

DefectTensors defects(const MetricSpec& m, std::span<const double> x,
                      std::span<const double> y);

struct SemiDecomposition {
  double r = 0, t = 0;
  double residual_rel = 0;   // residual of the split, relative to |C|
  bool formula_used = false; // change-scalar formula instead of a fit
  std::string note;
};

// Least-squares split of C into the angular and C-cubed parts with t = 1 - r.
SemiDecomposition semi_c_decomposition(const MetricSpec& m, std::span<const double> x,
                                       std::span<const double> y);

// Transformed-space split with the change-scalar closed forms for (r, t);
// for a Riemannian base the residual must vanish.
SemiDecomposition semi_c_decomposition_for_change(const ChangeSpec& c,
                                                  const MetricSpec& base,
                                                  std::span<const double> x,
                                                  std::span<const double> y);

// q_ijk of the quasi-C-reducibility split of the transformed Cartan tensor;
// gated on |lambda| > 1e-10 (indeterminate below it).
struct QuasiSplit {
  std::optional<double> residual_rel;  // |q| / (1 + |C_bar|)
  double lambda = 0;
  std::string note;
};

QuasiSplit quasi_c_split_for_change(const ChangeSpec& c, const MetricSpec& base,
                                    std::span<const double> x,
                                    std::span<const double> y);

// Change-level defect deltas: d (C-reducibility), I (C2-likeness, Riemannian
// base), r (S3-likeness, beta-conformal), eps (S4-likeness, beta-conformal).
struct ChangeDeltaReport {
  double d_closed_vs_direct = 0;  // closed form against K_bar - e^s p K
  double d_norm_rel = 0;          // |d| / (1 + |C_bar|)
  std::optional<double> I_vs_closed;   // needs Riemannian base
  std::string I_reason;
  std::optional<double> r_vs_closed;  // needs beta-conformal family
  std::string r_reason;
  std::optional<double> eps_norm_rel; // needs beta-conformal, n > 4
  std::string eps_reason;
};

ChangeDeltaReport change_defect_deltas(const ChangeSpec& c, const MetricSpec& base,
                                       std::span<const double> x,
                                       std::span<const double> y);

struct AlphaCheckReport {
  double max_alpha1 = 0, max_alpha2 = 0;          // absolute values
  double max_alpha1_rel = 0, max_alpha2_rel = 0;  // relative to their terms
  int samples = 0;
};

// max |alpha1|, |alpha2| over admissible samples; Randers- and Kropina-type
// f must give zero over a Riemannian base.
AlphaCheckReport randers_kropina_alpha_check(const ChangeSpec& c,
                                             const MetricSpec& base, int samples,
                                             uint64_t seed,
                                             const SampleBox& box = {});

struct BConditionSample {
  Vec x, y;
  double contraction_rel = 0;  // |b^i C_ijk| / (1 + |C|)
  double b_cov_norm = 0;       // |b^i|_h|
  double T_rel = 0;            // |T| / (1 + |C|)
  double C_rel = 0;            // |C| / (1 + |g|)
  bool pass = false;
};

struct BConditionReport {
  std::vector<BConditionSample> samples;
  double max_contraction_rel = 0;
  bool all_pass = false;
  double threshold = 1e-8;
};

BConditionReport b_condition(const MetricSpec& m, std::span<const Expr> b_exprs,
                             int samples, uint64_t seed, double threshold = 1e-8,
                             const SampleBox& box = {});

struct EnergyEquivalenceReport {
  double max_p_m1 = 0;
  double fitted_k = 0;
  double q_residual = 0;   // residual of q = k beta with the fitted k
  double c_residual = 0;   // |C_bar - e^s p C| relative
  bool trivial_q = false;  // q identically ~ 0 (conformal-type sub-case)
  bool is_energy = false;  // all three residuals co-vanish
  bool consistent = false; // all co-vanish or none does
  int samples = 0;
};

EnergyEquivalenceReport energy_equivalence(const ChangeSpec& c, const MetricSpec& base,
                                           int samples, uint64_t seed,
                                           double tol = 1e-9,
                                           const SampleBox& box = {});

// Opportunistic implication sweep over catalog pairs; returns human-readable
// violation strings (expected empty).
struct SweepResult {
  int checks = 0;
  std::vector<std::string> violations;
};

struct SweepPair {
  ChangeSpec change;
  MetricSpec base;
};

SweepResult consistency_sweep(std::span<const SweepPair> pairs, int samples,
                              uint64_t seed, double threshold = 1e-8,
                              const SampleBox& box = {});

}  // namespace finsler
