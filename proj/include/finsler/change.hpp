#pragma once

#include <optional>

#include "finsler/curvature.hpp"
#include "finsler/expr.hpp"
#include "finsler/fundamental.hpp"

namespace finsler {

// A change L -> f(e^sigma(x) L, beta), beta = b_i(x) y^i, with f positively
// 1-homogeneous in (Lt, beta). Built-in families plus expression-defined f
// (with the convention y1 = Lt, y2 = beta in the expression grammar).
struct ChangeSpec {
  enum class Family {
    conformal,            // f = Lt
    randers,              // f = Lt + beta
    kropina,              // f = Lt^2 / beta
    energy,               // f = sqrt(kprime Lt^2 + k beta^2)
    generalized_randers,  // f = c2 Lt + c1 beta
    beta_conformal,       // f = Lt + beta, sigma expected nonzero
    custom                // expression f(y1 = Lt, y2 = beta)
  };

  Family family = Family::randers;
  double energy_k = 3.0, energy_kprime = 2.0;
  double gr_c1 = 1.0, gr_c2 = 1.0;
  Expr f;            // custom family only
  Expr sigma;        // function of x; empty means 0
  std::vector<Expr> b;  // coefficient expressions b_i(x); extras ignored
  std::string label;

  Jet eval_f(const Jet& Lt, const Jet& beta) const;
  bool needs_positive_beta() const { return family == Family::kropina; }
};

ChangeSpec randers_change(std::vector<Expr> b, Expr sigma = {});
ChangeSpec kropina_change(std::vector<Expr> b, Expr sigma = {});
ChangeSpec energy_change(double kprime, double k, std::vector<Expr> b, Expr sigma = {});
ChangeSpec generalized_randers_change(double c1, double c2, std::vector<Expr> b,
                                      Expr sigma = {});
ChangeSpec conformal_change(Expr sigma);
ChangeSpec custom_change(Expr f, std::vector<Expr> b, Expr sigma = {});

// The scalar invariants of the change at one point. Subscripts track the
// homogeneity degree in y (q0 is degree 0, p_m1 degree -1, ...).
struct ScalarBundle {
  double f = 0, f1 = 0, f2 = 0, f11 = 0, f12 = 0, f22 = 0;
  double q = 0, p = 0, q0 = 0, p0 = 0;
  double q_m1 = 0, p_m1 = 0, q_m2 = 0, p_m2 = 0;
  double p02 = 0, p022 = 0;
  Vec m_lo, m_hi;
  double m2 = 0, eps = 0;
  double s0 = 0, s_m1 = 0, s_m2 = 0;
  double lambda = 0;
  double K1 = 0, K2 = 0, K3 = 0, K4 = 0, K5 = 0;
  double alpha1 = 0, alpha2 = 0;
  double beta_val = 0, b2 = 0;
  double Theta = 0, Theta1 = 0;
  double sigma = 0, e_sigma = 1;
  double L = 0, L_bar = 0;
};

// Everything the closed forms need at one point: the base bundle, the
// scalars, and the b-contractions of the base Cartan tensor.
struct ChangePoint {
  int n = 0;
  Vec x, y;
  FundamentalBundle fb;
  ScalarBundle sb;
  Vec b_lo, b_hi;
  Mat C_b;       // C_ij^beta = C_ijk b^k
  Mat Cb_mixed;  // C^r_i^beta = g^rs C_si^beta
  Vec C_bb;      // C_i^beta^beta
  Vec C_bb_hi;   // raised
  double C_bbb = 0, C_beta = 0;
  Mat h_mixed;   // h^l_i
  Vec l_bar;
};

ScalarBundle scalars(const ChangeSpec& c, const MetricSpec& base,
                     std::span<const double> x, std::span<const double> y);

ChangePoint make_change_point(const ChangeSpec& c, const MetricSpec& base,
                              std::span<const double> x, std::span<const double> y);

// The transformed space as a first-class metric, domain intersected with the
// change admissibility predicate, usable by every tensor routine.
MetricSpec transformed_metric(const ChangeSpec& c, const MetricSpec& base);

bool change_admissible(const ChangeSpec& c, const MetricSpec& base,
                       std::span<const double> x, std::span<const double> y);

double sigma_value(const ChangeSpec& c, std::span<const double> x);
Vec sigma_gradient(const ChangeSpec& c, std::span<const double> x);
Vec one_form_values(const ChangeSpec& c, std::span<const double> x, int dim);

// ---- closed-form transformation laws, evaluated literally ----

struct MetricForms {
  Vec l_bar;
  Mat h_bar, g_bar, g_bar_inv;
};
MetricForms closed_form_metric(const ChangePoint& cp);

struct CartanForms {
  Ten3 C_bar;    // C_bar_ijk
  Ten3 V;        // V_ijk
  Ten3 M_mixed;  // M^l_ij
  Ten3 C_bar_mixed;
  Vec C_bar_lo, C_bar_hi, J_hi;
  double C2_bar = 0, Phi = 0;
  double C2_scale = 0;  // magnitude of the additive pieces (conditioning)
};
CartanForms closed_form_cartan(const ChangePoint& cp);

struct SCurvForms {
  Mat H, omega, Psi;
  Ten4 S_bar4;
  Mat S_bar_ric;
  double S_bar_scal = 0;
  double K_big = 0, Omega_big = 0;
  double trH = 0, trOmega = 0;
  double S4_scale = 0, ric_scale = 0, scal_scale = 0;
};
SCurvForms closed_form_s(const ChangePoint& cp, const VCurvature& base_s);

struct TForms {
  Ten4 T_bar4;
  Mat nu, n_small, n_dot, M2;
  double T4_scale = 0;
};
TForms closed_form_t(const ChangePoint& cp, const TTensor& base_t);

// Specialized T-tensor laws. Hypotheses are enforced (misuse -> error).
Ten4 special_t_conformal(const TTensor& base_t, double sigma);
Ten4 special_t_randers(const ChangePoint& cp);         // Riemannian base, sigma = 0
Ten4 special_t_kropina(const ChangePoint& cp);         // Riemannian base, sigma = 0
Ten4 special_t_beta_conformal(const ChangePoint& cp, const TTensor& base_t);

// Scalar necessary condition for a vanishing transformed T-tensor under a
// beta-conformal change: the g-g trace of the closed form equals
// e^sigma (Lbar^2/L^2) (T - (n^2-1) Theta / (4 L Lbar^2) - (n-1) L C_beta / Lbar).
// Returns the relative residual of that identity.
double t_trace_identity_residual(const ChangePoint& cp, const TTensor& base_t);

struct IdentityReport {
  int samples = 0;
  double worst_euler = 0;
  double worst_trace = 0;       // the s0/s_m1/s_m2 trace identities
  double worst_homogeneity = 0;
  bool pass = false;
  std::string note;
};

// Euler relations of f, the two trace identities of the inverse-metric
// scalars, and per-field homogeneity degrees under y -> t y.
IdentityReport identity_suite(const ChangeSpec& c, const MetricSpec& base,
                              int samples, uint64_t seed,
                              const SampleBox& box = {});

}  // namespace finsler
