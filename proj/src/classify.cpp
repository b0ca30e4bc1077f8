#include "finsler/classify.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

constexpr double kC2Floor = 1e-12;
constexpr double kLambdaFloor = 1e-10;

bool riemannian_at(const FundamentalBundle& fb) {
  return frob(fb.C) <= 1e-10 * (1.0 + frob(fb.g));
}

Ten3 c_reducibility_defect(const FundamentalBundle& fb) {
  const int n = fb.n;
  Ten3 K(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        K(i, j, k) = fb.C(i, j, k) -
                     (fb.h(i, j) * fb.C_lo[k] + fb.h(k, i) * fb.C_lo[j] +
                      fb.h(j, k) * fb.C_lo[i]) /
                         (n + 1);
  return K;
}

Ten3 c2_defect(const FundamentalBundle& fb) {
  const int n = fb.n;
  Ten3 eta(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        eta(i, j, k) = fb.C2 * fb.C(i, j, k) - fb.C_lo[i] * fb.C_lo[j] * fb.C_lo[k];
  return eta;
}

Ten4 s3_defect(const FundamentalBundle& fb, const VCurvature& vc) {
  const int n = fb.n;
  Ten4 mu(n);
  const double coef = vc.S_scal / ((n - 1) * (n - 2));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          mu(l, i, j, k) = vc.S4(l, i, j, k) -
                           coef * (fb.h(i, k) * fb.h(l, j) - fb.h(i, j) * fb.h(l, k));
  return mu;
}

Ten4 s4_defect(const FundamentalBundle& fb, const VCurvature& vc) {
  const int n = fb.n;
  Mat M(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      M(i, k) = (vc.S_ric(i, k) - vc.S_scal * fb.h(i, k) / (2.0 * (n - 2))) / (n - 3);
  Ten4 zeta(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          zeta(l, i, j, k) = vc.S4(l, i, j, k) -
                             (fb.h(l, j) * M(i, k) + fb.h(i, k) * M(l, j) -
                              fb.h(l, k) * M(i, j) - fb.h(i, j) * M(l, k));
  return zeta;
}

SemiDecomposition semi_fit(const FundamentalBundle& fb) {
  SemiDecomposition sd;
  const int n = fb.n;
  if (fb.C2 <= kC2Floor) {
    sd.note = "C^2 below threshold: Riemannian verdict";
    sd.residual_rel = 0.0;
    return sd;
  }
  Ten3 A(n), B(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        A(i, j, k) = (fb.h(i, j) * fb.C_lo[k] + fb.h(k, i) * fb.C_lo[j] +
                      fb.h(j, k) * fb.C_lo[i]) /
                     (n + 1);
        B(i, j, k) = fb.C_lo[i] * fb.C_lo[j] * fb.C_lo[k] / fb.C2;
      }
  double num = 0.0, den = 0.0;
  for (size_t idx = 0; idx < A.a.size(); ++idx) {
    const double ab = A.a[idx] - B.a[idx];
    num += (fb.C.a[idx] - B.a[idx]) * ab;
    den += ab * ab;
  }
  sd.r = den > 0.0 ? num / den : 0.0;
  sd.t = 1.0 - sd.r;
  double res = 0.0;
  for (size_t idx = 0; idx < A.a.size(); ++idx) {
    const double d = fb.C.a[idx] - sd.r * A.a[idx] - sd.t * B.a[idx];
    res += d * d;
  }
  sd.residual_rel = std::sqrt(res) / (1.0 + frob(fb.C));
  return sd;
}

double semi_residual(const FundamentalBundle& fb, double r, double t) {
  const int n = fb.n;
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double fit =
            r / (n + 1) *
                (fb.h(i, j) * fb.C_lo[k] + fb.h(k, i) * fb.C_lo[j] +
                 fb.h(j, k) * fb.C_lo[i]) +
            t / fb.C2 * fb.C_lo[i] * fb.C_lo[j] * fb.C_lo[k];
        const double d = fb.C(i, j, k) - fit;
        res += d * d;
      }
  return std::sqrt(res) / (1.0 + frob(fb.C));
}

}  // namespace

DefectTensors defects(const MetricSpec& m, std::span<const double> x,
                      std::span<const double> y) {
  DefectTensors dt;
  FundamentalBundle fb = fundamental(m, x, y);
  VCurvature vc = v_curvature(fb);
  const int n = fb.n;
  dt.n = n;
  dt.C_norm = frob(fb.C);
  dt.S_norm = frob(vc.S4);
  dt.C2 = fb.C2;

  if (n >= 3) {
    dt.K3 = c_reducibility_defect(fb);
  } else {
    dt.K3_reason = "needs n >= 3";
  }

  dt.eta3 = c2_defect(fb);
  if (fb.C2 <= kC2Floor)
    dt.eta3_reason = "normalizer C^2 below threshold (Riemannian-like space)";

  if (n >= 3) {
    dt.mu4 = s3_defect(fb, vc);
    dt.mu4_classification_applicable = n > 3;
    if (n == 3) dt.mu4_reason = "defect computed; the classification needs n > 3";
  } else {
    dt.mu4_reason = "needs n >= 3";
  }

  if (n > 4) {
    dt.zeta4 = s4_defect(fb, vc);
  } else {
    dt.zeta4_reason = "needs n > 4";
  }

  if (n >= 3) {
    SemiDecomposition sd = semi_fit(fb);
    if (sd.note.empty()) {
      dt.semi_r = sd.r;
      dt.semi_t = sd.t;
      dt.semi_residual_rel = sd.residual_rel;
    } else {
      dt.semi_reason = sd.note;
    }
  } else {
    dt.semi_reason = "needs n >= 3";
  }
  return dt;
}

SemiDecomposition semi_c_decomposition(const MetricSpec& m, std::span<const double> x,
                                       std::span<const double> y) {
  FundamentalBundle fb = fundamental(m, x, y);
  return semi_fit(fb);
}

SemiDecomposition semi_c_decomposition_for_change(const ChangeSpec& c,
                                                  const MetricSpec& base,
                                                  std::span<const double> x,
                                                  std::span<const double> y) {
  ChangePoint cp = make_change_point(c, base, x, y);
  MetricSpec tm = transformed_metric(c, base);
  FundamentalBundle fbT = fundamental(tm, x, y);
  if (!riemannian_at(cp.fb)) {
    SemiDecomposition sd = semi_fit(fbT);
    sd.note = "base not Riemannian: least-squares split";
    return sd;
  }
  const ScalarBundle& sb = cp.sb;
  SemiDecomposition sd;
  sd.formula_used = true;
  const double D = sb.e_sigma * sb.p + sb.m2 * sb.q0;
  const double denom = 2.0 * sb.p * sb.lambda;
  if (std::abs(denom) <= 1e-14) {
    sd.note = "lambda ~ 0: split indeterminate";
    return sd;
  }
  sd.r = sb.p_m1 * (cp.n + 1) / denom;
  sd.t = sb.m2 * (sb.p * sb.p02 - 3.0 * sb.p_m1 * sb.q0) / (denom * D);
  if (fbT.C2 <= kC2Floor) {
    sd.note = "transformed space Riemannian-like";
    sd.residual_rel = 0.0;
    return sd;
  }
  sd.residual_rel = semi_residual(fbT, sd.r, sd.t);
  return sd;
}

QuasiSplit quasi_c_split_for_change(const ChangeSpec& c, const MetricSpec& base,
                                    std::span<const double> x,
                                    std::span<const double> y) {
  QuasiSplit qs;
  ChangePoint cp = make_change_point(c, base, x, y);
  qs.lambda = cp.sb.lambda;
  if (std::abs(qs.lambda) <= kLambdaFloor) {
    qs.note = "indeterminate: |lambda| below threshold";
    return qs;
  }
  const int n = cp.n;
  const ScalarBundle& sb = cp.sb;
  const FundamentalBundle& fb = cp.fb;
  MetricSpec tm = transformed_metric(c, base);
  FundamentalBundle fbT = fundamental(tm, x, y);

  // q_ijk = e^s p C_ijk + (1/6 lambda) cyc{(3 e^s p_m1 h_ij + p02 m_i m_j)
  //         (e^s p s0 C_k^bb - C_k)}
  Ten3 q(n);
  auto W = [&](int i, int j) {
    return 3.0 * sb.e_sigma * sb.p_m1 * fb.h(i, j) +
           sb.p02 * sb.m_lo[i] * sb.m_lo[j];
  };
  auto U = [&](int k) {
    return sb.e_sigma * sb.p * sb.s0 * cp.C_bb[k] - fb.C_lo[k];
  };
  const double inv6l = 1.0 / (6.0 * sb.lambda);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        q(i, j, k) = sb.e_sigma * sb.p * fb.C(i, j, k) +
                     inv6l * (W(i, j) * U(k) + W(j, k) * U(i) + W(k, i) * U(j));
  qs.residual_rel = frob(q) / (1.0 + frob(fbT.C));
  return qs;
}

ChangeDeltaReport change_defect_deltas(const ChangeSpec& c, const MetricSpec& base,
                                       std::span<const double> x,
                                       std::span<const double> y) {
  ChangeDeltaReport rep;
  ChangePoint cp = make_change_point(c, base, x, y);
  const int n = cp.n;
  const ScalarBundle& sb = cp.sb;
  const FundamentalBundle& fb = cp.fb;
  MetricSpec tm = transformed_metric(c, base);
  FundamentalBundle fbT = fundamental(tm, x, y);
  if (n < 3) throw misuse_error("change defect deltas need n >= 3");

  const bool beta_conformal_family = c.family == ChangeSpec::Family::randers ||
                                     c.family == ChangeSpec::Family::beta_conformal;

  // d_ijk: closed form from the Cartan transformation law, checked against
  // the difference of the C-reducibility defects.
  {
    Ten3 K_base = c_reducibility_defect(fb);
    Ten3 K_bar = c_reducibility_defect(fbT);
    Ten3 d_direct(n), d_closed(n);
    const auto& m = sb.m_lo;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          d_direct(i, j, k) = K_bar(i, j, k) - sb.e_sigma * sb.p * K_base(i, j, k);
          auto term = [&](int a, int b, int cix) {
            return sb.alpha1 * fb.h(a, b) * m[cix] +
                   sb.alpha2 * m[a] * m[b] * m[cix] -
                   (sb.q0 * m[a] * m[b] * fb.C_lo[cix] -
                    sb.e_sigma * sb.p * sb.s0 *
                        (sb.e_sigma * sb.p * fb.h(a, b) + sb.q0 * m[a] * m[b]) *
                        cp.C_bb[cix]) /
                       (n + 1);
          };
          d_closed(i, j, k) = term(i, j, k) + term(j, k, i) + term(k, i, j);
        }
    rep.d_closed_vs_direct =
        max_abs_diff(d_closed, d_direct) / (1.0 + frob(d_direct));
    rep.d_norm_rel = frob(d_direct) / (1.0 + frob(fbT.C));
  }

  // I_ijk = eta_bar - eta against Phi V - lambda^3 m m m (Riemannian base)
  if (riemannian_at(fb)) {
    CartanForms cf = closed_form_cartan(cp);
    Ten3 I_direct = c2_defect(fbT);  // eta = 0 on a Riemannian base
    Ten3 I_closed(n);
    const auto& m = sb.m_lo;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          I_closed(i, j, k) = cf.Phi * cf.V(i, j, k) -
                             std::pow(sb.lambda, 3) * m[i] * m[j] * m[k];
    rep.I_vs_closed = max_abs_diff(I_direct, I_closed) / (1.0 + frob(I_direct));
  } else {
    rep.I_reason = "needs a Riemannian base";
  }

  // r_lijk and eps_lijk for the beta-conformal family
  if (beta_conformal_family) {
    VCurvature vcB = v_curvature(fb);
    VCurvature vcT = v_curvature(fbT);
    Ten4 mu_base = s3_defect(fb, vcB);
    Ten4 mu_bar = s3_defect(fbT, vcT);
    // closed form: the S3 delta assembles as the exchange combination of
    // B_lk h_ij with B = (e^s/2L)(C^b + m m/(2 Lbar) + (m^2/(4 Lbar)) h
    // - A_beta h).
    const double Lb = sb.L_bar;
    const double A_beta =
        (cp.C_beta + (n + 1) * sb.m2 / (4.0 * Lb)) / (n - 1);
    Mat B(n);
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        B(l, k) = sb.e_sigma / (2.0 * sb.L) *
                  (cp.C_b(l, k) + sb.m_lo[l] * sb.m_lo[k] / (2.0 * Lb) +
                   (sb.m2 / (4.0 * Lb) - A_beta) * fb.h(l, k));
    Ten4 r_closed(n), r_direct(n);
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            r_closed(l, i, j, k) = B(l, k) * fb.h(i, j) + B(i, j) * fb.h(l, k) -
                                   B(l, j) * fb.h(i, k) - B(i, k) * fb.h(l, j);
            r_direct(l, i, j, k) =
                mu_bar(l, i, j, k) - sb.e_sigma * sb.p * mu_base(l, i, j, k);
          }
    rep.r_vs_closed = max_abs_diff(r_closed, r_direct) / (1.0 + frob(r_direct));

    if (n > 4) {
      Ten4 zeta_base = s4_defect(fb, vcB);
      Ten4 zeta_bar = s4_defect(fbT, vcT);
      double num = 0.0;
      for (size_t idx = 0; idx < zeta_bar.a.size(); ++idx) {
        const double d = zeta_bar.a[idx] - sb.e_sigma * sb.p * zeta_base.a[idx];
        num += d * d;
      }
      rep.eps_norm_rel = std::sqrt(num) / (1.0 + frob(zeta_bar));
    } else {
      rep.eps_reason = "needs n > 4";
    }
  } else {
    rep.r_reason = "stated for the beta-conformal family";
    rep.eps_reason = "stated for the beta-conformal family";
  }
  return rep;
}

AlphaCheckReport randers_kropina_alpha_check(const ChangeSpec& c,
                                             const MetricSpec& base, int samples,
                                             uint64_t seed, const SampleBox& box) {
  AlphaCheckReport rep;
  MetricSpec tm = transformed_metric(c, base);
  auto pts = sample_points(base.dim, tm.domain, samples, seed, box);
  for (const auto& pt : pts) {
    ChangePoint cp = make_change_point(c, base, pt.x, pt.y);
    if (!riemannian_at(cp.fb))
      throw misuse_error("alpha check is stated for Riemannian bases");
    const ScalarBundle& sb = cp.sb;
    rep.max_alpha1 = std::max(rep.max_alpha1, std::abs(sb.alpha1));
    rep.max_alpha2 = std::max(rep.max_alpha2, std::abs(sb.alpha2));
    // alpha's are differences of large terms for Kropina-type f; the
    // vanishing statement is meaningful relative to those terms
    const double a1_scale = std::abs(sb.e_sigma * sb.p_m1 / 2.0) +
                            std::abs(sb.e_sigma * sb.p * sb.lambda / (cp.n + 1));
    const double a2_scale = std::abs(sb.p02 / 6.0) +
                            std::abs(sb.q0 * sb.lambda / (cp.n + 1));
    rep.max_alpha1_rel =
        std::max(rep.max_alpha1_rel, std::abs(sb.alpha1) / (1.0 + a1_scale));
    rep.max_alpha2_rel =
        std::max(rep.max_alpha2_rel, std::abs(sb.alpha2) / (1.0 + a2_scale));
    ++rep.samples;
  }
  return rep;
}

BConditionReport b_condition(const MetricSpec& m, std::span<const Expr> b_exprs,
                             int samples, uint64_t seed, double threshold,
                             const SampleBox& box) {
  BConditionReport rep;
  rep.threshold = threshold;
  auto pts = sample_points(m.dim, m.domain, samples, seed, box);
  const int n = m.dim;
  for (const auto& pt : pts) {
    FundamentalBundle fb = fundamental(m, pt.x, pt.y);
    Vec b(n, 0.0);
    for (int i = 0; i < n; ++i) b[i] = eval_scalar(b_exprs[i], pt.x, {});
    Vec b_hi(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b_hi[i] += fb.g_inv(i, j) * b[j];

    BConditionSample s;
    s.x = pt.x;
    s.y = pt.y;
    Mat contraction(n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) v += b_hi[i] * fb.C(i, j, k);
        contraction(j, k) = v;
      }
    s.contraction_rel = frob(contraction) / (1.0 + frob(fb.C));

    // b^i|_h = -C^i_sh b^s: the vertical derivative of the raised one-form
    Mat bcov(n);
    for (int i = 0; i < n; ++i)
      for (int h = 0; h < n; ++h) {
        double v = 0.0;
        for (int ss = 0; ss < n; ++ss) v -= fb.C_mixed(i, ss, h) * b_hi[ss];
        bcov(i, h) = v;
      }
    s.b_cov_norm = frob(bcov);

    TTensor tt = t_tensor(m, pt.x, pt.y);
    s.T_rel = frob(tt.T4) / (1.0 + frob(fb.C));
    s.C_rel = frob(fb.C) / (1.0 + frob(fb.g));
    s.pass = s.contraction_rel <= threshold;
    rep.max_contraction_rel = std::max(rep.max_contraction_rel, s.contraction_rel);
    rep.samples.push_back(std::move(s));
  }
  rep.all_pass = true;
  for (const auto& s : rep.samples) rep.all_pass = rep.all_pass && s.pass;
  return rep;
}

EnergyEquivalenceReport energy_equivalence(const ChangeSpec& c, const MetricSpec& base,
                                           int samples, uint64_t seed, double tol,
                                           const SampleBox& box) {
  EnergyEquivalenceReport rep;
  if (base.dim <= 2) throw misuse_error("energy equivalence is stated for n > 2");
  MetricSpec tm = transformed_metric(c, base);
  auto pts = sample_points(base.dim, tm.domain, samples, seed, box);

  double qb = 0.0, bb = 0.0, qmax = 0.0;
  std::vector<std::pair<double, double>> q_beta;
  for (const auto& pt : pts) {
    ChangePoint cp = make_change_point(c, base, pt.x, pt.y);
    rep.max_p_m1 = std::max(rep.max_p_m1, std::abs(cp.sb.p_m1));
    qb += cp.sb.q * cp.sb.beta_val;
    bb += cp.sb.beta_val * cp.sb.beta_val;
    qmax = std::max(qmax, std::abs(cp.sb.q));
    q_beta.emplace_back(cp.sb.q, cp.sb.beta_val);

    FundamentalBundle fbT = fundamental(tm, pt.x, pt.y);
    double num = 0.0;
    for (size_t idx = 0; idx < fbT.C.a.size(); ++idx) {
      const double d = fbT.C.a[idx] - cp.sb.e_sigma * cp.sb.p * cp.fb.C.a[idx];
      num += d * d;
    }
    rep.c_residual =
        std::max(rep.c_residual, std::sqrt(num) / (1.0 + frob(fbT.C)));
    ++rep.samples;
  }
  rep.trivial_q = qmax <= tol;
  rep.fitted_k = bb > 0.0 ? qb / bb : 0.0;
  for (auto [q, beta] : q_beta)
    rep.q_residual =
        std::max(rep.q_residual, std::abs(q - rep.fitted_k * beta) / (1.0 + std::abs(q)));

  const bool a_pass = rep.max_p_m1 <= tol;
  const bool b_pass = rep.q_residual <= tol;
  const bool c_pass = rep.c_residual <= tol;
  rep.is_energy = a_pass && b_pass && c_pass;
  rep.consistent = rep.is_energy || (!a_pass && !b_pass && !c_pass) ||
                   (rep.trivial_q && a_pass && c_pass);
  return rep;
}

SweepResult consistency_sweep(std::span<const SweepPair> pairs, int samples,
                              uint64_t seed, double threshold,
                              const SampleBox& box) {
  SweepResult res;
  for (const auto& pair : pairs) {
    const MetricSpec& base = pair.base;
    const ChangeSpec& c = pair.change;
    MetricSpec tm = transformed_metric(c, base);
    const uint64_t pair_seed = seed ^ fnv1a(base.label + "/" + c.label);
    std::vector<SamplePoint> pts;
    try {
      pts = sample_points(base.dim, tm.domain, samples, pair_seed, box);
    } catch (const sampling_error&) {
      continue;
    }

    for (const auto& pt : pts) {
      FundamentalBundle fbB = fundamental(base, pt.x, pt.y);
      const bool base_riemannian = riemannian_at(fbB);

      // (i) Riemannian base: the transformed Cartan tensor splits through
      // its trace, so the quasi-C-reducibility residual must vanish
      if (base_riemannian) {
        QuasiSplit qs = quasi_c_split_for_change(c, base, pt.x, pt.y);
        ++res.checks;
        if (qs.residual_rel && *qs.residual_rel > threshold)
          res.violations.push_back("quasi split residual " +
                                   std::to_string(*qs.residual_rel) + " at pair " +
                                   base.label + "/" + c.label);
      }

      // (ii) no space may pass the b-condition and the T-test while keeping
      // a nonzero Cartan tensor
      auto check_triple = [&](const MetricSpec& m, const char* tag) {
        FundamentalBundle fb = fundamental(m, pt.x, pt.y);
        Vec b = one_form_values(c, pt.x, m.dim);
        Vec b_hi(m.dim, 0.0);
        for (int i = 0; i < m.dim; ++i)
          for (int j = 0; j < m.dim; ++j) b_hi[i] += fb.g_inv(i, j) * b[j];
        Mat contraction(m.dim);
        for (int j = 0; j < m.dim; ++j)
          for (int k = 0; k < m.dim; ++k) {
            double v = 0.0;
            for (int i = 0; i < m.dim; ++i) v += b_hi[i] * fb.C(i, j, k);
            contraction(j, k) = v;
          }
        const double b_rel = frob(contraction) / (1.0 + frob(fb.C));
        TTensor tt = t_tensor(m, pt.x, pt.y);
        const double t_rel = frob(tt.T4) / (1.0 + frob(fb.C));
        const double c_rel = frob(fb.C) / (1.0 + frob(fb.g));
        ++res.checks;
        if (b_rel <= threshold && t_rel <= threshold && c_rel > threshold)
          res.violations.push_back(std::string("b-condition/T/C triple at ") + tag +
                                   " " + base.label + "/" + c.label);
      };
      check_triple(base, "base");
      check_triple(tm, "transformed");

      // (iii) a generalized Randers change cannot preserve the b-condition
      if (c.family == ChangeSpec::Family::generalized_randers) {
        Vec b = one_form_values(c, pt.x, base.dim);
        Vec b_hi(base.dim, 0.0);
        for (int i = 0; i < base.dim; ++i)
          for (int j = 0; j < base.dim; ++j) b_hi[i] += fbB.g_inv(i, j) * b[j];
        Mat contraction(base.dim);
        for (int j = 0; j < base.dim; ++j)
          for (int k = 0; k < base.dim; ++k) {
            double v = 0.0;
            for (int i = 0; i < base.dim; ++i) v += b_hi[i] * fbB.C(i, j, k);
            contraction(j, k) = v;
          }
        const double base_rel = frob(contraction) / (1.0 + frob(fbB.C));
        if (base_rel <= threshold) {
          FundamentalBundle fbT = fundamental(tm, pt.x, pt.y);
          Vec bT_hi(base.dim, 0.0);
          for (int i = 0; i < base.dim; ++i)
            for (int j = 0; j < base.dim; ++j) bT_hi[i] += fbT.g_inv(i, j) * b[j];
          Mat contractionT(base.dim);
          for (int j = 0; j < base.dim; ++j)
            for (int k = 0; k < base.dim; ++k) {
              double v = 0.0;
              for (int i = 0; i < base.dim; ++i) v += bT_hi[i] * fbT.C(i, j, k);
              contractionT(j, k) = v;
            }
          const double t_rel = frob(contractionT) / (1.0 + frob(fbT.C));
          ++res.checks;
          if (t_rel <= threshold)
            res.violations.push_back(
                "generalized Randers space kept the b-condition at pair " +
                base.label + "/" + c.label);
        }
      }
    }
  }
  return res;
}

}  // namespace finsler
