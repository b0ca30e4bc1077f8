#include "finsler/verify.hpp"

#include <cmath>
#include <map>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

struct BlockAcc {
  double max_rel = 0.0;
  double tol = 0.0;
  int samples = 0;
  void add(double rel) {
    max_rel = std::max(max_rel, rel);
    ++samples;
  }
};

bool riemannian_at(const FundamentalBundle& fb) {
  return frob(fb.C) <= 1e-10 * (1.0 + frob(fb.g));
}

}  // namespace

PairVerifyReport verify_pair(const ChangeSpec& c, const MetricSpec& base,
                             int samples, uint64_t seed,
                             const VerifyTolerances& tol_in, const SampleBox& box) {
  VerifyTolerances tol = tol_in;
  if (tol.override_all) {
    const double t = *tol.override_all;
    tol = VerifyTolerances{t, t, t, t, t, t, t, t, t, t, t, t, std::nullopt};
  }

  PairVerifyReport rep;
  rep.metric = base.label;
  rep.change = c.label;

  MetricSpec tm = transformed_metric(c, base);
  std::vector<SamplePoint> pts;
  try {
    pts = sample_points(base.dim, tm.domain, samples, seed, box,
                        &rep.samples_rejected);
  } catch (const sampling_error& se) {
    rep.pass = false;
    rep.note = se.what();
    return rep;
  }
  rep.samples_used = static_cast<int>(pts.size());

  std::map<std::string, BlockAcc> acc;
  auto upd = [&](const std::string& name, double tolerance, double diff,
                 double scale) {
    BlockAcc& b = acc[name];
    b.tol = tolerance;
    b.add(diff / (1.0 + scale));
  };

  const bool theta_family = c.family == ChangeSpec::Family::randers ||
                            c.family == ChangeSpec::Family::beta_conformal;
  const int n = base.dim;

  for (const auto& pt : pts) {
    ChangePoint cp = make_change_point(c, base, pt.x, pt.y);
    const ScalarBundle& sb = cp.sb;
    FundamentalBundle fbT = fundamental(tm, pt.x, pt.y);
    const bool base_riem = riemannian_at(cp.fb);
    if (cp.fb.g_cond > 1e8 || fbT.g_cond > 1e8) ++rep.ill_conditioned;

    // --- metric family ---
    MetricForms mf = closed_form_metric(cp);
    upd("metric.l_bar", tol.metric_family, max_abs_diff(mf.l_bar, fbT.l_lo),
        norm2(fbT.l_lo));
    upd("metric.h_bar", tol.metric_family, max_abs_diff(mf.h_bar, fbT.h),
        frob(fbT.h));
    upd("metric.g_bar", tol.metric_family, max_abs_diff(mf.g_bar, fbT.g),
        frob(fbT.g));
    upd("metric.g_bar_inv", tol.metric_family,
        max_abs_diff(mf.g_bar_inv, fbT.g_inv), frob(fbT.g_inv));

    // closed-form inverse times closed-form metric
    double id_worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += mf.g_bar_inv(i, k) * mf.g_bar(k, j);
        id_worst = std::max(id_worst, std::abs(s - (i == j ? 1.0 : 0.0)));
      }
    upd("metric.inverse_consistency", tol.inverse_consistency, id_worst, 0.0);

    // --- trace identities of the inverse scalars ---
    const double r1_rhs = sb.q / sb.eps;
    upd("scalars.trace_identity_1", tol.trace_identities,
        std::abs(sb.beta_val * sb.s0 + sb.L * sb.L * sb.s_m1 - r1_rhs),
        std::abs(r1_rhs));
    const double r2_rhs = sb.e_sigma * sb.p_m1 * sb.m2 / sb.eps;
    upd("scalars.trace_identity_2", tol.trace_identities,
        std::abs(sb.b2 * sb.s_m1 + sb.beta_val * sb.s_m2 - r2_rhs),
        std::abs(r2_rhs));

    // Euler relations of f
    const double Lt = sb.e_sigma * sb.L;
    upd("scalars.euler_f", tol.euler,
        std::abs(Lt * sb.f1 + sb.beta_val * sb.f2 - sb.f), std::abs(sb.f));
    upd("scalars.euler_f1", tol.euler, std::abs(Lt * sb.f11 + sb.beta_val * sb.f12),
        std::abs(Lt * sb.f11) + std::abs(sb.beta_val * sb.f12));
    upd("scalars.euler_f2", tol.euler, std::abs(Lt * sb.f12 + sb.beta_val * sb.f22),
        std::abs(Lt * sb.f12) + std::abs(sb.beta_val * sb.f22));

    // --- Cartan family ---
    CartanForms cf = closed_form_cartan(cp);
    upd("cartan.C_bar", tol.cartan_family, max_abs_diff(cf.C_bar, fbT.C),
        frob(fbT.C));
    upd("cartan.C_bar_mixed", tol.cartan_family,
        max_abs_diff(cf.C_bar_mixed, fbT.C_mixed), frob(fbT.C_mixed));
    upd("cartan.C_bar_lo", tol.cartan_family, max_abs_diff(cf.C_bar_lo, fbT.C_lo),
        norm2(fbT.C_lo));
    upd("cartan.C_bar_hi", tol.cartan_family, max_abs_diff(cf.C_bar_hi, fbT.C_hi),
        norm2(fbT.C_hi));
    upd("cartan.C2_bar", tol.cartan_family, std::abs(cf.C2_bar - fbT.C2),
        std::abs(fbT.C2) + cf.C2_scale);

    // --- v-curvature family ---
    VCurvature vcB = v_curvature(cp.fb);
    VCurvature vcT = v_curvature(fbT);
    SCurvForms sf = closed_form_s(cp, vcB);
    upd("v_curv.S4", tol.s_family, max_abs_diff(sf.S_bar4, vcT.S4),
        frob(vcT.S4) + sf.S4_scale + vcT.assembly_scale);
    upd("v_curv.S_ric", tol.s_family, max_abs_diff(sf.S_bar_ric, vcT.S_ric),
        frob(vcT.S_ric) + sf.ric_scale);
    upd("v_curv.S_scal", tol.s_family, std::abs(sf.S_bar_scal - vcT.S_scal),
        std::abs(vcT.S_scal) + sf.scal_scale);

    double ind_worst = 0.0;
    for (int i = 0; i < n; ++i) {
      double hy = 0.0, oy = 0.0;
      for (int j = 0; j < n; ++j) {
        hy += sf.H(i, j) * pt.y[j];
        oy += sf.omega(i, j) * pt.y[j];
      }
      ind_worst = std::max({ind_worst, std::abs(hy), std::abs(oy)});
    }
    upd("v_curv.H_omega_indicatory", tol.indicatory, ind_worst,
        frob(sf.H) + frob(sf.omega));

    double trH = 0.0, trO = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        trH += cp.fb.g_inv(i, j) * sf.H(i, j);
        trO += cp.fb.g_inv(i, j) * sf.omega(i, j);
      }
    upd("v_curv.H_omega_traces", tol.indicatory,
        std::abs(trH - sf.trH) + std::abs(trO - sf.trOmega),
        std::abs(sf.trH) + std::abs(sf.trOmega));

    double psi_worst = 0.0;
    for (int i = 0; i < n; ++i) {
      double py = 0.0;
      for (int j = 0; j < n; ++j) {
        py += sf.Psi(i, j) * pt.y[j];
        psi_worst = std::max(psi_worst, std::abs(sf.Psi(i, j) - sf.Psi(j, i)));
      }
      psi_worst = std::max(psi_worst, std::abs(py));
    }
    upd("v_curv.Psi_symmetric_indicatory", tol.indicatory, psi_worst,
        frob(sf.Psi));

    // --- T-tensor family ---
    TTensor tB = t_tensor(base, pt.x, pt.y);
    TTensor tT = t_tensor(tm, pt.x, pt.y);
    TForms tf = closed_form_t(cp, tB);
    const double t_scale = frob(tT.T4) + tf.T4_scale + tT.assembly_scale;
    upd("t_tensor.T_bar4", tol.t_family, max_abs_diff(tf.T_bar4, tT.T4), t_scale);

    if (theta_family) {
      Ten4 special = special_t_beta_conformal(cp, tB);
      upd("t_tensor.beta_conformal_theta", tol.beta_conformal_t,
          max_abs_diff(special, tT.T4), t_scale);
      upd("t_tensor.trace_identity", tol.t_trace_identity,
          t_trace_identity_residual(cp, tB), 0.0);
      if (base_riem && std::abs(sb.sigma) <= 1e-14) {
        Ten4 randers = special_t_randers(cp);
        upd("t_tensor.randers_theta1", tol.randers_t,
            max_abs_diff(randers, tT.T4), t_scale);
      }
    }
    if (c.family == ChangeSpec::Family::kropina && base_riem &&
        std::abs(sb.sigma) <= 1e-14) {
      Ten4 kro = special_t_kropina(cp);
      upd("t_tensor.kropina_law", tol.kropina_t, max_abs_diff(kro, tT.T4), t_scale);
    }
  }

  for (auto& [name, b] : acc) {
    BlockResult r;
    r.name = name;
    r.max_rel = b.max_rel;
    r.tol = b.tol;
    r.samples = b.samples;
    r.pass = b.max_rel <= b.tol;
    rep.pass = rep.pass && r.pass;
    rep.blocks.push_back(std::move(r));
  }
  return rep;
}

}  // namespace finsler
