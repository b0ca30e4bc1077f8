// Acceptance suite: every criterion prints one PASS/FAIL line with the
// measured worst value and its pinned tolerance; the process exits nonzero
// if any criterion fails.

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "finsler/catalog.hpp"
#include "finsler/classify.hpp"
#include "finsler/curvature.hpp"
#include "finsler/fd.hpp"
#include "finsler/projective.hpp"
#include "finsler/verify.hpp"

using namespace finsler;

namespace {

int g_failures = 0;

void report(int id, const std::string& label, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
              label.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct Worst {
  double value = 0.0;
  std::string where;
  void update(double v, const std::string& w) {
    if (v > value) {
      value = v;
      where = w;
    }
  }
  std::string detail(double tol) const {
    return "worst " + fmt(value) + " vs tol " + fmt(tol) +
           (where.empty() ? "" : " at " + where);
  }
};

bool is_riemannian_base(const std::string& label) {
  return label.rfind("euclid", 0) == 0 || label.rfind("riem", 0) == 0;
}

}  // namespace

int main() {
  Catalog cat = builtin_catalog();
  const int samples = cat.samples;  // 20
  const uint64_t seed = cat.seed;   // 7

  const char* verify_changes[] = {"randers",  "kropina", "energy23",
                                  "genrand",  "betaconf", "custom"};

  // ---- oracle suites over every (change, base) pair ----
  Worst w_metric, w_s01, w_cartan, w_scurv, w_t, w_randers_t, w_kropina_t,
      w_theta_t, w_ttrace;
  bool suites_ok = true;
  for (const auto& me : cat.metrics) {
    for (const char* cl : verify_changes) {
      const ChangeSpec& c = *cat.find_change(cl);
      const uint64_t ps = seed ^ fnv1a(me.label + "/" + cl);
      PairVerifyReport r = verify_pair(c, me.spec, samples, ps);
      if (r.samples_used == 0) {
        suites_ok = false;
        continue;
      }
      const std::string at = me.label + "/" + cl;
      for (const auto& b : r.blocks) {
        if (b.name.rfind("metric.", 0) == 0) w_metric.update(b.max_rel, at);
        if (b.name.rfind("scalars.trace_identity", 0) == 0)
          w_s01.update(b.max_rel, at);
        if (b.name.rfind("cartan.", 0) == 0) w_cartan.update(b.max_rel, at);
        if (b.name.rfind("v_curv.", 0) == 0 && is_riemannian_base(me.label))
          w_scurv.update(b.max_rel, at);
        if (b.name == "t_tensor.T_bar4") w_t.update(b.max_rel, at);
        if (b.name == "t_tensor.randers_theta1") w_randers_t.update(b.max_rel, at);
        if (b.name == "t_tensor.kropina_law") w_kropina_t.update(b.max_rel, at);
        if (b.name == "t_tensor.beta_conformal_theta")
          w_theta_t.update(b.max_rel, at);
        if (b.name == "t_tensor.trace_identity") w_ttrace.update(b.max_rel, at);
      }
    }
  }

  report(1, "closed-form metric family (l, h, g, g^-1) vs jet computation",
         suites_ok && w_metric.value <= 1e-9, w_metric.detail(1e-9));
  report(2, "inverse-scalar trace identities", w_s01.value <= 1e-10,
         w_s01.detail(1e-10));
  report(3, "closed-form Cartan family (C, C_i, C^i, C^2)",
         w_cartan.value <= 1e-8, w_cartan.detail(1e-8));

  // ---- energy-change equivalences ----
  {
    const ChangeSpec& en = *cat.find_change("energy23");
    double p_m1 = 0, kerr = 0, cres = 0;
    bool ok = true;
    for (const char* ml : {"euclid3", "riem3", "quartic3", "quartic5"}) {
      const MetricSpec& base = *cat.find_metric(ml);
      EnergyEquivalenceReport er =
          energy_equivalence(en, base, samples, seed ^ fnv1a(std::string(ml) + "/energy23"));
      p_m1 = std::max(p_m1, er.max_p_m1);
      kerr = std::max(kerr, std::abs(er.fitted_k - 3.0));
      cres = std::max(cres, er.c_residual);
      ok = ok && er.is_energy && er.consistent;
    }
    report(4, "energy change: p_m1 = 0, fitted k = 3, C_bar = e^s p C",
           ok && p_m1 <= 1e-10 && kerr <= 1e-9 && cres <= 1e-10,
           "p_m1 " + fmt(p_m1) + ", |k-3| " + fmt(kerr) + ", C residual " +
               fmt(cres));
  }

  report(5, "v-curvature laws (S4, Ricci, scalar) on Riemannian bases",
         w_scurv.value <= 1e-7, w_scurv.detail(1e-7));

  // ---- T-tensor law plus its specializations ----
  {
    // conformal: T_bar = e^{3s} T on quartic and Riemannian bases
    Worst w_conf;
    ChangeSpec conf = conformal_change(parse("0.1*x1", 5));
    conf.label = "conformal";
    for (const char* ml : {"quartic3", "riem3"}) {
      const MetricSpec& base = *cat.find_metric(ml);
      MetricSpec tm = transformed_metric(conf, base);
      auto pts = sample_points(base.dim, tm.domain, 10,
                               seed ^ fnv1a(std::string(ml) + "/conformal"),
                               cat.box);
      for (const auto& pt : pts) {
        TTensor tB = t_tensor(base, pt.x, pt.y);
        TTensor tT = t_tensor(tm, pt.x, pt.y);
        Ten4 law = special_t_conformal(tB, sigma_value(conf, pt.x));
        w_conf.update(max_abs_diff(law, tT.T4) / (1.0 + frob(tT.T4)), ml);
      }
    }
    const bool pass = w_t.value <= 1e-7 && w_conf.value <= 1e-9 &&
                      w_randers_t.value <= 1e-8 && w_kropina_t.value <= 1e-7 &&
                      w_theta_t.value <= 1e-8 && w_ttrace.value <= 1e-8;
    report(6,
           "T-tensor law on all pairs; conformal/Randers/Kropina/"
           "beta-conformal specializations",
           pass,
           "general " + fmt(w_t.value) + ", conformal " + fmt(w_conf.value) +
               ", Randers " + fmt(w_randers_t.value) + ", Kropina " +
               fmt(w_kropina_t.value) + ", Theta " + fmt(w_theta_t.value) +
               ", trace " + fmt(w_ttrace.value));
  }

  // ---- classifier theorems ----
  {
    Worst w_semi, w_quasi, w_rt, w_alpha, w_d, w_eps;
    for (const char* ml : {"euclid3", "riem3"}) {
      const MetricSpec& base = *cat.find_metric(ml);
      for (const char* cl : verify_changes) {
        const ChangeSpec& c = *cat.find_change(cl);
        const uint64_t ps = seed ^ fnv1a(std::string(ml) + "/" + cl);
        MetricSpec tm = transformed_metric(c, base);
        const std::string at = std::string(ml) + "/" + cl;
        auto pts = sample_points(base.dim, tm.domain, samples, ps, cat.box);
        for (const auto& pt : pts) {
          SemiDecomposition sd = semi_c_decomposition_for_change(c, base, pt.x, pt.y);
          if (sd.note.empty()) {  // skip degenerate/indeterminate splits
            w_semi.update(sd.residual_rel, at);
            w_rt.update(std::abs(sd.r + sd.t - 1.0), at);
          }
          QuasiSplit qs = quasi_c_split_for_change(c, base, pt.x, pt.y);
          if (qs.residual_rel) w_quasi.update(*qs.residual_rel, at);
        }
        AlphaCheckReport ar = randers_kropina_alpha_check(c, base, samples, ps);
        if (c.family == ChangeSpec::Family::kropina ||
            c.family == ChangeSpec::Family::generalized_randers) {
          w_alpha.update(std::max(ar.max_alpha1_rel, ar.max_alpha2_rel), at);
        }
      }
    }
    const ChangeSpec& bc = *cat.find_change("betaconf");
    for (const char* ml : {"euclid3", "quartic3", "quartic5"}) {
      const MetricSpec& base = *cat.find_metric(ml);
      const uint64_t ps = seed ^ fnv1a(std::string(ml) + "/betaconf");
      MetricSpec tm = transformed_metric(bc, base);
      auto pts = sample_points(base.dim, tm.domain, 8, ps, cat.box);
      for (const auto& pt : pts) {
        ChangeDeltaReport dr = change_defect_deltas(bc, base, pt.x, pt.y);
        w_d.update(dr.d_norm_rel, ml);
        if (dr.eps_norm_rel) w_eps.update(*dr.eps_norm_rel, ml);
      }
    }
    const bool pass = w_semi.value <= 1e-8 && w_rt.value <= 1e-10 &&
                      w_quasi.value <= 1e-8 && w_alpha.value <= 1e-10 &&
                      w_d.value <= 1e-9 && w_eps.value <= 1e-7;
    report(7,
           "Riemannian-base splits (semi/quasi), alpha vanishing, "
           "beta-conformal d and eps deltas",
           pass,
           "semi " + fmt(w_semi.value) + ", r+t-1 " + fmt(w_rt.value) +
               ", quasi " + fmt(w_quasi.value) + ", alpha " + fmt(w_alpha.value) +
               ", d " + fmt(w_d.value) + ", eps " + fmt(w_eps.value));
  }

  // ---- b-condition invariance and the implication sweep ----
  {
    const ChangeSpec& en = *cat.find_change("energy23");
    bool preserved = true;
    for (const auto& me : cat.metrics) {
      const uint64_t ps = seed ^ fnv1a(me.label + "/energy23/bcond");
      MetricSpec tm = transformed_metric(en, me.spec);
      BConditionReport rb = b_condition(me.spec, en.b, samples, ps);
      BConditionReport rt = b_condition(tm, en.b, samples, ps);
      preserved = preserved && rb.samples.size() == rt.samples.size();
      for (size_t i = 0; i < rb.samples.size() && i < rt.samples.size(); ++i)
        preserved = preserved && rb.samples[i].pass == rt.samples[i].pass;
    }

    std::vector<SweepPair> pairs;
    for (const auto& me : cat.metrics)
      for (const char* cl : verify_changes)
        pairs.push_back({*cat.find_change(cl), me.spec});
    SweepResult sw = consistency_sweep(pairs, 10, seed);
    report(8, "b-condition invariance under the energy change; implication sweep",
           preserved && sw.violations.empty(),
           std::string("flag preserved: ") + (preserved ? "yes" : "no") + ", " +
               std::to_string(sw.checks) + " sweep checks, " +
               std::to_string(sw.violations.size()) + " violations");
    for (const auto& v : sw.violations) std::printf("    sweep violation: %s\n", v.c_str());
  }

  // ---- projective suite ----
  {
    const MetricSpec& base = *cat.find_metric("riem2");
    const ChangeSpec& grad = *cat.find_change("randers-grad");
    const ChangeSpec& rot = *cat.find_change("randers-rot");
    MetricSpec tgrad = transformed_metric(grad, base);
    MetricSpec trot = transformed_metric(rot, base);

    Worst phi_g, dev_g, dgl_g;
    double phi_r = 1e300, dev_r = 1e300, dgl_r = 1e300;
    auto ptsg = sample_points(2, tgrad.domain, samples, seed ^ fnv1a("riem2/grad"),
                              cat.box);
    for (const auto& pt : ptsg) {
      phi_g.update(norm2(phi(grad, base, pt.x, pt.y)), "");
      dev_g.update(projective_deviation(base, tgrad, pt.x, pt.y), "");
    }
    for (size_t i = 0; i < ptsg.size() && i < 6; ++i)
      dgl_g.update(frob(douglas(tgrad, ptsg[i].x, ptsg[i].y)), "");

    auto ptsr = sample_points(2, trot.domain, samples, seed ^ fnv1a("riem2/rot"),
                              cat.box);
    for (const auto& pt : ptsr) {
      phi_r = std::min(phi_r, norm2(phi(rot, base, pt.x, pt.y)));
      dev_r = std::min(dev_r, projective_deviation(base, trot, pt.x, pt.y));
    }
    for (size_t i = 0; i < ptsr.size() && i < 6; ++i)
      dgl_r = std::min(dgl_r, frob(douglas(trot, ptsr[i].x, ptsr[i].y)));

    Vec x0 = {0.1, 0.05};
    Vec y0 = {0.8, 0.55};
    const double L0 = fundamental(base, x0, y0).L;
    const double geo_g = geodesic_compare(base, tgrad, x0, y0, 1.0 / L0, 1000);
    const double geo_r = geodesic_compare(base, trot, x0, y0, 1.0 / L0, 1000);

    const bool pass_g = phi_g.value <= 1e-7 && dev_g.value <= 1e-7 &&
                        geo_g <= 1e-4 && dgl_g.value <= 1e-6;
    const bool pass_r =
        phi_r >= 1e-3 && dev_r >= 1e-3 && geo_r >= 1e-3 && dgl_r >= 1e-3;
    report(9, "projective suite: gradient one-form passes, rotational fails",
           pass_g && pass_r,
           "gradient: phi " + fmt(phi_g.value) + ", spray " + fmt(dev_g.value) +
               ", geodesic " + fmt(geo_g) + ", douglas " + fmt(dgl_g.value) +
               "; rotational margins: phi " + fmt(phi_r) + ", spray " +
               fmt(dev_r) + ", geodesic " + fmt(geo_r) + ", douglas " +
               fmt(dgl_r));
  }

  // ---- numerical hygiene ----
  {
    Worst w_fd;
    for (const char* ml : {"euclid2", "riem2", "quartic2", "riem3"}) {
      const MetricSpec& m = *cat.find_metric(ml);
      ScalarFn L2f = [&m](std::span<const double> x, std::span<const double> y) {
        auto sp = jet_space(JetConfig{0, 0, 0, 0});
        JetPoint pt;
        pt.space = sp;
        for (size_t i = 0; i < x.size(); ++i) pt.x.push_back(Jet::constant(sp, x[i]));
        for (size_t i = 0; i < y.size(); ++i) pt.y.push_back(Jet::constant(sp, y[i]));
        const double L = m.L(pt.x, pt.y).value();
        return L * L;
      };
      auto pts = sample_points(m.dim, m.domain, 3, seed ^ fnv1a(ml), cat.box);
      for (const auto& pt : pts) {
        JetPoint jp = seed_point(m.dim, pt.x, pt.y, 4, true);
        Jet L2 = metric_jet(m, jp) * metric_jet(m, jp);
        std::vector<int> alpha(m.dim, 0), beta(m.dim, 0);
        // every multi-index of total order <= 4 with x order <= 1
        std::vector<std::pair<std::vector<int>, std::vector<int>>> cases;
        std::vector<int> b(m.dim, 0);
        std::function<void(int, int)> gen = [&](int pos, int left) {
          if (pos == m.dim) {
            cases.push_back({std::vector<int>(m.dim, 0), b});
            for (int xi = 0; xi < m.dim && left > 0; ++xi) {
              auto a = std::vector<int>(m.dim, 0);
              a[xi] = 1;
              cases.push_back({a, b});
            }
            return;
          }
          for (int k = 0; k <= left; ++k) {
            b[pos] = k;
            gen(pos + 1, left - k);
          }
          b[pos] = 0;
        };
        gen(0, 4);
        for (const auto& [a, bb] : cases) {
          int total = 0;
          for (int v : a) total += v;
          for (int v : bb) total += v;
          if (total > 4) continue;
          const double jet_v = L2.extract(a, bb);
          const double fd_v = fd_oracle(L2f, pt.x, pt.y, a, bb, 8e-3);
          w_fd.update(std::abs(jet_v - fd_v) / (1.0 + std::abs(jet_v)), ml);
        }
      }
    }

    // RK4 self-convergence on the riem2 geodesic
    const MetricSpec& r2 = *cat.find_metric("riem2");
    Vec x0 = {0.1, -0.2};
    Vec y0 = {0.9, 0.5};
    GeodesicPath ref = geodesic(r2, x0, y0, 1.0, 8192);
    auto err = [&](int steps) {
      GeodesicPath p = geodesic(r2, x0, y0, 1.0, steps);
      return std::sqrt(std::pow(p.x.back()[0] - ref.x.back()[0], 2) +
                       std::pow(p.x.back()[1] - ref.x.back()[1], 2));
    };
    const double order = std::log2(err(64) / err(128));
    report(10, "jet vs finite-difference oracle to order 4; RK4 convergence",
           w_fd.value <= 1e-5 && order >= 3.8,
           "fd agreement " + fmt(w_fd.value) + ", RK4 order " + fmt(order));
  }

  std::printf("ACCEPTANCE: %s (%d criterion failures)\n",
              g_failures == 0 ? "PASS" : "FAIL", g_failures);
  return g_failures == 0 ? 0 : 1;
}
