#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/classify.hpp"

using namespace finsler;

namespace {

std::vector<Expr> const_b(std::initializer_list<double> vals, int dim) {
  std::vector<Expr> out;
  for (double v : vals) out.push_back(parse(std::to_string(v), dim));
  return out;
}

std::vector<Expr> default_b(int dim) {
  std::vector<Expr> out;
  const char* vals[] = {"0.2", "0.1", "0.15", "0.05", "0.12"};
  for (int i = 0; i < dim; ++i) out.push_back(parse(vals[i], dim));
  return out;
}

}  // namespace

TEST_CASE("defects of named spaces") {
  std::vector<double> rc = {1.0, 1.0, 1.0, 1.0};
  MetricSpec riem4 = riemannian_diag_metric(4, rc);
  std::vector<double> x4 = {0.2, -0.1, 0.3, 0.1};
  std::vector<double> y4 = {1.0, 0.7, -0.5, 0.8};
  DefectTensors d4 = defects(riem4, x4, y4);
  REQUIRE(d4.K3.has_value());
  CHECK(frob(*d4.K3) <= 1e-12);
  REQUIRE(d4.eta3.has_value());
  CHECK(frob(*d4.eta3) <= 1e-12);
  REQUIRE(d4.mu4.has_value());
  CHECK(frob(*d4.mu4) <= 1e-12);
  CHECK(d4.mu4_classification_applicable);
  CHECK_FALSE(d4.zeta4.has_value());  // needs n > 4

  // a Randers space over a Euclidean base is C-reducible
  MetricSpec e3 = euclidean_metric(3);
  ChangeSpec randers = randers_change(default_b(3));
  MetricSpec tm = transformed_metric(randers, e3);
  auto pts = sample_points(3, tm.domain, 8, 31, SampleBox{});
  for (const auto& pt : pts) {
    DefectTensors dt = defects(tm, pt.x, pt.y);
    REQUIRE(dt.K3.has_value());
    CHECK(frob(*dt.K3) / (1.0 + dt.C_norm) < 1e-8);
  }

  // quartic n=3: the S3 defect is finite and reported, S4 gate closed
  MetricSpec q3 = quartic_minkowski_metric(3);
  std::vector<double> x3 = {0.0, 0.0, 0.0};
  std::vector<double> y3 = {1.0, 1.2, -0.8};
  DefectTensors dq = defects(q3, x3, y3);
  REQUIRE(dq.mu4.has_value());
  CHECK_FALSE(dq.mu4_classification_applicable);
  CHECK(std::isfinite(frob(*dq.mu4)));
  CHECK_FALSE(dq.zeta4.has_value());
  CHECK(dq.zeta4_reason == "needs n > 4");
}

TEST_CASE("semi-C-reducibility of transformed Riemannian spaces") {
  MetricSpec e3 = euclidean_metric(3);
  for (const ChangeSpec& c :
       {randers_change(default_b(3)), kropina_change(default_b(3)),
        custom_change(parse("sqrt(y1^2 + y2^2) + 0.1*y2", 2), default_b(3), Expr{})}) {
    MetricSpec tm = transformed_metric(c, e3);
    auto pts = sample_points(3, tm.domain, 8, 5 + c.b.size(), SampleBox{});
    for (const auto& pt : pts) {
      SemiDecomposition sd = semi_c_decomposition_for_change(c, e3, pt.x, pt.y);
      CHECK(sd.formula_used);
      CHECK(sd.r + sd.t == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(sd.residual_rel < 1e-8);
    }
  }

  // generic space: least-squares split merely reported
  MetricSpec q3 = quartic_minkowski_metric(3);
  std::vector<double> x3 = {0.0, 0.0, 0.0};
  std::vector<double> y3 = {0.9, 1.1, -0.7};
  SemiDecomposition sd = semi_c_decomposition(q3, x3, y3);
  CHECK(sd.r + sd.t == doctest::Approx(1.0));
  CHECK(std::isfinite(sd.residual_rel));
}

TEST_CASE("change-level defect deltas") {
  // beta-conformal: d vanishes over any base, eps vanishes for n = 5
  MetricSpec q5 = quartic_minkowski_metric(5);
  ChangeSpec bc = randers_change(default_b(5), parse("0.1*x1", 5));
  MetricSpec tm5 = transformed_metric(bc, q5);
  auto pts5 = sample_points(5, tm5.domain, 4, 77, SampleBox{});
  for (const auto& pt : pts5) {
    ChangeDeltaReport rep = change_defect_deltas(bc, q5, pt.x, pt.y);
    CHECK(rep.d_norm_rel < 1e-9);
    CHECK(rep.d_closed_vs_direct < 1e-9);
    REQUIRE(rep.eps_norm_rel.has_value());
    CHECK(*rep.eps_norm_rel < 1e-7);
    REQUIRE(rep.r_vs_closed.has_value());
    CHECK(*rep.r_vs_closed < 1e-7);
  }

  // generic change over a Riemannian base: I matches Phi V - lambda^3 m m m,
  // and the d closed form matches the defect difference
  MetricSpec e3 = euclidean_metric(3);
  ChangeSpec gen = custom_change(parse("sqrt(y1^2 + y2^2) + 0.1*y2", 2),
                                 default_b(3), Expr{});
  MetricSpec tm3 = transformed_metric(gen, e3);
  auto pts3 = sample_points(3, tm3.domain, 6, 78, SampleBox{});
  for (const auto& pt : pts3) {
    ChangeDeltaReport rep = change_defect_deltas(gen, e3, pt.x, pt.y);
    REQUIRE(rep.I_vs_closed.has_value());
    CHECK(*rep.I_vs_closed < 1e-8);
    CHECK(rep.d_closed_vs_direct < 1e-9);
    CHECK_FALSE(rep.eps_norm_rel.has_value());
  }

  // d closed form holds over a non-Riemannian base too
  MetricSpec q3 = quartic_minkowski_metric(3);
  ChangeSpec kro = kropina_change(default_b(3));
  MetricSpec tmq = transformed_metric(kro, q3);
  auto ptsq = sample_points(3, tmq.domain, 6, 79, SampleBox{});
  for (const auto& pt : ptsq) {
    ChangeDeltaReport rep = change_defect_deltas(kro, q3, pt.x, pt.y);
    CHECK(rep.d_closed_vs_direct < 1e-8);
  }
}

TEST_CASE("alpha check: Randers and Kropina types vanish, energy does not") {
  MetricSpec e3 = euclidean_metric(3);

  ChangeSpec gr = generalized_randers_change(0.7, 1.3, default_b(3));
  AlphaCheckReport a1 = randers_kropina_alpha_check(gr, e3, 15, 3);
  CHECK(a1.max_alpha1 <= 1e-12);
  CHECK(a1.max_alpha2 <= 1e-12);

  ChangeSpec kro = kropina_change(default_b(3));
  AlphaCheckReport a2 = randers_kropina_alpha_check(kro, e3, 15, 3);
  CHECK(a2.max_alpha1_rel <= 1e-10);
  CHECK(a2.max_alpha2_rel <= 1e-10);

  // Kropina-type with a Randers part: f = (Lt^2 + beta^2) / (c3 beta)
  ChangeSpec kt = custom_change(parse("(y1^2 + y2^2)/(1.5*y2)", 2), default_b(3),
                                Expr{});
  AlphaCheckReport a3 = randers_kropina_alpha_check(kt, e3, 15, 3);
  CHECK(a3.max_alpha1_rel <= 1e-10);
  CHECK(a3.max_alpha2_rel <= 1e-10);

  // an energy-type f also sits in the alpha-null family (p_m1 = p02 = 0
  // makes lambda vanish); a genuinely generic f is needed for nonzero alpha
  ChangeSpec en = energy_change(1.0, 1.0, default_b(3));
  AlphaCheckReport a4 = randers_kropina_alpha_check(en, e3, 15, 3);
  CHECK(a4.max_alpha1 <= 1e-12);

  ChangeSpec gen = custom_change(parse("y1 + y2^2/y1", 2), default_b(3), Expr{});
  AlphaCheckReport a5 = randers_kropina_alpha_check(gen, e3, 15, 3);
  CHECK(a5.max_alpha1 > 1e-4);
}

TEST_CASE("b-condition reports") {
  std::vector<double> rc = {1.0, 1.0, 1.0};
  MetricSpec riem3 = riemannian_diag_metric(3, rc);
  auto b = const_b({0.3, 0.2, 0.1}, 3);
  BConditionReport r1 = b_condition(riem3, b, 10, 11);
  CHECK(r1.all_pass);  // C = 0

  MetricSpec q3 = quartic_minkowski_metric(3);
  auto b2 = const_b({1.0, 0.0, 0.0}, 3);
  BConditionReport r2 = b_condition(q3, b2, 10, 11);
  CHECK(r2.max_contraction_rel > 1e-3);  // generically fails

  // energy change preserves the flag on every sample
  ChangeSpec en = energy_change(2.0, 3.0, default_b(3));
  MetricSpec tm = transformed_metric(en, q3);
  BConditionReport base_rep = b_condition(q3, en.b, 10, 13);
  BConditionReport tran_rep = b_condition(tm, en.b, 10, 13);
  REQUIRE(base_rep.samples.size() == tran_rep.samples.size());
  for (size_t i = 0; i < base_rep.samples.size(); ++i)
    CHECK(base_rep.samples[i].pass == tran_rep.samples[i].pass);
}

TEST_CASE("energy equivalence verdicts") {
  MetricSpec q3 = quartic_minkowski_metric(3);

  EnergyEquivalenceReport good =
      energy_equivalence(energy_change(2.0, 3.0, default_b(3)), q3, 15, 7);
  CHECK(good.is_energy);
  CHECK(good.consistent);
  CHECK(good.fitted_k == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(good.max_p_m1 <= 1e-10);
  CHECK(good.q_residual <= 1e-9);
  CHECK(good.c_residual <= 1e-10);

  EnergyEquivalenceReport bad =
      energy_equivalence(randers_change(default_b(3)), q3, 15, 7);
  CHECK_FALSE(bad.is_energy);
  CHECK(bad.consistent);  // none of the three vanish
  CHECK(bad.max_p_m1 > 1e-3);

  // f = Lt with a nonzero one-form: the degenerate q = 0 sub-case
  EnergyEquivalenceReport triv = energy_equivalence(
      custom_change(parse("y1 + 0*y2", 2), default_b(3), Expr{}), q3, 10, 7);
  CHECK(triv.trivial_q);
  CHECK(triv.consistent);

  MetricSpec e2 = euclidean_metric(2);
  CHECK_THROWS_AS(
      (void)energy_equivalence(randers_change(default_b(2)), e2, 5, 7),
      misuse_error);
}

TEST_CASE("flag monotonicity: tightening the threshold never flips fail to pass") {
  MetricSpec q3 = quartic_minkowski_metric(3);
  auto b = const_b({0.4, 0.2, 0.1}, 3);
  BConditionReport loose = b_condition(q3, b, 8, 19, 1e-4);
  BConditionReport tight = b_condition(q3, b, 8, 19, 1e-10);
  REQUIRE(loose.samples.size() == tight.samples.size());
  for (size_t i = 0; i < loose.samples.size(); ++i)
    if (!loose.samples[i].pass) CHECK_FALSE(tight.samples[i].pass);
}

TEST_CASE("consistency sweep over a small catalog") {
  std::vector<double> rc = {1.0, 1.0, 1.0};
  std::vector<SweepPair> pairs;
  pairs.push_back({randers_change(default_b(3)), euclidean_metric(3)});
  pairs.push_back({kropina_change(default_b(3)), riemannian_diag_metric(3, rc)});
  pairs.push_back({generalized_randers_change(0.7, 1.3, default_b(3)),
                   euclidean_metric(3)});
  pairs.push_back({energy_change(2.0, 3.0, default_b(3)),
                   quartic_minkowski_metric(3)});
  pairs.push_back({custom_change(parse("sqrt(y1^2 + y2^2) + 0.1*y2", 2),
                                 default_b(3), Expr{}),
                   euclidean_metric(3)});
  SweepResult res = consistency_sweep(pairs, 6, 2024);
  CHECK(res.checks > 0);
  for (const auto& v : res.violations) {
    INFO(v);
    CHECK(false);
  }
  CHECK(res.violations.empty());
}
