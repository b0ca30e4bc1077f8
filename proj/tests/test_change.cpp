#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/classify.hpp"
#include "finsler/verify.hpp"

using namespace finsler;

namespace {

std::vector<Expr> const_b(std::initializer_list<double> vals, int dim) {
  std::vector<Expr> out;
  int i = 0;
  for (double v : vals) {
    (void)i;
    out.push_back(parse(std::to_string(v), dim));
  }
  return out;
}

Expr sigma_x1(int dim) { return parse("0.1*x1", dim); }

void require_all_pass(const PairVerifyReport& rep) {
  CHECK(rep.samples_used > 0);
  for (const auto& b : rep.blocks) {
    INFO(rep.metric, "/", rep.change, " block ", b.name, " max_rel ", b.max_rel,
         " tol ", b.tol);
    CHECK(b.pass);
  }
}

}  // namespace

TEST_CASE("change scalars at the worked Randers/Euclidean point") {
  MetricSpec euc = euclidean_metric(2);
  ChangeSpec c = randers_change(const_b({0.1, 0.0}, 2));
  std::vector<double> x = {0.0, 0.0};
  std::vector<double> y = {3.0, 4.0};
  ScalarBundle sb = scalars(c, euc, x, y);

  CHECK(sb.beta_val == doctest::Approx(0.3));
  CHECK(sb.f == doctest::Approx(5.3));
  CHECK(sb.p == doctest::Approx(1.06));
  CHECK(sb.q == doctest::Approx(5.3));
  CHECK(sb.q0 == doctest::Approx(0.0));
  CHECK(sb.p0 == doctest::Approx(1.0));
  CHECK(sb.p_m1 == doctest::Approx(0.2));
  CHECK(sb.m2 == doctest::Approx(0.0064));
  CHECK(sb.q_m2 == doctest::Approx(-0.0424));
  CHECK(sb.p_m2 == doctest::Approx(-0.0024));
  CHECK(sb.eps == doctest::Approx(1.191016));
}

TEST_CASE("energy-type f has p_m1 = 0 and p02 = 0 everywhere") {
  MetricSpec q3 = quartic_minkowski_metric(3);
  ChangeSpec c = energy_change(1.0, 1.0, const_b({0.2, 0.1, 0.15}, 3));
  MetricSpec tm = transformed_metric(c, q3);
  auto pts = sample_points(3, tm.domain, 10, 23, SampleBox{});
  for (const auto& pt : pts) {
    ScalarBundle sb = scalars(c, q3, pt.x, pt.y);
    CHECK(std::abs(sb.p_m1) <= 1e-12);
    CHECK(std::abs(sb.p02) <= 1e-12);
  }
}

TEST_CASE("transformed metric evaluates the composite") {
  MetricSpec euc = euclidean_metric(2);

  // identity change
  ChangeSpec ident = conformal_change(parse("0", 2));
  MetricSpec t0 = transformed_metric(ident, euc);
  std::vector<double> x = {0.1, -0.2};
  std::vector<double> y = {3.0, 4.0};
  CHECK(fundamental(t0, x, y).L == doctest::Approx(5.0));

  // constant conformal factor
  ChangeSpec conf = conformal_change(parse("0.35", 2));
  MetricSpec t1 = transformed_metric(conf, euc);
  CHECK(fundamental(t1, x, y).L == doctest::Approx(std::exp(0.35) * 5.0));

  // Kropina substitution
  ChangeSpec kro = kropina_change(const_b({1.0, 0.0}, 2));
  MetricSpec t2 = transformed_metric(kro, euc);
  CHECK(fundamental(t2, x, y).L == doctest::Approx(25.0 / 3.0));

  // conformal-only transformation of the metric tensor: g_bar = e^{2s} g
  ChangeSpec confx = conformal_change(sigma_x1(2));
  MetricSpec t3 = transformed_metric(confx, euc);
  FundamentalBundle fb3 = fundamental(t3, x, y);
  const double s = std::exp(2.0 * 0.1 * x[0]);
  CHECK(fb3.g(0, 0) == doctest::Approx(s).epsilon(1e-12));
  CHECK(fb3.g(0, 1) == doctest::Approx(0.0));
  CHECK(fb3.g(1, 1) == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("v-curvature sign convention pinned by the transformation law") {
  // Riemannian base: the direct v-curvature of the transformed space must
  // match e^s p S + the exchange combination built from H and omega with the
  // S_lijk = C_lkm C^m_ij - C_ljm C^m_ik convention (no global sign flip).
  MetricSpec euc = euclidean_metric(3);
  ChangeSpec c = randers_change(const_b({0.2, 0.1, 0.05}, 3));
  std::vector<double> x = {0.0, 0.0, 0.0};
  std::vector<double> y = {1.0, 0.8, -0.5};
  ChangePoint cp = make_change_point(c, euc, x, y);
  VCurvature vcB = v_curvature(cp.fb);
  SCurvForms sf = closed_form_s(cp, vcB);

  MetricSpec tm = transformed_metric(c, euc);
  FundamentalBundle fbT = fundamental(tm, x, y);
  VCurvature vcT = v_curvature(fbT);
  CHECK(frob(vcT.S4) > 1e-6);  // non-degenerate witness
  CHECK(max_abs_diff(sf.S_bar4, vcT.S4) <= 1e-9 * (1.0 + frob(vcT.S4)));

  Ten4 flipped = sf.S_bar4;
  for (double& v : flipped.a) v = -v;
  CHECK(max_abs_diff(flipped, vcT.S4) > 1e-3);
}

TEST_CASE("closed forms against the jet oracle across families and bases") {
  std::vector<double> rc = {1.0, 1.0, 1.0};
  std::vector<MetricSpec> bases;
  bases.push_back(euclidean_metric(2));
  bases.push_back(euclidean_metric(3));
  bases.push_back(riemannian_diag_metric(2, rc));
  bases.push_back(riemannian_diag_metric(3, rc));
  bases.push_back(quartic_minkowski_metric(2));
  bases.push_back(quartic_minkowski_metric(3));

  auto b_for = [&](int dim) {
    std::vector<Expr> b;
    const char* vals[] = {"0.2", "0.1", "0.15", "0.05", "0.12"};
    for (int i = 0; i < dim; ++i) b.push_back(parse(vals[i], dim));
    return b;
  };

  for (const auto& base : bases) {
    std::vector<ChangeSpec> changes;
    changes.push_back(randers_change(b_for(base.dim)));
    changes.push_back(kropina_change(b_for(base.dim)));
    changes.push_back(energy_change(2.0, 3.0, b_for(base.dim)));
    changes.push_back(generalized_randers_change(0.7, 1.3, b_for(base.dim)));
    changes.push_back(randers_change(b_for(base.dim), sigma_x1(base.dim)));
    changes.push_back(custom_change(parse("sqrt(y1^2 + y2^2) + 0.1*y2", 2),
                                    b_for(base.dim), Expr{}));
    for (const auto& c : changes) {
      PairVerifyReport rep = verify_pair(c, base, 6, 1234);
      require_all_pass(rep);
    }
  }
}

TEST_CASE("identity suite verdicts") {
  MetricSpec euc = euclidean_metric(2);
  ChangeSpec randers = randers_change(const_b({0.1, 0.05}, 2));
  IdentityReport good = identity_suite(randers, euc, 20, 7);
  CHECK(good.pass);
  CHECK(good.worst_trace < 1e-10);

  MetricSpec e3 = euclidean_metric(3);
  ChangeSpec kro = kropina_change(const_b({0.4, 0.2, 0.1}, 3));
  IdentityReport kgood = identity_suite(kro, e3, 20, 7);
  CHECK(kgood.pass);

  // f = Lt + beta^2/Lt + 1 is not 1-homogeneous: the constant breaks it
  ChangeSpec bad = custom_change(parse("y1 + y2^2/y1 + 1", 2),
                                 const_b({0.1, 0.05}, 2), Expr{});
  IdentityReport brep = identity_suite(bad, euc, 10, 7);
  CHECK_FALSE(brep.pass);
  CHECK(!brep.note.empty());
}

TEST_CASE("specialized T-tensor laws") {
  // conformal: T_bar = e^{3s} T on a non-Riemannian base
  MetricSpec q3 = quartic_minkowski_metric(3);
  ChangeSpec conf = conformal_change(sigma_x1(3));
  MetricSpec tconf = transformed_metric(conf, q3);
  std::vector<double> x = {0.4, -0.1, 0.2};
  std::vector<double> y = {1.0, 1.3, -0.7};
  TTensor tB = t_tensor(q3, x, y);
  TTensor tT = t_tensor(tconf, x, y);
  Ten4 law = special_t_conformal(tB, sigma_value(conf, x));
  CHECK(max_abs_diff(law, tT.T4) <= 1e-9 * (1.0 + frob(tT.T4)));

  // misuse guard: the Randers law insists on a Riemannian base
  ChangeSpec randers = randers_change(const_b({0.2, 0.1, 0.05}, 3));
  ChangePoint cp_bad = make_change_point(randers, q3, x, y);
  CHECK_THROWS_AS((void)special_t_randers(cp_bad), misuse_error);

  // beta-conformal reduces to the Randers law when sigma = 0, base Riemannian
  MetricSpec e3 = euclidean_metric(3);
  ChangePoint cp = make_change_point(randers, e3, x, y);
  TTensor tBe = t_tensor(e3, x, y);
  Ten4 theta_form = special_t_beta_conformal(cp, tBe);
  Ten4 theta1_form = special_t_randers(cp);
  CHECK(max_abs_diff(theta_form, theta1_form) <= 1e-12 * (1.0 + frob(theta_form)));
}

TEST_CASE("transformed T-tensor against frozen symbolically derived values") {
  // Kropina over Euclidean R^3, b = (0.2, 0.1, 0.15), y = (1.1, 0.7, -0.8);
  // expected entries computed with an independent computer-algebra
  // differentiation of Lbar^2 = (y1^2+y2^2+y3^2)^2 / (b.y)^2
  MetricSpec e3 = euclidean_metric(3);
  ChangeSpec kro = kropina_change(const_b({0.2, 0.1, 0.15}, 3));
  MetricSpec tm = transformed_metric(kro, e3);
  std::vector<double> x = {0.0, 0.0, 0.0};
  std::vector<double> y = {1.1, 0.7, -0.8};
  TTensor t = t_tensor(tm, x, y);
  ChangePoint cp = make_change_point(kro, e3, x, y);
  Ten4 law = special_t_kropina(cp);

  struct Case {
    int h, i, j, k;
    double expect;
  } cases[] = {
      {0, 0, 0, 0, 1326.18891951066563},
      {0, 1, 2, 0, 401.780140413848864},
      {1, 1, 2, 2, 1047.29730796348044},
      {0, 0, 1, 2, 401.780140413848864},
      {2, 2, 2, 2, 8725.22398018081131},
  };
  for (const auto& c : cases) {
    CHECK(t.T4(c.h, c.i, c.j, c.k) ==
          doctest::Approx(c.expect).epsilon(1e-12));
    CHECK(law(c.h, c.i, c.j, c.k) == doctest::Approx(c.expect).epsilon(1e-12));
  }
}

TEST_CASE("quasi split identity for the transformed Cartan tensor") {
  // C_bar = cyc{Q_bar_ij C_bar_k} + q with the displayed Q_bar and q
  MetricSpec e3 = euclidean_metric(3);
  ChangeSpec c = custom_change(parse("sqrt(y1^2 + y2^2) + 0.1*y2", 2),
                               const_b({0.2, 0.1, 0.15}, 3), Expr{});
  MetricSpec tm = transformed_metric(c, e3);
  auto pts = sample_points(3, tm.domain, 5, 99, SampleBox{});
  for (const auto& pt : pts) {
    ChangePoint cp = make_change_point(c, e3, pt.x, pt.y);
    const ScalarBundle& sb = cp.sb;
    if (std::abs(sb.lambda) < 1e-10) continue;
    FundamentalBundle fbT = fundamental(tm, pt.x, pt.y);
    const int n = 3;
    Mat Q(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        Q(i, j) = (3.0 * sb.e_sigma * sb.p_m1 * cp.fb.h(i, j) +
                   sb.p02 * sb.m_lo[i] * sb.m_lo[j]) /
                  (6.0 * sb.lambda);
    // Riemannian base: q vanishes, so the split is exact with Q_bar alone
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double split = Q(i, j) * fbT.C_lo[k] + Q(j, k) * fbT.C_lo[i] +
                               Q(k, i) * fbT.C_lo[j];
          worst = std::max(worst, std::abs(fbT.C(i, j, k) - split));
        }
    CHECK(worst <= 1e-10 * (1.0 + frob(fbT.C)));
    QuasiSplit qs = quasi_c_split_for_change(c, e3, pt.x, pt.y);
    CHECK(qs.residual_rel.has_value());
    CHECK(*qs.residual_rel <= 1e-10);
  }
}
