#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "finsler/fd.hpp"
#include "finsler/jet.hpp"
#include "finsler/rng.hpp"

using namespace finsler;

namespace {

Jet y_seed(std::shared_ptr<const JetSpace> sp, int i, double v) {
  return Jet::y_var(sp, i, v);
}

std::vector<int> bv(std::initializer_list<int> v) { return std::vector<int>(v); }

double max_abs_spread(const Jet& a, const Jet& b) {
  double r = 0.0;
  auto ca = a.coeffs();
  auto cb = b.coeffs();
  for (size_t i = 0; i < ca.size(); ++i) r = std::max(r, std::abs(ca[i] - cb[i]));
  return r;
}

}  // namespace

TEST_CASE("lifted variables carry value and unit seed") {
  auto sp = jet_space(JetConfig{1, 1, 1, 3});
  Jet x = Jet::x_var(sp, 0, 3.0);
  CHECK(x.value() == doctest::Approx(3.0));

  Jet sq = x * x;
  CHECK(sq.extract(bv({1}), bv({0})) == doctest::Approx(6.0));

  Jet y = Jet::y_var(sp, 0, 5.0);
  Jet xy = x * y;
  CHECK(xy.extract(bv({1}), bv({1})) == doctest::Approx(1.0));

  // combined variable ids: 0 = x1, 1 = y1
  Jet via_id = lift_variable(1, 2.0, JetConfig{1, 1, 1, 3});
  CHECK(via_id.value() == doctest::Approx(2.0));
  CHECK_THROWS_AS(lift_variable(7, 0.0, JetConfig{1, 1, 1, 3}), config_error);
}

TEST_CASE("elementary function jets") {
  auto sp = jet_space(JetConfig{0, 1, 0, 4});
  Jet t0 = y_seed(sp, 0, 0.0);
  CHECK(exp(t0).extract_y(bv({4})) == doctest::Approx(1.0));

  Jet t4 = y_seed(sp, 0, 4.0);
  CHECK(sqrt(t4).extract_y(bv({1})) == doctest::Approx(0.25));

  Jet t2 = y_seed(sp, 0, 2.0);
  CHECK((1.0 / t2).extract_y(bv({2})) == doctest::Approx(0.25));

  Jet t5 = y_seed(sp, 0, 5.0);
  Jet cubed = t5 * t5 * t5;
  CHECK(cubed.extract_y(bv({3})) == doctest::Approx(6.0));

  Jet seven = Jet::constant(sp, 7.0);
  CHECK(seven.extract_y(bv({1})) == doctest::Approx(0.0));

  auto sp2 = jet_space(JetConfig{0, 2, 0, 3});
  Jet a = y_seed(sp2, 0, 1.0);
  Jet b = y_seed(sp2, 1, 1.0);
  Jet mono = a * a * b;
  CHECK(mono.extract_y(bv({2, 1})) == doctest::Approx(2.0));

  CHECK(log(exp(t2)).value() == doctest::Approx(2.0));
  CHECK(pow(t2, 3.0).value() == doctest::Approx(8.0));
  CHECK(pow(t2, -2.0).extract_y(bv({1})) == doctest::Approx(-2.0 / 8.0));
  CHECK(pow(t2, 0.5).value() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("domain and configuration errors") {
  auto sp = jet_space(JetConfig{0, 1, 0, 3});
  Jet zero = Jet::constant(sp, 0.0);
  Jet neg = Jet::constant(sp, -1.0);
  CHECK_THROWS_AS((void)(1.0 / zero), singular_error);
  CHECK_THROWS_AS((void)sqrt(neg), domain_error);
  CHECK_THROWS_AS((void)log(zero), domain_error);
  CHECK_THROWS_AS((void)pow(neg, 0.5), domain_error);

  Jet t = y_seed(sp, 0, 1.0);
  CHECK_THROWS_AS((void)t.extract_y(bv({4})), config_error);
  CHECK_THROWS_AS((void)Jet::y_var(sp, 2, 1.0), config_error);

  // negative value slot with integer exponent is fine
  CHECK(pow(neg, 4.0).value() == doctest::Approx(1.0));

  CHECK_THROWS_AS(JetSpace(JetConfig{0, 1, 2, 3}), config_error);
}

TEST_CASE("polynomial arithmetic is exact and lawful") {
  auto sp = jet_space(JetConfig{0, 3, 0, 5});
  Rng rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    Jet a = y_seed(sp, 0, rng.uniform(0.5, 2.0)) * rng.uniform(-2, 2) +
            y_seed(sp, 1, rng.uniform(0.5, 2.0)) * y_seed(sp, 2, rng.uniform(0.5, 2.0));
    Jet b = y_seed(sp, 2, rng.uniform(0.5, 2.0)) + rng.uniform(0.1, 1.0);
    Jet c = y_seed(sp, 1, rng.uniform(0.5, 2.0)) * rng.uniform(-1, 1) + 2.0;

    Jet ab = a * b;
    Jet ba = b * a;
    CHECK(max_abs_spread(ab, ba) <= 1e-12);

    Jet abc1 = (a * b) * c;
    Jet abc2 = a * (b * c);
    CHECK(max_abs_spread(abc1, abc2) <= 1e-12 * (1.0 + std::abs(abc1.value())));

    Jet inv = b.reciprocal();
    Jet one = b * inv;
    double worst = 0.0;
    auto co = one.coeffs();
    for (size_t i = 0; i < co.size(); ++i)
      worst = std::max(worst, std::abs(co[i] - (i == 0 ? 1.0 : 0.0)));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("finite-difference oracle on closed forms") {
  ScalarFn norm2d = [](std::span<const double>, std::span<const double> y) {
    return std::sqrt(y[0] * y[0] + y[1] * y[1]);
  };
  std::vector<double> x0;
  std::vector<double> y0 = {3.0, 4.0};
  CHECK(fd_oracle(norm2d, x0, y0, {}, bv({1, 0}), 1e-2) ==
        doctest::Approx(0.6).epsilon(1e-8));

  ScalarFn prod = [](std::span<const double>, std::span<const double> y) {
    return y[0] * y[1];
  };
  CHECK(fd_oracle(prod, x0, y0, {}, bv({1, 1}), 1e-2) ==
        doctest::Approx(1.0).epsilon(1e-8));

  std::vector<int> a5 = {5, 0};
  CHECK_THROWS_AS((void)fd_oracle(prod, x0, y0, {}, a5, 1e-2), config_error);
}

TEST_CASE("jet derivatives match the finite-difference oracle") {
  // quartic norm, all y multi-indices of order <= 3 within 1e-6
  ScalarFn quartic = [](std::span<const double>, std::span<const double> y) {
    return std::pow(y[0] * y[0] * y[0] * y[0] + y[1] * y[1] * y[1] * y[1], 0.25);
  };
  auto sp = jet_space(JetConfig{0, 2, 0, 3});
  std::vector<double> x0;
  std::vector<double> y0 = {1.0, 1.4};
  Jet j = pow(pow(Jet::y_var(sp, 0, y0[0]), 4.0) + pow(Jet::y_var(sp, 1, y0[1]), 4.0),
              0.25);
  for (int b0 = 0; b0 <= 3; ++b0)
    for (int b1 = 0; b0 + b1 <= 3; ++b1) {
      std::vector<int> beta = {b0, b1};
      const double jv = j.extract_y(beta);
      const double fv = fd_oracle(quartic, x0, y0, {}, beta, 2e-2);
      CHECK(std::abs(jv - fv) <= 1e-6 * (1.0 + std::abs(jv)));
    }
}

TEST_CASE("built-in smooth suite: jets vs oracle to order 4") {
  struct Case {
    ScalarFn f;
    std::function<Jet(std::span<const Jet>, std::span<const Jet>)> jf;
  };
  std::vector<Case> suite;
  suite.push_back({[](std::span<const double> x, std::span<const double> y) {
                     return std::exp(0.3 * x[0]) * std::sqrt(y[0] * y[0] + 2 * y[1] * y[1]);
                   },
                   [](std::span<const Jet> x, std::span<const Jet> y) {
                     return exp(0.3 * x[0]) * sqrt(y[0] * y[0] + 2.0 * y[1] * y[1]);
                   }});
  suite.push_back({[](std::span<const double> x, std::span<const double> y) {
                     return (y[0] * y[0] + x[1] * y[1] * y[1]) / (y[0] + 3 * y[1]);
                   },
                   [](std::span<const Jet> x, std::span<const Jet> y) {
                     return (y[0] * y[0] + x[1] * y[1] * y[1]) / (y[0] + 3.0 * y[1]);
                   }});
  suite.push_back({[](std::span<const double> x, std::span<const double> y) {
                     return std::log(1.5 + x[0] * x[0] + y[0] * y[0] + y[1] * y[1]);
                   },
                   [](std::span<const Jet> x, std::span<const Jet> y) {
                     return log(1.5 + x[0] * x[0] + y[0] * y[0] + y[1] * y[1]);
                   }});

  auto sp = jet_space(JetConfig{2, 2, 1, 4});
  std::vector<double> x0 = {0.4, -0.2};
  std::vector<double> y0 = {1.1, 0.7};
  std::vector<Jet> xj = {Jet::x_var(sp, 0, x0[0]), Jet::x_var(sp, 1, x0[1])};
  std::vector<Jet> yj = {Jet::y_var(sp, 0, y0[0]), Jet::y_var(sp, 1, y0[1])};

  for (const auto& cse : suite) {
    Jet j = cse.jf(xj, yj);
    for (int a0 = 0; a0 <= 1; ++a0)
      for (int a1 = 0; a0 + a1 <= 1; ++a1)
        for (int b0 = 0; b0 <= 4; ++b0)
          for (int b1 = 0; b0 + b1 <= 4; ++b1) {
            if (a0 + a1 + b0 + b1 > 4 || b0 + b1 > 4) continue;
            std::vector<int> alpha = {a0, a1};
            std::vector<int> beta = {b0, b1};
            const double jv = j.extract(alpha, beta);
            const double fv = fd_oracle(cse.f, x0, y0, alpha, beta, 2e-2);
            CHECK(std::abs(jv - fv) <= 1e-5 * (1.0 + std::abs(jv)));
          }
  }
}
