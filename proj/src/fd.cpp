#include "finsler/fd.hpp"

#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

// Nested first-order central differences over all requested variables at a
// fixed step; each level is O(h^2) accurate.
double nested_central(const ScalarFn& f, std::vector<double>& x,
                      std::vector<double>& y, std::vector<int>& alpha,
                      std::vector<int>& beta, double h) {
  for (size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] > 0) {
      alpha[i] -= 1;
      x[i] += h;
      const double hi = nested_central(f, x, y, alpha, beta, h);
      x[i] -= 2 * h;
      const double lo = nested_central(f, x, y, alpha, beta, h);
      x[i] += h;
      alpha[i] += 1;
      return (hi - lo) / (2 * h);
    }
  }
  for (size_t i = 0; i < beta.size(); ++i) {
    if (beta[i] > 0) {
      beta[i] -= 1;
      y[i] += h;
      const double hi = nested_central(f, x, y, alpha, beta, h);
      y[i] -= 2 * h;
      const double lo = nested_central(f, x, y, alpha, beta, h);
      y[i] += h;
      beta[i] += 1;
      return (hi - lo) / (2 * h);
    }
  }
  return f(x, y);
}

}  // namespace

double fd_oracle(const ScalarFn& f, std::span<const double> x,
                 std::span<const double> y, std::span<const int> alpha,
                 std::span<const int> beta, double step) {
  int total = 0;
  for (int v : alpha) total += v;
  for (int v : beta) total += v;
  if (total > 4) throw config_error("fd_oracle supports total order <= 4");
  if (step <= 0.0) throw config_error("fd_oracle needs a positive step");

  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::vector<int> a(alpha.begin(), alpha.end());
  std::vector<int> b(beta.begin(), beta.end());

  const double full = nested_central(f, xs, ys, a, b, step);
  const double half = nested_central(f, xs, ys, a, b, step / 2);
  // leading error c*h^2 cancels: (4 F(h/2) - F(h)) / 3 is O(h^4)
  return (4.0 * half - full) / 3.0;
}

}  // namespace finsler
