#include "finsler/fundamental.hpp"

#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

FundamentalBundle fundamental_from_jet(const Jet& Ljet, std::span<const double> x,
                                       std::span<const double> y) {
  const int n = Ljet.space()->config().n_y;
  FundamentalBundle fb;
  fb.n = n;
  fb.x.assign(x.begin(), x.end());
  fb.y.assign(y.begin(), y.end());
  fb.L = Ljet.value();
  if (!(fb.L > 0.0))
    throw domain_error("fundamental function not positive at the sample point");

  const Jet L2 = Ljet * Ljet;
  std::vector<int> beta(n, 0);

  fb.l_lo.resize(n);
  fb.l_hi.resize(n);
  for (int i = 0; i < n; ++i) {
    beta.assign(n, 0);
    beta[i] = 1;
    fb.l_lo[i] = Ljet.extract_y(beta);
    fb.l_hi[i] = y[i] / fb.L;
  }

  fb.g = Mat(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      beta.assign(n, 0);
      beta[i] += 1;
      beta[j] += 1;
      const double v = 0.5 * L2.extract_y(beta);
      fb.g(i, j) = v;
      fb.g(j, i) = v;
    }

  auto inv = invert(fb.g);
  fb.g_inv = inv.inv;
  fb.g_cond = inv.cond_inf;

  fb.h = Mat(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) fb.h(i, j) = fb.g(i, j) - fb.l_lo[i] * fb.l_lo[j];

  fb.C = Ten3(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        beta.assign(n, 0);
        beta[i] += 1;
        beta[j] += 1;
        beta[k] += 1;
        const double v = 0.25 * L2.extract_y(beta);
        fb.C(i, j, k) = v;
        fb.C(i, k, j) = v;
        fb.C(j, i, k) = v;
        fb.C(j, k, i) = v;
        fb.C(k, i, j) = v;
        fb.C(k, j, i) = v;
      }

  fb.C_mixed = Ten3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int r = 0; r < n; ++r) s += fb.g_inv(i, r) * fb.C(r, j, k);
        fb.C_mixed(i, j, k) = s;
      }

  fb.C_lo.assign(n, 0.0);
  fb.C_hi.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += fb.C(i, j, k) * fb.g_inv(j, k);
    fb.C_lo[i] = s;
  }
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int r = 0; r < n; ++r) s += fb.g_inv(i, r) * fb.C_lo[r];
    fb.C_hi[i] = s;
  }
  fb.C2 = dot(fb.C_hi, fb.C_lo);

  fb.y_lo.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += fb.g(i, j) * y[j];
    fb.y_lo[i] = s;
  }
  return fb;
}

FundamentalBundle fundamental(const MetricSpec& m, std::span<const double> x,
                              std::span<const double> y) {
  JetPoint pt = seed_point(m.dim, x, y, 3, false);
  return fundamental_from_jet(metric_jet(m, pt), x, y);
}

}  // namespace finsler
