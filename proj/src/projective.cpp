#include "finsler/projective.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

BetaDerivatives beta_derivatives(const ChangeSpec& c, const MetricSpec& m,
                                 std::span<const double> x,
                                 std::span<const double> y) {
  const int n = m.dim;
  BetaDerivatives bd;
  OneFormDerivs od = h_cov_deriv_oneform(m, c.b, x, y);
  bd.b_cov = od.b_cov;
  bd.E = od.E;
  bd.F = od.F;
  bd.b = od.b;
  bd.sigma_grad = sigma_gradient(c, x);
  bd.sigma0 = dot(bd.sigma_grad, y);
  bd.E00 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) bd.E00 += bd.E(i, j) * y[i] * y[j];
  bd.F0.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) bd.F0[i] += bd.F(l, i) * y[l];
  return bd;
}

Vec phi(const ChangeSpec& c, const MetricSpec& m, std::span<const double> x,
        std::span<const double> y) {
  const int n = m.dim;
  ChangePoint cp = make_change_point(c, m, x, y);
  BetaDerivatives bd = beta_derivatives(c, m, x, y);
  const ScalarBundle& sb = cp.sb;
  const double L = sb.L;
  Vec out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    out[i] = L * L * sb.e_sigma * sb.p * bd.sigma_grad[i] -
             (sb.p * L * sb.e_sigma * cp.fb.l_lo[i] -
              sb.q0 * sb.beta_val * sb.m_lo[i]) *
                 bd.sigma0 +
             2.0 * sb.q * bd.F0[i] - sb.q0 * bd.E00 * sb.m_lo[i];
  }
  return out;
}

double projective_deviation(const MetricSpec& base, const MetricSpec& transformed,
                            std::span<const double> x, std::span<const double> y) {
  const int n = base.dim;
  Vec G = spray_point(base, x, y);
  Vec Gbar = spray_point(transformed, x, y);
  FundamentalBundle fb = fundamental(base, x, y);

  Vec D(n, 0.0);
  for (int i = 0; i < n; ++i) D[i] = Gbar[i] - G[i];

  auto gdot = [&](const Vec& a, std::span<const double> b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += fb.g(i, j) * a[i] * b[j];
    return s;
  };
  const double proj = gdot(D, y) / gdot(Vec(y.begin(), y.end()), y);
  Vec orth(n, 0.0);
  for (int i = 0; i < n; ++i) orth[i] = D[i] - proj * y[i];
  const double orth_norm = std::sqrt(std::max(0.0, gdot(orth, orth)));
  const double d_norm = std::sqrt(std::max(0.0, gdot(D, D)));
  return orth_norm / (1.0 + d_norm);
}

namespace {

double metric_value(const MetricSpec& m, std::span<const double> x,
                    std::span<const double> y) {
  auto sp = jet_space(JetConfig{0, 0, 0, 0});
  JetPoint pt;
  pt.space = sp;
  for (size_t i = 0; i < x.size(); ++i) pt.x.push_back(Jet::constant(sp, x[i]));
  for (size_t i = 0; i < y.size(); ++i) pt.y.push_back(Jet::constant(sp, y[i]));
  return metric_jet(m, pt).value();
}

}  // namespace

GeodesicPath geodesic(const MetricSpec& m, std::span<const double> x0,
                      std::span<const double> y0, double t_end, int steps) {
  if (steps < 1) throw usage_error("geodesic integration needs steps >= 1");
  const int n = m.dim;
  GeodesicPath path;
  path.step = t_end / steps;
  path.steps = steps;

  Vec x(x0.begin(), x0.end());
  Vec y(y0.begin(), y0.end());
  const double h = path.step;

  auto push = [&](double t) {
    path.t.push_back(t);
    path.x.push_back(x);
    path.y.push_back(y);
  };
  push(0.0);
  path.arc.push_back(0.0);
  double L_prev = metric_value(m, x, y);

  Vec k1x(n), k1y(n), k2x(n), k2y(n), k3x(n), k3y(n), k4x(n), k4y(n), tx(n), ty(n);
  for (int s = 0; s < steps; ++s) {
    try {
      Vec G = spray_point(m, x, y);
      for (int i = 0; i < n; ++i) {
        k1x[i] = y[i];
        k1y[i] = -2.0 * G[i];
      }
      for (int i = 0; i < n; ++i) {
        tx[i] = x[i] + 0.5 * h * k1x[i];
        ty[i] = y[i] + 0.5 * h * k1y[i];
      }
      G = spray_point(m, tx, ty);
      for (int i = 0; i < n; ++i) {
        k2x[i] = ty[i];
        k2y[i] = -2.0 * G[i];
      }
      for (int i = 0; i < n; ++i) {
        tx[i] = x[i] + 0.5 * h * k2x[i];
        ty[i] = y[i] + 0.5 * h * k2y[i];
      }
      G = spray_point(m, tx, ty);
      for (int i = 0; i < n; ++i) {
        k3x[i] = ty[i];
        k3y[i] = -2.0 * G[i];
      }
      for (int i = 0; i < n; ++i) {
        tx[i] = x[i] + h * k3x[i];
        ty[i] = y[i] + h * k3y[i];
      }
      G = spray_point(m, tx, ty);
      for (int i = 0; i < n; ++i) {
        k4x[i] = ty[i];
        k4y[i] = -2.0 * G[i];
      }
      for (int i = 0; i < n; ++i) {
        x[i] += h / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
        y[i] += h / 6.0 * (k1y[i] + 2.0 * k2y[i] + 2.0 * k3y[i] + k4y[i]);
      }
      const double L_here = metric_value(m, x, y);
      push((s + 1) * h);
      path.arc.push_back(path.arc.back() + 0.5 * h * (L_prev + L_here));
      L_prev = L_here;
    } catch (const error&) {
      path.truncated = true;
      break;
    }
  }
  return path;
}

double geodesic_compare(const MetricSpec& base, const MetricSpec& transformed,
                        std::span<const double> x0, std::span<const double> y0,
                        double t_end, int steps) {
  GeodesicPath pb = geodesic(base, x0, y0, t_end, steps);
  GeodesicPath pt = geodesic(transformed, x0, y0, t_end, steps);
  const int n = base.dim;

  // both trajectories measured with the base length so equal arc values mean
  // the same geometric progress
  auto base_arc = [&](const GeodesicPath& p) {
    Vec arc(p.x.size(), 0.0);
    double prev = metric_value(base, p.x[0], p.y[0]);
    for (size_t i = 1; i < p.x.size(); ++i) {
      const double here = metric_value(base, p.x[i], p.y[i]);
      arc[i] = arc[i - 1] + 0.5 * (p.t[i] - p.t[i - 1]) * (prev + here);
      prev = here;
    }
    return arc;
  };
  Vec arc_b = base_arc(pb);
  Vec arc_t = base_arc(pt);
  const double s_max = 0.995 * std::min(arc_b.back(), arc_t.back());
  if (s_max <= 0.0) throw sampling_error("geodesic comparison covers no arc");

  auto interp = [&](const GeodesicPath& p, const Vec& arc, double s, Vec& out) {
    size_t lo = 0, hi = arc.size() - 1;
    while (hi - lo > 1) {
      const size_t mid = (lo + hi) / 2;
      (arc[mid] <= s ? lo : hi) = mid;
    }
    const double w = (s - arc[lo]) / std::max(1e-300, arc[hi] - arc[lo]);
    out.resize(n);
    for (int i = 0; i < n; ++i)
      out[i] = (1.0 - w) * p.x[lo][i] + w * p.x[hi][i];
  };

  double worst = 0.0;
  Vec xb, xt;
  const int probes = 256;
  for (int k = 0; k <= probes; ++k) {
    const double s = s_max * k / probes;
    interp(pb, arc_b, s, xb);
    interp(pt, arc_t, s, xt);
    worst = std::max(worst, max_abs_diff(xb, xt));
  }
  return worst;
}

}  // namespace finsler
