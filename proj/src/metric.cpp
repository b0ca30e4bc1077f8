#include "finsler/metric.hpp"

#include <cmath>

#include "finsler/errors.hpp"
#include "finsler/linalg.hpp"

namespace finsler {

MetricSpec euclidean_metric(int n) {
  MetricSpec m;
  m.dim = n;
  m.label = "euclid" + std::to_string(n);
  m.L = [](std::span<const Jet> /*x*/, std::span<const Jet> y) {
    Jet s = y[0] * y[0];
    for (size_t i = 1; i < y.size(); ++i) s += y[i] * y[i];
    return sqrt(s);
  };
  m.domain = [](std::span<const double>, std::span<const double> y) {
    return norm2(y) > 1e-9;
  };
  return m;
}

MetricSpec quartic_minkowski_metric(int n) {
  MetricSpec m;
  m.dim = n;
  m.label = "quartic" + std::to_string(n);
  m.L = [](std::span<const Jet> /*x*/, std::span<const Jet> y) {
    Jet s = y[0] * y[0] * y[0] * y[0];
    for (size_t i = 1; i < y.size(); ++i) s += y[i] * y[i] * y[i] * y[i];
    return pow(s, 0.25);
  };
  // the metric tensor degenerates on the coordinate hyperplanes; the chart
  // stays away from them
  m.domain = [](std::span<const double>, std::span<const double> y) {
    const double r = norm2(y);
    if (r <= 1e-9) return false;
    double ymin = std::abs(y[0]);
    for (double v : y) ymin = std::min(ymin, std::abs(v));
    return ymin > 0.05 * r;
  };
  return m;
}

MetricSpec riemannian_diag_metric(int n, std::span<const double> coeffs) {
  MetricSpec m;
  m.dim = n;
  m.label = "riem" + std::to_string(n);
  std::vector<double> c(coeffs.begin(), coeffs.end());
  c.resize(static_cast<size_t>(n), 1.0);
  m.L = [c](std::span<const Jet> x, std::span<const Jet> y) {
    Jet s = y[0] * y[0];
    for (size_t i = 1; i < y.size(); ++i) {
      Jet ai = x.empty() ? Jet::constant(y[i].space(), 1.0)
                         : 1.0 + c[i] * x[i - 1] * x[i - 1];
      s += ai * y[i] * y[i];
    }
    return sqrt(s);
  };
  m.domain = [](std::span<const double>, std::span<const double> y) {
    return norm2(y) > 1e-9;
  };
  return m;
}

MetricSpec expression_metric(const std::string& label, int n, const Expr& source) {
  MetricSpec m;
  m.dim = n;
  m.label = label;
  Expr e = source;
  m.L = [e](std::span<const Jet> x, std::span<const Jet> y) {
    return eval_jet_bound(e, x, y);
  };
  m.domain = [e, n](std::span<const double> x, std::span<const double> y) {
    if (norm2(y) <= 1e-9) return false;
    try {
      std::vector<double> xv(x.begin(), x.end());
      xv.resize(static_cast<size_t>(n), 0.0);
      return eval_scalar(e, xv, y) > 0.0;
    } catch (const error&) {
      return false;
    }
  };
  return m;
}

JetPoint seed_point(int dim, std::span<const double> x, std::span<const double> y,
                    int y_order, bool with_x) {
  JetConfig cfg{with_x ? dim : 0, dim, with_x ? 1 : 0, y_order};
  JetPoint pt;
  pt.space = jet_space(cfg);
  pt.x.reserve(dim);
  pt.y.reserve(dim);
  for (int i = 0; i < dim; ++i) {
    const double xv = i < static_cast<int>(x.size()) ? x[i] : 0.0;
    pt.x.push_back(with_x ? Jet::x_var(pt.space, i, xv)
                          : Jet::constant(pt.space, xv));
    pt.y.push_back(Jet::y_var(pt.space, i, y[i]));
  }
  return pt;
}

Jet metric_jet(const MetricSpec& m, const JetPoint& pt) {
  std::vector<double> xv(m.dim), yv(m.dim);
  for (int i = 0; i < m.dim; ++i) {
    xv[i] = pt.x[i].value();
    yv[i] = pt.y[i].value();
  }
  if (m.domain && !m.domain(xv, yv))
    throw domain_error("point outside the metric domain");
  Jet L = m.L(pt.x, pt.y);
  if (!(L.value() > 0.0))
    throw domain_error("fundamental function not positive at the sample point");
  return L;
}

MetricHomogeneityReport metric_homogeneity(const MetricSpec& m, int samples,
                                           uint64_t seed) {
  MetricHomogeneityReport rep;
  Rng rng(seed);
  const double scales[] = {0.5, 2.0, 3.0};
  int attempts = 0;
  while (rep.samples_used < samples && attempts < 50 * samples + 100) {
    ++attempts;
    std::vector<double> x(m.dim), y(m.dim);
    for (double& v : x) v = rng.uniform(-0.5, 0.5);
    rng.unit_vector(y);
    const double r = rng.uniform(0.5, 2.0);
    for (double& v : y) v *= r;
    try {
      auto sp = jet_space(JetConfig{0, m.dim, 0, 0});
      auto eval = [&](std::span<const double> yy) {
        JetPoint pt;
        pt.space = sp;
        for (int i = 0; i < m.dim; ++i) {
          pt.x.push_back(Jet::constant(sp, x[i]));
          pt.y.push_back(Jet::constant(sp, yy[i]));
        }
        return metric_jet(m, pt).value();
      };
      const double base = eval(y);
      for (double t : scales) {
        std::vector<double> ty(y);
        for (double& v : ty) v *= t;
        const double expected = t * base;
        const double got = eval(ty);
        rep.worst = std::max(rep.worst,
                             std::abs(got - expected) / (1.0 + std::abs(expected)));
      }
      ++rep.samples_used;
    } catch (const error&) {
      continue;
    }
  }
  rep.pass = rep.samples_used > 0 && rep.worst <= 1e-9;
  return rep;
}

std::vector<SamplePoint> sample_points(int dim, const DomainFn& domain, int count,
                                       uint64_t seed, const SampleBox& box,
                                       int* rejected) {
  Rng rng(seed);
  std::vector<SamplePoint> out;
  int rej = 0;
  int attempts = 0;
  const int budget = 200 * count + 1000;
  while (static_cast<int>(out.size()) < count && attempts < budget) {
    ++attempts;
    SamplePoint p;
    p.x.resize(dim);
    p.y.resize(dim);
    for (double& v : p.x) v = rng.uniform(box.x_lo, box.x_hi);
    rng.unit_vector(p.y);
    const double r = rng.uniform(box.r_lo, box.r_hi);
    for (double& v : p.y) v *= r;
    if (domain && !domain(p.x, p.y)) {
      ++rej;
      continue;
    }
    out.push_back(std::move(p));
  }
  if (rejected) *rejected = rej;
  if (out.empty()) throw sampling_error("no admissible sample points found");
  return out;
}

}  // namespace finsler
