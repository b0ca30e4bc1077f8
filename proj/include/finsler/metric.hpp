#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/jet.hpp"
#include "finsler/linalg.hpp"
#include "finsler/rng.hpp"

namespace finsler {

using DomainFn =
    std::function<bool(std::span<const double>, std::span<const double>)>;
using MetricEval =
    std::function<Jet(std::span<const Jet>, std::span<const Jet>)>;

// A Finsler fundamental function: positively 1-homogeneous in y on its
// domain, evaluable over jets so that every tensor below comes out of one
// code path.
struct MetricSpec {
  int dim = 0;
  std::string label;
  MetricEval L;
  DomainFn domain;
};

MetricSpec euclidean_metric(int n);
MetricSpec quartic_minkowski_metric(int n);
// L = sqrt(sum_i a_i(x) y_i^2), a_1 = 1, a_i = 1 + c_i x_{i-1}^2 for i >= 2.
MetricSpec riemannian_diag_metric(int n, std::span<const double> coeffs);
MetricSpec expression_metric(const std::string& label, int n, const Expr& source);

// Seeded variables shared by one evaluation at a point.
struct JetPoint {
  std::shared_ptr<const JetSpace> space;
  std::vector<Jet> x, y;
};

JetPoint seed_point(int dim, std::span<const double> x, std::span<const double> y,
                    int y_order, bool with_x);

// L as a jet at (x, y); throws domain_error off the metric's domain or when
// L is not positive there.
Jet metric_jet(const MetricSpec& m, const JetPoint& pt);

struct MetricHomogeneityReport {
  bool pass = false;
  double worst = 0.0;
  int samples_used = 0;
};

MetricHomogeneityReport metric_homogeneity(const MetricSpec& m, int samples,
                                           uint64_t seed);

// Sampling parameters for random admissible points: x uniform in a box,
// y uniform on the unit sphere scaled by a radius in [r_lo, r_hi].
struct SampleBox {
  double x_lo = -0.5, x_hi = 0.5;
  double r_lo = 0.5, r_hi = 2.0;
};

struct SamplePoint {
  Vec x, y;
};

// Rejection sampling against `domain`; throws sampling_error when the
// attempt budget is exhausted with no admissible point.
std::vector<SamplePoint> sample_points(int dim, const DomainFn& domain, int count,
                                       uint64_t seed, const SampleBox& box,
                                       int* rejected = nullptr);

}  // namespace finsler
