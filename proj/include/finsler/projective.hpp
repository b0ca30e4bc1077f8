#pragma once

#include "finsler/change.hpp"
#include "finsler/connection.hpp"

namespace finsler {

// Derivatives of the change data used by the geodesic criterion. The
// covariant derivative of b is taken with the base space's Cartan
// connection.
struct BetaDerivatives {
  Mat b_cov, E, F;
  Vec b;
  Vec sigma_grad;
  double sigma0 = 0;  // sigma_i y^i
  double E00 = 0;     // E_ij y^i y^j
  Vec F0;             // F_0i = F_li y^l
};

BetaDerivatives beta_derivatives(const ChangeSpec& c, const MetricSpec& m,
                                 std::span<const double> x,
                                 std::span<const double> y);

// phi_i = L^2 e^s p s_i - (p L e^s l_i - q0 beta m_i) s_0 + 2 q F_0i
//         - q0 E_00 m_i ; the change is projective iff phi vanishes.
Vec phi(const ChangeSpec& c, const MetricSpec& m, std::span<const double> x,
        std::span<const double> y);

// Independent spray-based criterion: the change is projective iff the spray
// difference D = G_bar - G is collinear with y. Returns the g-norm of the
// component of D orthogonal to y, relative to 1 + |D|_g.
double projective_deviation(const MetricSpec& base, const MetricSpec& transformed,
                            std::span<const double> x, std::span<const double> y);

struct GeodesicPath {
  std::vector<double> t;
  std::vector<Vec> x, y;
  Vec arc;             // cumulative L-length
  double step = 0;
  int steps = 0;
  bool truncated = false;
};

// Classical fixed-step RK4 on dx/dt = y, dy/dt = -2 G(x, y).
GeodesicPath geodesic(const MetricSpec& m, std::span<const double> x0,
                      std::span<const double> y0, double t_end, int steps);

// Integrates both spaces from the same initial condition, reparametrizes
// both trajectories by base arc length, and returns the maximum coordinate
// deviation over the common covered range.
double geodesic_compare(const MetricSpec& base, const MetricSpec& transformed,
                        std::span<const double> x0, std::span<const double> y0,
                        double t_end, int steps);

}  // namespace finsler
