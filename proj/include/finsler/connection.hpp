#pragma once

#include "finsler/expr.hpp"
#include "finsler/fundamental.hpp"

namespace finsler {

// Spray and connection data of one space at a point. The spray is
// G^i = (1/4) g^il (y^k d_k dd_l L^2 - d_l L^2); everything else is obtained
// by y-differentiating the spray jet: N^i_j = dd_j G^i, Berwald
// G^i_jk = dd_k N^i_j and G^h_ijk = dd_k G^h_ij. Gamma holds the Cartan
// Christoffel symbols built from delta_i = d_i - N^r_i dd_r.
struct ConnectionBundle {
  int n = 0;
  Vec G;
  Mat N;
  Ten3 G3;     // G^i_jk
  Ten4 G4;     // G^h_ijk
  Ten3 Gamma;  // Cartan Gamma^i_jk
};

ConnectionBundle spray_connection(const MetricSpec& m, std::span<const double> x,
                                  std::span<const double> y);

// Spray values only; cheap path for geodesic integration.
Vec spray_point(const MetricSpec& m, std::span<const double> x,
                std::span<const double> y);

// Horizontal (Cartan) covariant derivative of a one-form b_i(x):
// b_{i|j} = d_j b_i - b_r Gamma^r_ij, split into symmetric and antisymmetric
// parts E and F.
struct OneFormDerivs {
  Mat b_cov;  // b_{i|j}
  Mat E;      // (b_{i|j} + b_{j|i}) / 2
  Mat F;      // (b_{i|j} - b_{j|i}) / 2
  Vec b;      // b_i at x
};

OneFormDerivs h_cov_deriv_oneform(const MetricSpec& m,
                                  std::span<const Expr> b_exprs,
                                  std::span<const double> x,
                                  std::span<const double> y);

// Spray of a metric as jets in y (for Douglas-type derivatives); the
// returned jets are valid to y order (jet order of L) - 2.
std::vector<Jet> spray_jets(const MetricSpec& m, std::span<const double> x,
                            std::span<const double> y, int y_order);

// Gauss-Jordan inverse of a matrix of jets (value-slot pivoting).
std::vector<Jet> invert_jet_matrix(std::vector<Jet> a, int n);

}  // namespace finsler
