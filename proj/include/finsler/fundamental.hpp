#pragma once

#include "finsler/linalg.hpp"
#include "finsler/metric.hpp"

namespace finsler {

// Point-local tensors of a Finsler space, all read off the y-jet of L^2:
// g_ij = (1/2) dd_i dd_j L^2, l_i = dd_i L, h_ij = g_ij - l_i l_j,
// C_ijk = (1/4) dd_i dd_j dd_k L^2, traces C_i = C_ijk g^jk and C^2.
struct FundamentalBundle {
  int n = 0;
  double L = 0.0;
  Vec l_lo;      // l_i
  Vec l_hi;      // l^i = y^i / L
  Mat g;
  Mat g_inv;
  double g_cond = 0.0;
  Mat h;
  Ten3 C;        // C_ijk
  Ten3 C_mixed;  // C^i_jk (first index raised)
  Vec C_lo;      // C_i
  Vec C_hi;      // C^i
  double C2 = 0.0;
  Vec x, y;
  Vec y_lo;      // y_i = g_ij y^j
};

FundamentalBundle fundamental(const MetricSpec& m, std::span<const double> x,
                              std::span<const double> y);

// Same bundle from an already evaluated L-jet (y order >= 3).
FundamentalBundle fundamental_from_jet(const Jet& L, std::span<const double> x,
                                       std::span<const double> y);

}  // namespace finsler
