#pragma once

#include "finsler/connection.hpp"
#include "finsler/fundamental.hpp"

namespace finsler {

// v-curvature of the Cartan connection, S_lijk = C_lkm C^m_ij - C_ljm C^m_ik,
// with vertical Ricci S_ik = g^lj S_lijk and scalar S = g^ik S_ik. The sign
// and trace conventions are pinned by the transformation-law tests.
struct VCurvature {
  Ten4 S4;     // S_lijk
  Mat S_ric;   // S_ik
  double S_scal = 0.0;
  double assembly_scale = 0.0;  // magnitude of the C*C products
};

VCurvature v_curvature(const FundamentalBundle& fb);

// Vertical Cartan covariant derivative of the Cartan tensor:
// C_hij|_k = dd_k C_hij - C^m_hk C_mij - C^m_ik C_mhj - C^m_jk C_mhi.
Ten4 v_cov_deriv_cartan(const MetricSpec& m, std::span<const double> x,
                        std::span<const double> y);

// T_hijk = L C_hij|_k + C_hij l_k + C_hik l_j + C_hjk l_i + C_ijk l_h,
// T_ij = T_ijhk g^hk, T = g^lj g^ik T_lijk.
struct TTensor {
  Ten4 T4;
  Mat T2;
  double T_scal = 0.0;
  double assembly_scale = 0.0;  // magnitude of the L C| and C l pieces
};

TTensor t_tensor(const MetricSpec& m, std::span<const double> x,
                 std::span<const double> y);
TTensor t_tensor_from(const FundamentalBundle& fb, const Ten4& Cder,
                      const Ten4* Cder_mag = nullptr);

// Douglas tensor D^h_ijk = P^h_ijk + (1/(n+1)) (y^h P_ij|_k
// + delta^h_i P_jk + delta^h_j P_ki + delta^h_k P_ij), with P^h_ijk the
// Berwald hv-curvature dd^3 G^h, P_ij its trace, and |_k the Berwald
// vertical derivative (a plain dd_k on P_ij).
Ten4 douglas(const MetricSpec& m, std::span<const double> x,
             std::span<const double> y);

}  // namespace finsler
