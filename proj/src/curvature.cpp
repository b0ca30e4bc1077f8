#include "finsler/curvature.hpp"

namespace finsler {

VCurvature v_curvature(const FundamentalBundle& fb) {
  const int n = fb.n;
  VCurvature vc;
  vc.S4 = Ten4(n);
  double scale2 = 0.0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          double s = 0.0, mag = 0.0;
          for (int mm = 0; mm < n; ++mm) {
            s += fb.C(l, k, mm) * fb.C_mixed(mm, i, j) -
                 fb.C(l, j, mm) * fb.C_mixed(mm, i, k);
            mag += std::abs(fb.C(l, k, mm) * fb.C_mixed(mm, i, j)) +
                   std::abs(fb.C(l, j, mm) * fb.C_mixed(mm, i, k));
          }
          vc.S4(l, i, j, k) = s;
          vc.S4(l, i, k, j) = -s;
          scale2 += 2.0 * mag * mag;
        }
  vc.assembly_scale = std::sqrt(scale2);

  vc.S_ric = Mat(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) s += fb.g_inv(l, j) * vc.S4(l, i, j, k);
      vc.S_ric(i, k) = s;
    }

  vc.S_scal = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) vc.S_scal += fb.g_inv(i, k) * vc.S_ric(i, k);
  return vc;
}

namespace {

struct CartanVDeriv {
  Ten4 value;
  Ten4 mag;  // per-entry magnitude of the additive pieces
};

// dd_k C_hij = (1/4) dd^4 L^2 and the three C*C corrections
CartanVDeriv cartan_v_deriv_scaled(const FundamentalBundle& fb, const Jet& Ljet) {
  const int n = fb.n;
  const Jet L2 = Ljet * Ljet;
  Ten4 dC(n);
  std::vector<int> beta(n, 0);
  for (int h = 0; h < n; ++h)
    for (int i = h; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k) {
          beta.assign(n, 0);
          beta[h] += 1;
          beta[i] += 1;
          beta[j] += 1;
          beta[k] += 1;
          const double v = 0.25 * L2.extract_y(beta);
          // fill all permutations of the totally symmetric object
          int idx[4] = {h, i, j, k};
          int perm[4] = {0, 1, 2, 3};
          do {
            dC(idx[perm[0]], idx[perm[1]], idx[perm[2]], idx[perm[3]]) = v;
          } while (std::next_permutation(perm, perm + 4));
        }

  CartanVDeriv out;
  out.value = Ten4(n);
  out.mag = Ten4(n);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = dC(h, i, j, k);
          double mag = std::abs(s);
          for (int mm = 0; mm < n; ++mm) {
            const double t = fb.C_mixed(mm, h, k) * fb.C(mm, i, j) +
                             fb.C_mixed(mm, i, k) * fb.C(mm, h, j) +
                             fb.C_mixed(mm, j, k) * fb.C(mm, h, i);
            s -= t;
            mag += std::abs(t);
          }
          out.value(h, i, j, k) = s;
          out.mag(h, i, j, k) = mag;
        }
  return out;
}

}  // namespace

Ten4 v_cov_deriv_cartan(const MetricSpec& m, std::span<const double> x,
                        std::span<const double> y) {
  JetPoint pt = seed_point(m.dim, x, y, 4, false);
  const Jet Ljet = metric_jet(m, pt);
  FundamentalBundle fb = fundamental_from_jet(Ljet, x, y);
  return cartan_v_deriv_scaled(fb, Ljet).value;
}

TTensor t_tensor_from(const FundamentalBundle& fb, const Ten4& Cder,
                      const Ten4* Cder_mag) {
  const int n = fb.n;
  TTensor t;
  t.T4 = Ten4(n);
  double scale2 = 0.0;
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          t.T4(h, i, j, k) = fb.L * Cder(h, i, j, k) + fb.C(h, i, j) * fb.l_lo[k] +
                             fb.C(h, i, k) * fb.l_lo[j] + fb.C(h, j, k) * fb.l_lo[i] +
                             fb.C(i, j, k) * fb.l_lo[h];
          const double base_mag =
              Cder_mag ? (*Cder_mag)(h, i, j, k) : std::abs(Cder(h, i, j, k));
          const double mag = fb.L * base_mag +
                             std::abs(fb.C(h, i, j) * fb.l_lo[k]) +
                             std::abs(fb.C(h, i, k) * fb.l_lo[j]) +
                             std::abs(fb.C(h, j, k) * fb.l_lo[i]) +
                             std::abs(fb.C(i, j, k) * fb.l_lo[h]);
          scale2 += mag * mag;
        }
  t.assembly_scale = std::sqrt(scale2);

  t.T2 = Mat(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int h = 0; h < n; ++h)
        for (int k = 0; k < n; ++k) s += t.T4(i, j, h, k) * fb.g_inv(h, k);
      t.T2(i, j) = s;
    }

  t.T_scal = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.T_scal += fb.g_inv(i, j) * t.T2(i, j);
  return t;
}

TTensor t_tensor(const MetricSpec& m, std::span<const double> x,
                 std::span<const double> y) {
  JetPoint pt = seed_point(m.dim, x, y, 4, false);
  const Jet Ljet = metric_jet(m, pt);
  FundamentalBundle fb = fundamental_from_jet(Ljet, x, y);
  CartanVDeriv cd = cartan_v_deriv_scaled(fb, Ljet);
  return t_tensor_from(fb, cd.value, &cd.mag);
}

Ten4 douglas(const MetricSpec& m, std::span<const double> x,
             std::span<const double> y) {
  const int n = m.dim;
  std::vector<Jet> G = spray_jets(m, x, y, 6);  // valid to y order 4

  std::vector<int> beta(n, 0);
  auto extract4 = [&](int h, int i, int j, int k, int l) {
    beta.assign(n, 0);
    beta[i] += 1;
    beta[j] += 1;
    beta[k] += 1;
    beta[l] += 1;
    return G[h].extract_y(beta);
  };
  auto extract3 = [&](int h, int i, int j, int k) {
    beta.assign(n, 0);
    beta[i] += 1;
    beta[j] += 1;
    beta[k] += 1;
    return G[h].extract_y(beta);
  };

  // P_ij = G^m_ijm,  P_ij|_k = dd_k P_ij (Berwald vertical derivative)
  Mat P(n);
  Ten3 Pd(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int mm = 0; mm < n; ++mm) s += extract3(mm, i, j, mm);
      P(i, j) = s;
      for (int k = 0; k < n; ++k) {
        double sd = 0.0;
        for (int mm = 0; mm < n; ++mm) sd += extract4(mm, i, j, k, mm);
        Pd(i, j, k) = sd;
      }
    }

  // trace part subtracted: D = dd^3 (G^h - N^m_m y^h / (n+1)), which kills
  // the projective class (checked by the flat-spray invariance tests)
  Ten4 D(n);
  const double inv_np1 = 1.0 / (n + 1);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = extract3(h, i, j, k) - inv_np1 * y[h] * Pd(i, j, k);
          if (h == i) s -= inv_np1 * P(j, k);
          if (h == j) s -= inv_np1 * P(k, i);
          if (h == k) s -= inv_np1 * P(i, j);
          D(h, i, j, k) = s;
        }
  return D;
}

}  // namespace finsler
