#include "finsler/connection.hpp"

#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

std::vector<Jet> invert_jet_matrix(std::vector<Jet> a, int n) {
  if (static_cast<int>(a.size()) != n * n)
    throw config_error("invert_jet_matrix: bad size");
  auto sp = a[0].space();
  std::vector<Jet> inv(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      inv[static_cast<size_t>(i) * n + j] = Jet::constant(sp, i == j ? 1.0 : 0.0);

  auto A = [&](int i, int j) -> Jet& { return a[static_cast<size_t>(i) * n + j]; };
  auto B = [&](int i, int j) -> Jet& { return inv[static_cast<size_t>(i) * n + j]; };

  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(A(col, col).value());
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A(r, col).value()) > best) {
        best = std::abs(A(r, col).value());
        piv = r;
      }
    if (best <= 1e-13)
      throw degenerate_metric_error("singular jet matrix");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(A(piv, j), A(col, j));
        std::swap(B(piv, j), B(col, j));
      }
    const Jet d = A(col, col).reciprocal();
    for (int j = 0; j < n; ++j) {
      A(col, j) = A(col, j) * d;
      B(col, j) = B(col, j) * d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = A(r, col);
      if (f.value() == 0.0) {
        bool zero = true;
        for (double c : f.coeffs()) zero = zero && c == 0.0;
        if (zero) continue;
      }
      for (int j = 0; j < n; ++j) {
        A(r, j) -= f * A(col, j);
        B(r, j) -= f * B(col, j);
      }
    }
  }
  return inv;
}

std::vector<Jet> spray_jets(const MetricSpec& m, std::span<const double> x,
                            std::span<const double> y, int y_order) {
  const int n = m.dim;
  JetPoint pt = seed_point(n, x, y, y_order, true);
  const Jet Ljet = metric_jet(m, pt);
  const Jet L2 = Ljet * Ljet;

  // g as jets (valid to y_order - 2)
  std::vector<Jet> gj(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const Jet di = L2.y_deriv(i);
    for (int j = i; j < n; ++j) {
      Jet v = di.y_deriv(j) * 0.5;
      gj[static_cast<size_t>(i) * n + j] = v;
      if (j != i) gj[static_cast<size_t>(j) * n + i] = v;
    }
  }
  std::vector<Jet> ginv = invert_jet_matrix(std::move(gj), n);

  // A_l = y^k d_k dd_l L^2 - d_l L^2
  std::vector<Jet> dxL2;
  dxL2.reserve(n);
  for (int k = 0; k < n; ++k) dxL2.push_back(L2.x_deriv(k));
  std::vector<Jet> A;
  A.reserve(n);
  for (int l = 0; l < n; ++l) {
    Jet s = pt.y[0] * dxL2[0].y_deriv(l);
    for (int k = 1; k < n; ++k) s += pt.y[k] * dxL2[k].y_deriv(l);
    A.push_back(s - dxL2[l]);
  }

  std::vector<Jet> G;
  G.reserve(n);
  for (int i = 0; i < n; ++i) {
    Jet s = ginv[static_cast<size_t>(i) * n + 0] * A[0];
    for (int l = 1; l < n; ++l) s += ginv[static_cast<size_t>(i) * n + l] * A[l];
    G.push_back(s * 0.25);
  }
  return G;
}

ConnectionBundle spray_connection(const MetricSpec& m, std::span<const double> x,
                                  std::span<const double> y) {
  const int n = m.dim;
  ConnectionBundle cb;
  cb.n = n;

  std::vector<Jet> G = spray_jets(m, x, y, 5);

  std::vector<int> beta(n, 0);
  cb.G.resize(n);
  cb.N = Mat(n);
  cb.G3 = Ten3(n);
  cb.G4 = Ten4(n);
  for (int i = 0; i < n; ++i) {
    cb.G[i] = G[i].value();
    for (int j = 0; j < n; ++j) {
      beta.assign(n, 0);
      beta[j] = 1;
      cb.N(i, j) = G[i].extract_y(beta);
      for (int k = j; k < n; ++k) {
        beta.assign(n, 0);
        beta[j] += 1;
        beta[k] += 1;
        const double v = G[i].extract_y(beta);
        cb.G3(i, j, k) = v;
        cb.G3(i, k, j) = v;
        for (int l = k; l < n; ++l) {
          beta.assign(n, 0);
          beta[j] += 1;
          beta[k] += 1;
          beta[l] += 1;
          const double w = G[i].extract_y(beta);
          cb.G4(i, j, k, l) = w;
          cb.G4(i, j, l, k) = w;
          cb.G4(i, k, j, l) = w;
          cb.G4(i, k, l, j) = w;
          cb.G4(i, l, j, k) = w;
          cb.G4(i, l, k, j) = w;
        }
      }
    }
  }

  // Cartan Christoffel: Gamma^i_jk = (1/2) g^ir (delta_j g_kr + delta_k g_jr
  // - delta_r g_jk), delta_j g_kr = d_j g_kr - 2 N^m_j C_krm.
  JetPoint pt = seed_point(n, x, y, 3, true);
  const Jet Ljet = metric_jet(m, pt);
  const Jet L2 = Ljet * Ljet;
  FundamentalBundle fb = fundamental_from_jet(Ljet, x, y);

  Ten3 dg(n);  // d_j g_kr (x-derivative)
  std::vector<int> alpha(n, 0);
  for (int j = 0; j < n; ++j) {
    alpha.assign(n, 0);
    alpha[j] = 1;
    for (int k = 0; k < n; ++k)
      for (int r = k; r < n; ++r) {
        beta.assign(n, 0);
        beta[k] += 1;
        beta[r] += 1;
        const double v = 0.5 * L2.extract(alpha, beta);
        dg(j, k, r) = v;
        dg(j, r, k) = v;
      }
  }

  Ten3 del(n);  // delta_j g_kr
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int r = 0; r < n; ++r) {
        double s = dg(j, k, r);
        for (int mm = 0; mm < n; ++mm) s -= 2.0 * cb.N(mm, j) * fb.C(k, r, mm);
        del(j, k, r) = s;
      }

  cb.Gamma = Ten3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int r = 0; r < n; ++r)
          s += fb.g_inv(i, r) * (del(j, k, r) + del(k, j, r) - del(r, j, k));
        cb.Gamma(i, j, k) = 0.5 * s;
      }
  return cb;
}

Vec spray_point(const MetricSpec& m, std::span<const double> x,
                std::span<const double> y) {
  const int n = m.dim;
  JetPoint pt = seed_point(n, x, y, 2, true);
  const Jet Ljet = metric_jet(m, pt);
  const Jet L2 = Ljet * Ljet;

  Mat g(n);
  std::vector<int> beta(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      beta.assign(n, 0);
      beta[i] += 1;
      beta[j] += 1;
      const double v = 0.5 * L2.extract_y(beta);
      g(i, j) = v;
      g(j, i) = v;
    }
  const Mat ginv = invert(g).inv;

  std::vector<int> alpha(n, 0);
  Vec A(n, 0.0);
  for (int l = 0; l < n; ++l) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      alpha.assign(n, 0);
      alpha[k] = 1;
      beta.assign(n, 0);
      beta[l] = 1;
      s += y[k] * L2.extract(alpha, beta);
    }
    alpha.assign(n, 0);
    alpha[l] = 1;
    beta.assign(n, 0);
    s -= L2.extract(alpha, beta);
    A[l] = s;
  }

  Vec G(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int l = 0; l < n; ++l) s += ginv(i, l) * A[l];
    G[i] = 0.25 * s;
  }
  return G;
}

OneFormDerivs h_cov_deriv_oneform(const MetricSpec& m,
                                  std::span<const Expr> b_exprs,
                                  std::span<const double> x,
                                  std::span<const double> y) {
  const int n = m.dim;
  if (static_cast<int>(b_exprs.size()) < n)
    throw config_error("one-form needs at least dim coefficient expressions");
  ConnectionBundle cb = spray_connection(m, x, y);

  // b_i and d_j b_i from x jets
  auto sp = jet_space(JetConfig{n, 0, 1, 0});
  std::vector<Jet> xj;
  xj.reserve(n);
  for (int i = 0; i < n; ++i) xj.push_back(Jet::x_var(sp, i, x[i]));
  OneFormDerivs od;
  od.b.resize(n);
  Mat db(n);  // db(i, j) = d_j b_i
  std::vector<int> alpha(n, 0);
  for (int i = 0; i < n; ++i) {
    Jet bi = eval_jet_bound(b_exprs[i], xj, {});
    od.b[i] = bi.value();
    for (int j = 0; j < n; ++j) {
      alpha.assign(n, 0);
      alpha[j] = 1;
      db(i, j) = bi.extract(alpha, {});
    }
  }

  od.b_cov = Mat(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = db(i, j);
      for (int r = 0; r < n; ++r) s -= od.b[r] * cb.Gamma(r, i, j);
      od.b_cov(i, j) = s;
    }

  od.E = Mat(n);
  od.F = Mat(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      od.E(i, j) = 0.5 * (od.b_cov(i, j) + od.b_cov(j, i));
      od.F(i, j) = 0.5 * (od.b_cov(i, j) - od.b_cov(j, i));
    }
  return od;
}

}  // namespace finsler
