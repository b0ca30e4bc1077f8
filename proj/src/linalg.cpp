#include "finsler/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace finsler {

InverseResult invert(const Mat& m) {
  const int n = m.n;
  Mat lu = m;
  Mat inv(n);
  for (int i = 0; i < n; ++i) inv(i, i) = 1.0;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;

  double scale = 0.0;
  for (double v : m.a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) throw degenerate_metric_error("zero matrix");

  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(lu(col, col));
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(lu(r, col)) > best) {
        best = std::abs(lu(r, col));
        piv = r;
      }
    }
    if (best <= 1e-14 * scale)
      throw degenerate_metric_error("singular matrix in LU factorization");
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(lu(piv, j), lu(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    const double d = lu(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = lu(r, col) / d;
      lu(r, col) = 0.0;
      for (int j = col + 1; j < n; ++j) lu(r, j) -= f * lu(col, j);
      for (int j = 0; j < n; ++j) inv(r, j) -= f * inv(col, j);
    }
  }
  // back substitution
  for (int col = n - 1; col >= 0; --col) {
    const double d = lu(col, col);
    for (int j = 0; j < n; ++j) inv(col, j) /= d;
    for (int r = 0; r < col; ++r) {
      const double f = lu(r, col);
      for (int j = 0; j < n; ++j) inv(r, j) -= f * inv(col, j);
    }
  }

  auto norm_inf = [n](const Mat& a) {
    double r = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += std::abs(a(i, j));
      r = std::max(r, s);
    }
    return r;
  };
  return {inv, norm_inf(m) * norm_inf(inv)};
}

double frob(const Mat& m) {
  double s = 0.0;
  for (double v : m.a) s += v * v;
  return std::sqrt(s);
}
double frob(const Ten3& t) {
  double s = 0.0;
  for (double v : t.a) s += v * v;
  return std::sqrt(s);
}
double frob(const Ten4& t) {
  double s = 0.0;
  for (double v : t.a) s += v * v;
  return std::sqrt(s);
}
double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}
double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace finsler
