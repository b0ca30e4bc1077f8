#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

using Vec = std::vector<double>;

// Small dense row-major containers; n is the common dimension (2..6 in
// practice, nothing here assumes an upper bound).
struct Mat {
  int n = 0;
  std::vector<double> a;
  Mat() = default;
  explicit Mat(int dim) : n(dim), a(static_cast<size_t>(dim) * dim, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

struct Ten3 {
  int n = 0;
  std::vector<double> a;
  Ten3() = default;
  explicit Ten3(int dim) : n(dim), a(static_cast<size_t>(dim) * dim * dim, 0.0) {}
  double& operator()(int i, int j, int k) {
    return a[(static_cast<size_t>(i) * n + j) * n + k];
  }
  double operator()(int i, int j, int k) const {
    return a[(static_cast<size_t>(i) * n + j) * n + k];
  }
};

struct Ten4 {
  int n = 0;
  std::vector<double> a;
  Ten4() = default;
  explicit Ten4(int dim) : n(dim), a(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}
  double& operator()(int i, int j, int k, int l) {
    return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
  }
};

struct InverseResult {
  Mat inv;
  double cond_inf = 0.0;  // ||A||_inf * ||A^-1||_inf
};

// LU with partial pivoting; throws degenerate_metric_error on a numerically
// singular matrix.
InverseResult invert(const Mat& m);

double frob(const Mat& m);
double frob(const Ten3& t);
double frob(const Ten4& t);
double norm2(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

inline double max_abs_diff(const Mat& a, const Mat& b) {
  double r = 0.0;
  for (size_t i = 0; i < a.a.size(); ++i) r = std::max(r, std::abs(a.a[i] - b.a[i]));
  return r;
}
inline double max_abs_diff(const Ten3& a, const Ten3& b) {
  double r = 0.0;
  for (size_t i = 0; i < a.a.size(); ++i) r = std::max(r, std::abs(a.a[i] - b.a[i]));
  return r;
}
inline double max_abs_diff(const Ten4& a, const Ten4& b) {
  double r = 0.0;
  for (size_t i = 0; i < a.a.size(); ++i) r = std::max(r, std::abs(a.a[i] - b.a[i]));
  return r;
}
inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double r = 0.0;
  for (size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

// Relative residual used throughout the verification suites:
// ||delta|| / (1 + ||scale||).
inline double rel(double delta_norm, double scale_norm) {
  return delta_norm / (1.0 + scale_norm);
}

}  // namespace finsler
