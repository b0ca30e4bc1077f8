#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

// Truncation shape of a jet: n_x position variables kept to first order at
// most, n_y direction variables kept to max_y_order. Dense storage, one
// y-coefficient block per retained x multi-index.
struct JetConfig {
  int n_x = 0;
  int n_y = 0;
  int max_x_order = 0;  // 0 or 1
  int max_y_order = 0;
  friend bool operator==(const JetConfig&, const JetConfig&) = default;
};

// Immutable per-config tables: the y multi-index basis, index lookup, the
// Cauchy-product plan, and factorials for derivative extraction.
class JetSpace {
 public:
  explicit JetSpace(const JetConfig& cfg);

  const JetConfig& config() const { return cfg_; }
  int y_count() const { return y_count_; }
  int block_count() const { return blocks_; }
  int size() const { return blocks_ * y_count_; }

  std::span<const int> y_exponents(int idx) const {
    return {exps_.data() + static_cast<size_t>(idx) * cfg_.n_y,
            static_cast<size_t>(cfg_.n_y)};
  }
  int y_degree(int idx) const { return degree_[idx]; }
  double y_factorial(int idx) const { return factorial_[idx]; }

  // -1 when the multi-index is outside the truncation
  int y_index(std::span<const int> beta) const;

  struct Triple {
    int32_t a, b, c;
  };
  std::span<const Triple> mul_plan() const { return mul_plan_; }

 private:
  JetConfig cfg_;
  int y_count_ = 0;
  int blocks_ = 1;
  std::vector<int> exps_;      // y_count * n_y exponents
  std::vector<int> degree_;    // |beta| per index
  std::vector<double> factorial_;
  std::vector<uint64_t> keys_;      // sorted packed keys
  std::vector<int> key_index_;      // index per sorted key
  std::vector<Triple> mul_plan_;
};

// Shared, cached space per config. Single-threaded construction.
std::shared_ptr<const JetSpace> jet_space(const JetConfig& cfg);

// Truncated multivariate Taylor expansion of a scalar. coeff(alpha, beta) =
// d^{|a|+|b|} f / dx^a dy^b / (a! b!). Arithmetic is exact truncated
// polynomial algebra. x_valid/y_valid track how many derivative orders are
// still exact after differentiation shifts.
class Jet {
 public:
  Jet() = default;

  static Jet constant(std::shared_ptr<const JetSpace> sp, double v);
  // var_id: 0..n_x-1 selects an x variable, n_x..n_x+n_y-1 a y variable
  static Jet variable(std::shared_ptr<const JetSpace> sp, int var_id, double v);
  static Jet x_var(std::shared_ptr<const JetSpace> sp, int i, double v);
  static Jet y_var(std::shared_ptr<const JetSpace> sp, int j, double v);

  const std::shared_ptr<const JetSpace>& space() const { return space_; }
  bool empty() const { return space_ == nullptr; }
  double value() const { return c_[0]; }
  int x_valid() const { return x_valid_; }
  int y_valid() const { return y_valid_; }

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  friend Jet operator+(Jet a, double s);
  friend Jet operator+(double s, Jet a) { return std::move(a) + s; }
  friend Jet operator-(Jet a, double s) { return std::move(a) + (-s); }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s);
  friend Jet operator*(double s, Jet a) { return std::move(a) * s; }
  friend Jet operator/(Jet a, double s) { return std::move(a) * (1.0 / s); }
  friend Jet operator/(double s, const Jet& a);

  // d/dy_k and d/dx_k as jets; validity drops accordingly
  Jet y_deriv(int k) const;
  Jet x_deriv(int k) const;

  // mixed partial derivative (coefficient times factorials)
  double extract(std::span<const int> alpha, std::span<const int> beta) const;
  double extract_y(std::span<const int> beta) const { return extract({}, beta); }

  friend Jet sqrt(const Jet& a);
  friend Jet exp(const Jet& a);
  friend Jet log(const Jet& a);
  friend Jet pow(const Jet& a, double r);
  Jet reciprocal() const;

  std::span<const double> coeffs() const { return c_; }

 private:
  std::shared_ptr<const JetSpace> space_;
  std::vector<double> c_;
  int x_valid_ = 0;
  int y_valid_ = 0;

  Jet(std::shared_ptr<const JetSpace> sp, int xv, int yv);
  // Taylor coefficients g_k = g^(k)(value)/k! composed onto this jet
  Jet compose(std::span<const double> series_coeffs) const;
  friend void check_same_space(const Jet& a, const Jet& b);
};

// Free-function wrappers.
Jet lift_variable(int var_id, double value, const JetConfig& cfg);
double extract(const Jet& j, std::span<const int> alpha, std::span<const int> beta);

}  // namespace finsler
