#include "finsler/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace finsler {

namespace {

uint64_t pack_key(std::span<const int> beta) {
  uint64_t k = 0;
  for (size_t i = 0; i < beta.size(); ++i) k |= static_cast<uint64_t>(beta[i]) << (4 * i);
  return k;
}

void enumerate_rec(int pos, int nvars, int remaining, std::vector<int>& cur,
                   std::vector<int>& out) {
  if (pos == nvars - 1) {
    cur[pos] = remaining;
    out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[pos] = k;
    enumerate_rec(pos + 1, nvars, remaining - k, cur, out);
  }
}

}  // namespace

JetSpace::JetSpace(const JetConfig& cfg) : cfg_(cfg) {
  if (cfg.n_x < 0 || cfg.n_y < 0 || cfg.max_y_order < 0)
    throw config_error("negative jet configuration field");
  if (cfg.max_x_order < 0 || cfg.max_x_order > 1)
    throw config_error("x-orders above 1 are not supported");
  if (cfg.n_y > 15 || cfg.n_x > 15 || cfg.max_y_order > 15)
    throw config_error("jet configuration too large");

  // y multi-indices in graded order, degree 0 first
  if (cfg.n_y == 0) {
    exps_ = {};
    y_count_ = 1;
    degree_ = {0};
    factorial_ = {1.0};
    keys_ = {0};
    key_index_ = {0};
  } else {
    std::vector<int> cur(cfg.n_y, 0);
    for (int d = 0; d <= cfg.max_y_order; ++d)
      enumerate_rec(0, cfg.n_y, d, cur, exps_);
    y_count_ = static_cast<int>(exps_.size()) / cfg.n_y;
    degree_.resize(y_count_);
    factorial_.resize(y_count_);
    std::vector<std::pair<uint64_t, int>> kv(y_count_);
    for (int i = 0; i < y_count_; ++i) {
      auto e = y_exponents(i);
      int deg = 0;
      double fact = 1.0;
      for (int v : e) {
        deg += v;
        for (int t = 2; t <= v; ++t) fact *= t;
      }
      degree_[i] = deg;
      factorial_[i] = fact;
      kv[i] = {pack_key(e), i};
    }
    std::sort(kv.begin(), kv.end());
    keys_.resize(y_count_);
    key_index_.resize(y_count_);
    for (int i = 0; i < y_count_; ++i) {
      keys_[i] = kv[i].first;
      key_index_[i] = kv[i].second;
    }
  }

  blocks_ = 1 + (cfg.max_x_order >= 1 ? cfg.n_x : 0);

  // Cauchy product plan over the y block
  std::vector<int> sum(cfg.n_y);
  for (int ia = 0; ia < y_count_; ++ia) {
    const int da = degree_[ia];
    auto ea = y_exponents(ia);
    for (int ib = 0; ib < y_count_; ++ib) {
      if (da + degree_[ib] > cfg.max_y_order) continue;
      auto eb = y_exponents(ib);
      for (int v = 0; v < cfg.n_y; ++v) sum[v] = ea[v] + eb[v];
      const int ic = y_index(sum);
      mul_plan_.push_back({ia, ib, ic});
    }
  }
}

int JetSpace::y_index(std::span<const int> beta) const {
  if (static_cast<int>(beta.size()) != cfg_.n_y) return -1;
  int deg = 0;
  for (int v : beta) {
    if (v < 0) return -1;
    deg += v;
  }
  if (deg > cfg_.max_y_order) return -1;
  const uint64_t key = pack_key(beta);
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) return -1;
  return key_index_[it - keys_.begin()];
}

std::shared_ptr<const JetSpace> jet_space(const JetConfig& cfg) {
  // jets themselves are immutable values; this cache is the only shared
  // state, so evaluation stays safe across threads
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int>, std::shared_ptr<const JetSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(cfg.n_x, cfg.n_y, cfg.max_x_order, cfg.max_y_order);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto sp = std::make_shared<const JetSpace>(cfg);
  cache.emplace(key, sp);
  return sp;
}

Jet::Jet(std::shared_ptr<const JetSpace> sp, int xv, int yv)
    : space_(std::move(sp)),
      c_(space_->size(), 0.0),
      x_valid_(xv),
      y_valid_(yv) {}

Jet Jet::constant(std::shared_ptr<const JetSpace> sp, double v) {
  Jet j(sp, sp->config().max_x_order, sp->config().max_y_order);
  j.c_[0] = v;
  return j;
}

Jet Jet::x_var(std::shared_ptr<const JetSpace> sp, int i, double v) {
  const auto& cfg = sp->config();
  if (i < 0 || i >= cfg.n_x || cfg.max_x_order < 1)
    throw config_error("x variable index out of range");
  Jet j = constant(sp, v);
  j.c_[static_cast<size_t>(1 + i) * sp->y_count()] = 1.0;
  return j;
}

Jet Jet::y_var(std::shared_ptr<const JetSpace> sp, int jdx, double v) {
  const auto& cfg = sp->config();
  if (jdx < 0 || jdx >= cfg.n_y || cfg.max_y_order < 1)
    throw config_error("y variable index out of range");
  Jet j = constant(sp, v);
  std::vector<int> e(cfg.n_y, 0);
  e[jdx] = 1;
  j.c_[sp->y_index(e)] = 1.0;
  return j;
}

Jet Jet::variable(std::shared_ptr<const JetSpace> sp, int var_id, double v) {
  const auto& cfg = sp->config();
  if (var_id < 0 || var_id >= cfg.n_x + cfg.n_y)
    throw config_error("variable id out of range");
  return var_id < cfg.n_x ? x_var(sp, var_id, v) : y_var(sp, var_id - cfg.n_x, v);
}

void check_same_space(const Jet& a, const Jet& b) {
  if (a.space_ == nullptr || b.space_ == nullptr)
    throw config_error("operation on an empty jet");
  if (a.space_ != b.space_ && !(a.space_->config() == b.space_->config()))
    throw config_error("jet configs do not match");
}

Jet Jet::operator-() const {
  Jet r = *this;
  for (double& v : r.c_) v = -v;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  check_same_space(*this, o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  x_valid_ = std::min(x_valid_, o.x_valid_);
  y_valid_ = std::min(y_valid_, o.y_valid_);
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_same_space(*this, o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  x_valid_ = std::min(x_valid_, o.x_valid_);
  y_valid_ = std::min(y_valid_, o.y_valid_);
  return *this;
}

Jet operator+(Jet a, double s) {
  a.c_[0] += s;
  return a;
}

Jet operator*(Jet a, double s) {
  for (double& v : a.c_) v *= s;
  return a;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_same_space(a, b);
  const JetSpace& sp = *a.space_;
  Jet r(a.space_, std::min(a.x_valid_, b.x_valid_), std::min(a.y_valid_, b.y_valid_));
  const int yc = sp.y_count();
  const double* pa = a.c_.data();
  const double* pb = b.c_.data();
  double* pr = r.c_.data();
  for (auto [ia, ib, ic] : sp.mul_plan()) pr[ic] += pa[ia] * pb[ib];
  // first-order x blocks: (a*b)_k = a0*b_k + a_k*b0
  for (int blk = 1; blk < sp.block_count(); ++blk) {
    const double* pak = pa + static_cast<size_t>(blk) * yc;
    const double* pbk = pb + static_cast<size_t>(blk) * yc;
    double* prk = pr + static_cast<size_t>(blk) * yc;
    for (auto [ia, ib, ic] : sp.mul_plan())
      prk[ic] += pa[ia] * pbk[ib] + pak[ia] * pb[ib];
  }
  return r;
}

Jet Jet::compose(std::span<const double> series) const {
  // Horner evaluation of sum_k series[k] * w^k, w = this with value removed
  Jet w = *this;
  w.c_[0] = 0.0;
  Jet r = Jet::constant(space_, series.empty() ? 0.0 : series.back());
  r.x_valid_ = x_valid_;
  r.y_valid_ = y_valid_;
  for (int k = static_cast<int>(series.size()) - 2; k >= 0; --k) {
    r = r * w;
    r.c_[0] += series[k];
  }
  return r;
}

Jet Jet::reciprocal() const {
  if (space_ == nullptr) throw config_error("operation on an empty jet");
  const double v = value();
  if (v == 0.0) throw singular_error("division by a jet with zero value slot");
  const int K = x_valid_ + y_valid_;
  std::vector<double> s(K + 1);
  double p = 1.0 / v;
  for (int k = 0; k <= K; ++k) {
    s[k] = (k % 2 == 0) ? p : -p;
    p /= v;
  }
  return compose(s);
}

Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }

Jet operator/(double s, const Jet& a) { return a.reciprocal() * s; }

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

Jet exp(const Jet& a) {
  if (a.space_ == nullptr) throw config_error("operation on an empty jet");
  const int K = a.x_valid_ + a.y_valid_;
  std::vector<double> s(K + 1);
  const double e = std::exp(a.value());
  double f = 1.0;
  for (int k = 0; k <= K; ++k) {
    s[k] = e / f;
    f *= (k + 1);
  }
  return a.compose(s);
}

Jet log(const Jet& a) {
  if (a.space_ == nullptr) throw config_error("operation on an empty jet");
  const double v = a.value();
  if (v <= 0.0) throw domain_error("log of a jet with nonpositive value slot");
  const int K = a.x_valid_ + a.y_valid_;
  std::vector<double> s(K + 1);
  s[0] = std::log(v);
  double p = 1.0 / v;
  for (int k = 1; k <= K; ++k) {
    s[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / k;
    p /= v;
  }
  return a.compose(s);
}

Jet pow(const Jet& a, double r) {
  if (a.space_ == nullptr) throw config_error("operation on an empty jet");
  const double rr = std::nearbyint(r);
  if (rr == r && std::abs(r) <= 64.0) {
    // integer exponent: exact repeated multiplication, valid for any sign of
    // the value slot (negative bases occur, e.g. quartic metrics)
    long n = static_cast<long>(rr);
    Jet base = n < 0 ? a.reciprocal() : a;
    n = std::labs(n);
    if (n == 0) return Jet::constant(a.space_, 1.0);
    Jet acc = Jet::constant(a.space_, 1.0);
    Jet p = base;
    bool first = true;
    while (n > 0) {
      if (n & 1) {
        acc = first ? p : acc * p;
        first = false;
      }
      n >>= 1;
      if (n > 0) p = p * p;
    }
    return acc;
  }
  const double v = a.value();
  if (v <= 0.0) throw domain_error("pow with real exponent needs a positive value slot");
  const int K = a.x_valid_ + a.y_valid_;
  std::vector<double> s(K + 1);
  double coef = 1.0;        // binomial(r, k)
  double vp = std::pow(v, r);  // v^(r-k)
  for (int k = 0; k <= K; ++k) {
    s[k] = coef * vp;
    coef = coef * (r - k) / (k + 1);
    vp /= v;
  }
  return a.compose(s);
}

Jet Jet::y_deriv(int k) const {
  if (space_ == nullptr) throw config_error("operation on an empty jet");
  const auto& cfg = space_->config();
  if (k < 0 || k >= cfg.n_y) throw config_error("y derivative index out of range");
  if (y_valid_ < 1) throw config_error("jet truncation exhausted by y derivative");
  Jet r(space_, x_valid_, y_valid_ - 1);
  const int yc = space_->y_count();
  std::vector<int> shifted(cfg.n_y);
  for (int i = 0; i < yc; ++i) {
    auto e = space_->y_exponents(i);
    if (e[k] == 0) continue;
    for (int v = 0; v < cfg.n_y; ++v) shifted[v] = e[v];
    shifted[k] -= 1;
    const int dst = space_->y_index(shifted);
    for (int blk = 0; blk < space_->block_count(); ++blk)
      r.c_[static_cast<size_t>(blk) * yc + dst] =
          e[k] * c_[static_cast<size_t>(blk) * yc + i];
  }
  return r;
}

Jet Jet::x_deriv(int k) const {
  if (space_ == nullptr) throw config_error("operation on an empty jet");
  const auto& cfg = space_->config();
  if (k < 0 || k >= cfg.n_x) throw config_error("x derivative index out of range");
  if (x_valid_ < 1) throw config_error("jet truncation exhausted by x derivative");
  Jet r(space_, 0, y_valid_);
  const int yc = space_->y_count();
  for (int i = 0; i < yc; ++i) r.c_[i] = c_[static_cast<size_t>(1 + k) * yc + i];
  return r;
}

double Jet::extract(std::span<const int> alpha, std::span<const int> beta) const {
  if (space_ == nullptr) throw config_error("extract from an empty jet");
  const auto& cfg = space_->config();
  int xo = 0;
  int block = 0;
  if (!alpha.empty()) {
    if (static_cast<int>(alpha.size()) != cfg.n_x)
      throw config_error("alpha length does not match n_x");
    for (int i = 0; i < cfg.n_x; ++i) {
      if (alpha[i] < 0) throw config_error("negative alpha entry");
      if (alpha[i] > 0) {
        xo += alpha[i];
        block = 1 + i;
      }
    }
    if (xo > x_valid_) throw config_error("alpha order exceeds valid x order");
  }
  std::vector<int> b(cfg.n_y, 0);
  if (!beta.empty()) {
    if (static_cast<int>(beta.size()) != cfg.n_y)
      throw config_error("beta length does not match n_y");
    std::copy(beta.begin(), beta.end(), b.begin());
  }
  const int idx = space_->y_index(b);
  if (idx < 0) throw config_error("beta multi-index outside truncation");
  if (space_->y_degree(idx) > y_valid_)
    throw config_error("beta order exceeds valid y order");
  return c_[static_cast<size_t>(block) * space_->y_count() + idx] *
         space_->y_factorial(idx);
}

Jet lift_variable(int var_id, double value, const JetConfig& cfg) {
  return Jet::variable(jet_space(cfg), var_id, value);
}

double extract(const Jet& j, std::span<const int> alpha, std::span<const int> beta) {
  return j.extract(alpha, beta);
}

}  // namespace finsler
