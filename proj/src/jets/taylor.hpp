#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <string>
#include <unordered_map>
#include <vector>

namespace spc {

struct JetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared per-(dim, order) tables: graded-lex multi-index enumeration, position
// lookup, factorials, and the sparse (a, b, out) list driving truncated
// multiplication. Instances are cached and immutable; safe to share across
// threads.
class JetSpace {
 public:
  static const JetSpace& get(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  std::size_t size() const { return alphas_.size() / dim_; }

  const std::uint8_t* alpha(std::size_t pos) const {
    return alphas_.data() + pos * dim_;
  }
  int degree(std::size_t pos) const { return degree_[pos]; }
  double factorial(std::size_t pos) const { return factorial_[pos]; }

  // position of a multi-index; throws if |alpha| exceeds the order
  std::size_t position(const std::uint8_t* a) const;

  struct ProdEntry {
    std::uint32_t a, b, out;
  };
  const std::vector<ProdEntry>& prod() const { return prod_; }

 private:
  JetSpace(int dim, int order);

  int dim_, order_;
  std::vector<std::uint8_t> alphas_;  // size() * dim, graded lex
  std::vector<int> degree_;
  std::vector<double> factorial_;
  std::unordered_map<std::uint64_t, std::uint32_t> pos_;
  std::vector<ProdEntry> prod_;
};

// Truncated Taylor expansion around a base point. Coefficient at multi-index
// alpha is d^alpha f / alpha!, so degree <= order terms reproduce the local
// Taylor polynomial exactly.
template <class S>
class Taylor {
 public:
  Taylor() = default;
  explicit Taylor(const JetSpace& sp) : sp_(&sp), c_(sp.size(), S(0)) {}

  static Taylor constant(const JetSpace& sp, S v) {
    Taylor t(sp);
    t.c_[0] = v;
    return t;
  }
  // base + (x_v - base_v) as a jet
  static Taylor variable(const JetSpace& sp, int v, S base) {
    Taylor t(sp);
    t.c_[0] = base;
    std::vector<std::uint8_t> a(sp.dim(), 0);
    a[v] = 1;
    t.c_[sp.position(a.data())] = S(1);
    return t;
  }

  const JetSpace& space() const { return *sp_; }
  S value() const { return c_[0]; }
  S operator[](std::size_t i) const { return c_[i]; }
  S& operator[](std::size_t i) { return c_[i]; }
  std::size_t size() const { return c_.size(); }

  S coeff(const std::vector<std::uint8_t>& a) const {
    return c_[sp_->position(a.data())];
  }
  // d^alpha f at the base point (coefficient times alpha!)
  S deriv(const std::vector<std::uint8_t>& a) const {
    std::size_t p = sp_->position(a.data());
    return c_[p] * S(sp_->factorial(p));
  }

  Taylor operator+(const Taylor& o) const {
    Taylor r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
  }
  Taylor operator-(const Taylor& o) const {
    Taylor r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
    return r;
  }
  Taylor operator-() const {
    Taylor r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  Taylor operator*(S s) const {
    Taylor r = *this;
    for (auto& v : r.c_) v *= s;
    return r;
  }
  Taylor operator+(S s) const {
    Taylor r = *this;
    r.c_[0] += s;
    return r;
  }
  Taylor operator-(S s) const {
    Taylor r = *this;
    r.c_[0] -= s;
    return r;
  }

  Taylor mul(const Taylor& o) const {
    Taylor r(*sp_);
    for (const auto& e : sp_->prod()) r.c_[e.out] += c_[e.a] * o.c_[e.b];
    return r;
  }
  Taylor operator*(const Taylor& o) const { return mul(o); }

  // 1 / f via the geometric series in (f - f0)/f0
  Taylor reciprocal() const {
    S f0 = c_[0];
    if (f0 == S(0)) throw JetError("division by zero in jet arithmetic");
    std::vector<S> c(sp_->order() + 1);
    S p = S(1) / f0;
    for (int k = 0; k <= sp_->order(); ++k) {
      c[k] = p;
      p = -p / f0;
    }
    return compose_series(c);
  }
  Taylor operator/(const Taylor& o) const { return mul(o.reciprocal()); }

  Taylor pow_int(int k) const {
    if (k < 1) throw JetError("integer power must be >= 1");
    Taylor r = *this;
    for (int i = 1; i < k; ++i) r = r.mul(*this);
    return r;
  }

  // evaluates sum_k c[k] (f - f0)^k; exact truncation since f - f0 has no
  // constant term
  Taylor compose_series(const std::vector<S>& c) const {
    Taylor u = *this;
    u.c_[0] = S(0);
    Taylor acc = constant(*sp_, c[sp_->order()]);
    for (int k = sp_->order() - 1; k >= 0; --k) acc = acc.mul(u) + c[k];
    return acc;
  }

  // d/dx_v; result lives in the (dim, order-1) space
  Taylor derivative(int v) const {
    if (sp_->order() < 1) throw JetError("cannot differentiate an order-0 jet");
    const JetSpace& dn = JetSpace::get(sp_->dim(), sp_->order() - 1);
    Taylor r(dn);
    std::vector<std::uint8_t> a(sp_->dim());
    for (std::size_t p = 0; p < sp_->size(); ++p) {
      const std::uint8_t* ap = sp_->alpha(p);
      if (ap[v] == 0) continue;
      for (int d = 0; d < sp_->dim(); ++d) a[d] = ap[d];
      a[v] -= 1;
      r.c_[dn.position(a.data())] = c_[p] * S(ap[v]);
    }
    return r;
  }

  // same dim, lower (truncate) or higher (zero-extend) order; graded-lex
  // prefixes of the two enumerations agree, so this is a prefix copy
  Taylor to_order(int new_order) const {
    const JetSpace& ns = JetSpace::get(sp_->dim(), new_order);
    Taylor r(ns);
    std::size_t m = ns.size() < c_.size() ? ns.size() : c_.size();
    for (std::size_t p = 0; p < m; ++p) r.c_[p] = c_[p];
    return r;
  }

  template <class T>
  Taylor<T> cast() const {
    Taylor<T> r(*sp_);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = T(c_[i]);
    return r;
  }

  // complex conjugate of the represented function (valid because the
  // underlying variables are real)
  Taylor conjugate() const {
    Taylor r = *this;
    if constexpr (std::is_same_v<S, std::complex<double>>)
      for (auto& v : r.c_) v = std::conj(v);
    return r;
  }

 private:
  const JetSpace* sp_ = nullptr;
  std::vector<S> c_;
};

template <class S>
Taylor<S> operator*(S s, const Taylor<S>& t) {
  return t * s;
}

template <class S>
Taylor<S> exp(const Taylor<S>& f) {
  using std::exp;
  S e0 = exp(f.value());
  std::vector<S> c(f.space().order() + 1);
  double kf = 1.0;
  for (int k = 0; k <= f.space().order(); ++k) {
    if (k > 0) kf *= k;
    c[k] = e0 / S(kf);
  }
  return f.compose_series(c);
}

namespace detail {
inline void check_log_arg(double v) {
  if (!(v > 0.0)) throw JetError("log of non-positive jet value");
}
inline void check_log_arg(const std::complex<double>& v) {
  if (v == std::complex<double>(0.0)) throw JetError("log of zero jet value");
}
}  // namespace detail

template <class S>
Taylor<S> log(const Taylor<S>& f) {
  using std::log;
  S f0 = f.value();
  detail::check_log_arg(f0);
  std::vector<S> c(f.space().order() + 1);
  c[0] = log(f0);
  S p = S(1) / f0;  // (1/f0)^k / k with alternating sign
  for (int k = 1; k <= f.space().order(); ++k) {
    c[k] = (k % 2 ? p : -p) / S(double(k));
    p /= f0;
  }
  return f.compose_series(c);
}

// f^a for real exponent; requires a strictly positive (real) or nonzero
// (complex) leading value
template <class S>
Taylor<S> pow_real(const Taylor<S>& f, double a) {
  using std::pow;
  S f0 = f.value();
  detail::check_log_arg(f0);
  // c_k = f0^{a-k} * prod_{j<k}(a-j) / k!
  std::vector<S> c(f.space().order() + 1);
  S base = pow(f0, S(a));
  double num = 1.0, den = 1.0;
  for (int k = 0; k <= f.space().order(); ++k) {
    if (k > 0) {
      num *= a - (k - 1);
      den *= k;
      base /= f0;
    }
    c[k] = base * S(num / den);
  }
  return f.compose_series(c);
}

}  // namespace spc
