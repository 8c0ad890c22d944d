#pragma once

// Truncated multivariate Taylor series ("jets").
//
// A Jet<Scalar, N> of order K holds the Taylor coefficients f^(a)(x0)/a! of a
// function of N variables for every multi-index |a| <= K. Arithmetic is exact
// up to truncation, so value and derivatives come out without finite
// differences. Differentiation lowers the order by one.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <type_traits>
#include <vector>

#include "sga/errors.hpp"

namespace sga {

inline constexpr int kMaxJetOrder = 4;

namespace detail {

template <int N> struct MonomialTable {
  using Exponents = std::array<int, N>;
  struct Triple {
    int a, b, c;
  };
  struct Raise {
    int index;  // monomial c + e_i, or -1 if it exceeds kMaxJetOrder
    int factor; // exponent of x_i in c + e_i
  };

  std::vector<Exponents> exps;
  std::array<int, kMaxJetOrder + 1> count_upto{};
  std::vector<Triple> products;
  std::array<int, kMaxJetOrder + 1> products_upto{};
  std::vector<std::array<Raise, N>> raise;
  std::map<Exponents, int> index;

  static int degree(const Exponents &e) {
    int d = 0;
    for (int v : e)
      d += v;
    return d;
  }

  static const MonomialTable &get() {
    static const MonomialTable table = build();
    return table;
  }

private:
  static void enumerate(int var, int remaining, Exponents &cur,
                        std::vector<Exponents> &out) {
    if (var == N - 1) {
      cur[var] = remaining;
      out.push_back(cur);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      cur[var] = k;
      enumerate(var + 1, remaining - k, cur, out);
    }
  }

  static MonomialTable build() {
    MonomialTable t;
    for (int d = 0; d <= kMaxJetOrder; ++d) {
      Exponents cur{};
      enumerate(0, d, cur, t.exps);
      t.count_upto[d] = static_cast<int>(t.exps.size());
    }
    for (int i = 0; i < static_cast<int>(t.exps.size()); ++i)
      t.index[t.exps[i]] = i;

    const int n = static_cast<int>(t.exps.size());
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        Exponents s{};
        for (int v = 0; v < N; ++v)
          s[v] = t.exps[a][v] + t.exps[b][v];
        if (degree(s) > kMaxJetOrder)
          continue;
        t.products.push_back({a, b, t.index.at(s)});
      }
    }
    std::stable_sort(t.products.begin(), t.products.end(),
                     [&](const Triple &x, const Triple &y) {
                       return degree(t.exps[x.c]) < degree(t.exps[y.c]);
                     });
    for (int d = 0; d <= kMaxJetOrder; ++d) {
      t.products_upto[d] = static_cast<int>(std::count_if(
          t.products.begin(), t.products.end(),
          [&](const Triple &x) { return degree(t.exps[x.c]) <= d; }));
    }

    t.raise.resize(n);
    for (int c = 0; c < n; ++c) {
      for (int v = 0; v < N; ++v) {
        Exponents s = t.exps[c];
        s[v] += 1;
        if (degree(s) > kMaxJetOrder) {
          t.raise[c][v] = {-1, 0};
        } else {
          t.raise[c][v] = {t.index.at(s), s[v]};
        }
      }
    }
    return t;
  }
};

template <class T> struct is_complex : std::false_type {};
template <class T> struct is_complex<std::complex<T>> : std::true_type {};

} // namespace detail

template <class Scalar, int N> class Jet {
public:
  using Table = detail::MonomialTable<N>;
  using Exponents = typename Table::Exponents;

  Jet() : order_(0), c_(1, Scalar{}) {}

  explicit Jet(int order, Scalar constant = Scalar{}) : order_(order) {
    if (order < 0 || order > kMaxJetOrder)
      throw OrderError("jet order out of range");
    c_.assign(Table::get().count_upto[order], Scalar{});
    c_[0] = constant;
  }

  // The coordinate function x_var expanded around `value`.
  static Jet variable(int order, int var, Scalar value) {
    Jet j(order, value);
    if (order >= 1)
      j.c_[1 + var] = Scalar{1};
    return j;
  }

  int order() const { return order_; }
  Scalar value() const { return c_[0]; }
  const std::vector<Scalar> &coefficients() const { return c_; }

  Scalar coefficient(const Exponents &e) const {
    const int d = Table::degree(e);
    if (d > order_)
      throw OrderError("derivative order exceeds jet order");
    return c_[Table::get().index.at(e)];
  }

  // Partial derivative d^|e| f / dx^e at the expansion point.
  Scalar derivative(const Exponents &e) const {
    double fact = 1.0;
    for (int v : e)
      for (int k = 2; k <= v; ++k)
        fact *= k;
    return coefficient(e) * Scalar(fact);
  }

  Scalar gradient(int i) const {
    Exponents e{};
    e[i] = 1;
    return derivative(e);
  }

  Scalar hessian(int i, int j) const {
    Exponents e{};
    e[i] += 1;
    e[j] += 1;
    return derivative(e);
  }

  // d/dx_var as a jet of order - 1.
  Jet differentiate(int var) const {
    if (order_ == 0)
      throw OrderError("cannot differentiate an order-0 jet");
    const auto &t = Table::get();
    Jet r(order_ - 1);
    for (int c = 0; c < t.count_upto[order_ - 1]; ++c) {
      const auto &up = t.raise[c][var];
      r.c_[c] = c_[up.index] * Scalar(up.factor);
    }
    return r;
  }

  Jet truncated(int order) const {
    if (order > order_)
      throw OrderError("cannot raise jet order by truncation");
    Jet r(order);
    std::copy_n(c_.begin(), r.c_.size(), r.c_.begin());
    return r;
  }

  Jet &operator+=(const Jet &o) {
    shrink_to(std::min(order_, o.order_));
    for (std::size_t i = 0; i < c_.size(); ++i)
      c_[i] += o.c_[i];
    return *this;
  }
  Jet &operator-=(const Jet &o) {
    shrink_to(std::min(order_, o.order_));
    for (std::size_t i = 0; i < c_.size(); ++i)
      c_[i] -= o.c_[i];
    return *this;
  }
  Jet &operator*=(Scalar s) {
    for (auto &v : c_)
      v *= s;
    return *this;
  }
  Jet &operator+=(Scalar s) {
    c_[0] += s;
    return *this;
  }
  Jet &operator-=(Scalar s) {
    c_[0] -= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet &b) { return a += b; }
  friend Jet operator-(Jet a, const Jet &b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (auto &v : a.c_)
      v = -v;
    return a;
  }
  friend Jet operator*(Jet a, Scalar s) { return a *= s; }
  friend Jet operator*(Scalar s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, Scalar s) { return a += s; }
  friend Jet operator+(Scalar s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, Scalar s) { return a -= s; }
  friend Jet operator-(Scalar s, Jet a) { return (-a) += s; }
  friend Jet operator/(Jet a, Scalar s) { return a *= (Scalar(1) / s); }

  friend Jet operator*(const Jet &a, const Jet &b) {
    const int order = std::min(a.order_, b.order_);
    const auto &t = Table::get();
    Jet r(order);
    const int n = t.products_upto[order];
    for (int k = 0; k < n; ++k) {
      const auto &p = t.products[k];
      r.c_[p.c] += a.c_[p.a] * b.c_[p.b];
    }
    return r;
  }
  Jet &operator*=(const Jet &o) { return *this = *this * o; }

  friend Jet operator/(const Jet &a, const Jet &b) { return a * reciprocal(b); }
  friend Jet operator/(Scalar s, const Jet &b) { return reciprocal(b) * s; }

  // f(u) for a univariate f given its Taylor coefficients at u.value():
  // taylor[k] = f^(k)(u0) / k!.
  friend Jet compose(const Jet &u, const std::vector<Scalar> &taylor) {
    Jet delta = u;
    delta.c_[0] = Scalar{};
    Jet r(u.order_, taylor[0]);
    Jet power = delta;
    for (int k = 1; k <= u.order_; ++k) {
      for (std::size_t i = 0; i < r.c_.size(); ++i)
        r.c_[i] += taylor[k] * power.c_[i];
      if (k < u.order_)
        power = power * delta;
    }
    return r;
  }

  friend Jet reciprocal(const Jet &u) {
    const Scalar u0 = u.value();
    if (u0 == Scalar{})
      throw DomainError("reciprocal of a jet with zero value");
    std::vector<Scalar> t(u.order_ + 1);
    Scalar inv = Scalar(1) / u0;
    Scalar p = inv;
    for (int k = 0; k <= u.order_; ++k) {
      t[k] = (k % 2 == 0 ? p : -p);
      p *= inv;
    }
    return compose(u, t);
  }

  friend Jet pow(const Jet &u, Scalar a) {
    const Scalar u0 = u.value();
    if constexpr (!detail::is_complex<Scalar>::value) {
      if (!(u0 > 0))
        throw DomainError("real jet power requires a positive base");
    } else {
      if (u0 == Scalar{})
        throw DomainError("jet power of zero base");
    }
    std::vector<Scalar> t(u.order_ + 1);
    Scalar binom = Scalar(1);
    for (int k = 0; k <= u.order_; ++k) {
      t[k] = binom * std::pow(u0, a - Scalar(k));
      binom *= (a - Scalar(k)) / Scalar(k + 1);
    }
    return compose(u, t);
  }

  friend Jet sqrt(const Jet &u) { return pow(u, Scalar(0.5)); }

  friend Jet exp(const Jet &u) {
    const Scalar e0 = std::exp(u.value());
    std::vector<Scalar> t(u.order_ + 1);
    Scalar fact = Scalar(1);
    for (int k = 0; k <= u.order_; ++k) {
      if (k > 0)
        fact *= Scalar(k);
      t[k] = e0 / fact;
    }
    return compose(u, t);
  }

  friend Jet log(const Jet &u) {
    const Scalar u0 = u.value();
    if constexpr (!detail::is_complex<Scalar>::value) {
      if (!(u0 > 0))
        throw DomainError("real jet log requires a positive argument");
    }
    std::vector<Scalar> t(u.order_ + 1);
    t[0] = std::log(u0);
    Scalar p = Scalar(1);
    for (int k = 1; k <= u.order_; ++k) {
      p /= u0;
      t[k] = (k % 2 == 1 ? p : -p) / Scalar(k);
    }
    return compose(u, t);
  }

private:
  void shrink_to(int order) {
    if (order < order_) {
      order_ = order;
      c_.resize(Table::get().count_upto[order]);
    }
  }

  int order_;
  std::vector<Scalar> c_;
};

} // namespace sga
