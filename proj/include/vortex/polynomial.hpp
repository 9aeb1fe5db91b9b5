// Dense univariate polynomials over an exact field, with Sturm-sequence
// root counting and bisection-based root isolation.  Switch times are roots
// of quartics whose coefficients are IEEE doubles; converting those doubles
// exactly to rationals lets the isolation logic be exact, so grazing roots
// (even multiplicity) are detected reliably instead of being lost to
// floating-point noise.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace vortex {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact rational value of a finite double (every finite double is a
/// dyadic rational).
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
  // Scale the mantissa to an integer: m * 2^53 is integral for doubles.
  const long long mant = static_cast<long long>(std::ldexp(m, 53));
  const int e2 = exp - 53;
  Rational r(mant);
  if (e2 >= 0)
    r *= Rational(BigInt(1) << e2);
  else
    r /= Rational(BigInt(1) << (-e2));
  return r;
}

/// Dense polynomial, coefficients in ascending degree order.
template <class K>
struct Poly {
  std::vector<K> c;

  Poly() = default;
  explicit Poly(std::vector<K> coeffs) : c(std::move(coeffs)) { trim(); }

  void trim() {
    while (!c.empty() && c.back() == K(0)) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }

  K eval(const K& t) const {
    K acc(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  Poly derivative() const {
    if (c.size() <= 1) return {};
    std::vector<K> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * K(static_cast<int>(i));
    return Poly(std::move(d));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<K> r(std::max(a.c.size(), b.c.size()), K(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<K> r(std::max(a.c.size(), b.c.size()), K(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<K> r(a.c.size() + b.c.size() - 1, K(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly& a, const K& s) {
    Poly r = a;
    for (auto& v : r.c) v *= s;
    r.trim();
    return r;
  }

  /// Euclidean division over a field: returns {quotient, remainder}.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::invalid_argument("division by zero polynomial");
    Poly q, r = a;
    q.c.assign(a.c.size(), K(0));
    while (!r.is_zero() && r.degree() >= b.degree()) {
      const int d = r.degree() - b.degree();
      const K f = r.c.back() / b.c.back();
      q.c[d] = f;
      for (std::size_t i = 0; i < b.c.size(); ++i) r.c[d + i] -= f * b.c[i];
      r.trim();
    }
    q.trim();
    return {q, r};
  }

  /// Exact division; throws when the divisor does not divide evenly.
  static Poly divide_exact(const Poly& a, const Poly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw std::invalid_argument("inexact polynomial division");
    return q;
  }

  static Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      auto [q, r] = divmod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    if (!a.is_zero()) {
      const K lead = a.c.back();
      for (auto& v : a.c) v /= lead;  // monic normal form
    }
    return a;
  }

  /// Square-free part p / gcd(p, p').
  Poly square_free() const {
    if (degree() < 1) return *this;
    const Poly g = gcd(*this, derivative());
    if (g.degree() == 0) return *this;
    return divide_exact(*this, g);
  }
};

using RPoly = Poly<Rational>;
using DPoly = Poly<double>;

/// Exact lift of a double-coefficient polynomial.
inline RPoly to_rational(const std::vector<double>& coeffs) {
  std::vector<Rational> c(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] = rational_from_double(coeffs[i]);
  return RPoly(std::move(c));
}

namespace detail {
inline int sign(const Rational& v) { return v == 0 ? 0 : (v > 0 ? 1 : -1); }

inline std::vector<RPoly> sturm_sequence(const RPoly& p) {
  std::vector<RPoly> seq;
  seq.push_back(p.square_free());
  if (seq[0].degree() >= 1) {
    seq.push_back(seq[0].derivative());
    while (seq.back().degree() >= 1) {
      auto [q, r] = RPoly::divmod(seq[seq.size() - 2], seq.back());
      (void)q;
      if (r.is_zero()) break;
      for (auto& v : r.c) v = -v;
      seq.push_back(std::move(r));
    }
  }
  return seq;
}

inline int sign_changes(const std::vector<RPoly>& seq, const Rational& t) {
  int changes = 0, last = 0;
  for (const auto& p : seq) {
    const int s = sign(p.eval(t));
    if (s != 0) {
      if (last != 0 && s != last) ++changes;
      last = s;
    }
  }
  return changes;
}
}  // namespace detail

/// Number of distinct real roots of p in the half-open interval (lo, hi].
inline int sturm_count(const RPoly& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) throw std::invalid_argument("zero polynomial has no root count");
  if (lo >= hi) return 0;
  const auto seq = detail::sturm_sequence(p);
  return detail::sign_changes(seq, lo) - detail::sign_changes(seq, hi);
}

/// One isolated real root: an exact bracketing interval plus a parity flag.
/// `odd_multiplicity` is true when the polynomial changes sign across the
/// root — the transversal case; even multiplicity signals a grazing root.
struct IsolatedRoot {
  Rational lo, hi;
  bool odd_multiplicity = true;
  double midpoint() const { return static_cast<double>(Rational((lo + hi) / 2)); }
};

/// Isolate all distinct roots of p in (lo, hi], each to interval width at
/// most `width`.  Bisection on the Sturm count; exact arithmetic throughout.
inline std::vector<IsolatedRoot> isolate_roots(const RPoly& p, Rational lo, Rational hi,
                                               const Rational& width) {
  std::vector<IsolatedRoot> out;
  if (p.is_zero() || p.degree() < 1) return out;
  const auto seq = detail::sturm_sequence(p);
  const RPoly& sf = seq[0];

  struct Seg {
    Rational lo, hi;
    int count;
  };
  std::vector<Seg> stack;
  {
    const int n = detail::sign_changes(seq, lo) - detail::sign_changes(seq, hi);
    if (n > 0) stack.push_back({lo, hi, n});
  }
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    if (s.count == 1 && s.hi - s.lo <= width) {
      // Shrink once more so the midpoint is a faithful double; parity from
      // the sign of the square-free part at the exact endpoints of the
      // ORIGINAL polynomial p (sign change of p itself decides parity).
      const int slo = detail::sign(p.eval(s.lo));
      const int shi = detail::sign(p.eval(s.hi));
      const bool odd = (slo != 0 && shi != 0) ? (slo != shi) : true;
      out.push_back({s.lo, s.hi, odd});
      continue;
    }
    const Rational mid = (s.lo + s.hi) / 2;
    // Landing exactly on a root of the square-free part: count it directly.
    if (sf.eval(mid) == 0) {
      const Rational eps = (s.hi - s.lo) / 1000000;
      out.push_back({mid - eps, mid + eps,
                     detail::sign(p.eval(mid - eps)) != detail::sign(p.eval(mid + eps))});
      const int nl = detail::sign_changes(seq, s.lo) - detail::sign_changes(seq, mid - eps);
      const int nr = detail::sign_changes(seq, mid + eps) - detail::sign_changes(seq, s.hi);
      if (nl > 0) stack.push_back({s.lo, mid - eps, nl});
      if (nr > 0) stack.push_back({mid + eps, s.hi, nr});
      continue;
    }
    const int nl = detail::sign_changes(seq, s.lo) - detail::sign_changes(seq, mid);
    const int nr = s.count - nl;
    if (nl > 0) stack.push_back({s.lo, mid, nl});
    if (nr > 0) stack.push_back({mid, s.hi, nr});
  }
  std::sort(out.begin(), out.end(), [](const IsolatedRoot& a, const IsolatedRoot& b) { return a.lo < b.lo; });
  return out;
}

/// Polish an isolated root to double precision by bisection on the
/// square-free part (which changes sign across every distinct root).
inline double refine_root(const RPoly& p, const IsolatedRoot& r) {
  const RPoly sf = p.square_free();
  double lo = static_cast<double>(r.lo), hi = static_cast<double>(r.hi);
  int slo = detail::sign(sf.eval(rational_from_double(lo)));
  if (slo == 0) return lo;
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int sm = detail::sign(sf.eval(rational_from_double(mid)));
    if (sm == 0) return mid;
    if (sm == slo)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// True when the integer polynomial is palindromic (self-reciprocal):
/// coefficients read the same from both ends, possibly up to global sign.
template <class K>
inline bool reciprocal_check(const Poly<K>& p) {
  const auto& c = p.c;
  if (c.empty()) return true;
  const std::size_t n = c.size();
  bool plus = true, minus = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (c[i] != c[n - 1 - i]) plus = false;
    if (c[i] != -c[n - 1 - i]) minus = false;
  }
  return plus || minus;
}

}  // namespace vortex
