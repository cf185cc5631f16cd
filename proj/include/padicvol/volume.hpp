#pragma once

#include <map>
#include <string>
#include <vector>

#include "common.hpp"

namespace padicvol {

/**
 * @brief Exact element Σ a_j p^{-j/D} of Q(p^{1/D}), 0 ≤ j < D.
 *
 * Internally x = p^{-1/D} with x^D = 1/p; since x^D - p is Eisenstein, Q[x]/(x^D - 1/p)
 * is a field and every nonzero value is invertible. Rendering uses the base q = p^r.
 * Pure rationals may omit the base (p == 0) and adopt it on first mixing.
 */
class VolumeValue {
 public:
  VolumeValue() : D_(1), a_{Rational(0)} {}
  VolumeValue(const Rational& x) : D_(1), a_{x} {}  // NOLINT: rationals embed
  VolumeValue(long x) : D_(1), a_{Rational(x)} {}   // NOLINT

  /// q^e for rational e.
  static VolumeValue q_power(std::uint64_t q, const Rational& e) {
    auto [p, r] = prime_power(q);
    Rational E = -Rational(r) * e;  // value is p^{-E}
    E.canonicalize();
    long D = E.get_den().get_si();
    Integer num = E.get_num();
    Integer fl;
    mpz_fdiv_q_ui(fl.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(D));
    long j = Integer(num - fl * D).get_si();
    VolumeValue v;
    v.p_ = p;
    v.r_ = r;
    v.D_ = D;
    v.a_.assign(static_cast<std::size_t>(D), Rational(0));
    v.a_[static_cast<std::size_t>(j)] = pow_rational(p, -fl.get_si());
    v.canonicalize();
    return v;
  }
  static VolumeValue with_base(std::uint64_t q, const Rational& x) {
    VolumeValue v(x);
    std::tie(v.p_, v.r_) = prime_power(q);
    return v;
  }

  std::uint64_t prime() const { return p_; }
  std::uint64_t base() const { return p_ == 0 ? 0 : ipow(p_, r_); }
  bool is_rational() const { return D_ == 1; }
  Rational rational_part() const { return a_[0]; }
  bool is_zero() const {
    for (auto& x : a_)
      if (x != 0) return false;
    return true;
  }

  /// Minimal N with every exponent in q-units having denominator dividing N.
  long denominator_root() const {
    long N = 1;
    for (const auto& [e, c] : terms()) {
      (void)c;
      N = std::lcm(N, e.get_den().get_si());
    }
    return N;
  }
  /// Map from q-exponent e ≥ 0 (value Σ c·q^{-e}) to coefficient.
  std::map<Rational, Rational> terms() const {
    std::map<Rational, Rational> out;
    for (long j = 0; j < D_; ++j) {
      if (a_[static_cast<std::size_t>(j)] == 0) continue;
      Rational e(j, D_ * static_cast<long>(r_ == 0 ? 1 : r_));
      e.canonicalize();
      out[e] = a_[static_cast<std::size_t>(j)];
    }
    return out;
  }

  VolumeValue operator+(const VolumeValue& o) const {
    auto [x, y] = align(*this, o);
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] += y.a_[i];
    x.canonicalize();
    return x;
  }
  VolumeValue operator-(const VolumeValue& o) const { return *this + (-o); }
  VolumeValue operator-() const {
    VolumeValue v = *this;
    for (auto& c : v.a_) c = -c;
    return v;
  }
  VolumeValue operator*(const VolumeValue& o) const {
    auto [x, y] = align(*this, o);
    const long D = x.D_;
    std::vector<Rational> c(static_cast<std::size_t>(D), Rational(0));
    Rational pinv = x.p_ == 0 ? Rational(1) : Rational(1, static_cast<unsigned long>(x.p_));
    for (long i = 0; i < D; ++i) {
      if (x.a_[static_cast<std::size_t>(i)] == 0) continue;
      for (long j = 0; j < D; ++j) {
        if (y.a_[static_cast<std::size_t>(j)] == 0) continue;
        Rational t = x.a_[static_cast<std::size_t>(i)] * y.a_[static_cast<std::size_t>(j)];
        long k = i + j;
        if (k >= D) {
          k -= D;
          t *= pinv;
        }
        c[static_cast<std::size_t>(k)] += t;
      }
    }
    x.a_ = std::move(c);
    x.canonicalize();
    return x;
  }
  /// Exact inverse via a linear solve for the multiplication matrix.
  VolumeValue inverse() const {
    if (is_zero()) throw Error("VolumeValue: division by zero");
    const long D = D_;
    if (D == 1) {
      VolumeValue v = *this;
      v.a_[0] = 1 / a_[0];
      return v;
    }
    // column k of M = coefficients of this * x^k
    std::vector<std::vector<Rational>> M(static_cast<std::size_t>(D), std::vector<Rational>(static_cast<std::size_t>(D) + 1));
    Rational pinv(1, static_cast<unsigned long>(p_));
    for (long k = 0; k < D; ++k)
      for (long i = 0; i < D; ++i) {
        long idx = i + k;
        Rational c = a_[static_cast<std::size_t>(i)];
        if (idx >= D) {
          idx -= D;
          c *= pinv;
        }
        M[static_cast<std::size_t>(idx)][static_cast<std::size_t>(k)] += c;
      }
    M[0][static_cast<std::size_t>(D)] = 1;
    const auto n = static_cast<std::size_t>(D);
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      while (piv < n && M[piv][col] == 0) ++piv;
      if (piv == n) throw Error("VolumeValue: singular multiplication matrix");
      std::swap(M[piv], M[col]);
      Rational inv = 1 / M[col][col];
      for (std::size_t j = col; j <= n; ++j) M[col][j] *= inv;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == col || M[i][col] == 0) continue;
        Rational f = M[i][col];
        for (std::size_t j = col; j <= n; ++j) M[i][j] -= f * M[col][j];
      }
    }
    VolumeValue v = *this;
    for (std::size_t i = 0; i < n; ++i) v.a_[i] = M[i][n];
    v.canonicalize();
    return v;
  }
  VolumeValue operator/(const VolumeValue& o) const { return *this * o.inverse(); }
  VolumeValue& operator+=(const VolumeValue& o) { return *this = *this + o; }
  VolumeValue& operator-=(const VolumeValue& o) { return *this = *this - o; }
  VolumeValue& operator*=(const VolumeValue& o) { return *this = *this * o; }

  bool operator==(const VolumeValue& o) const { return (*this - o).is_zero(); }
  bool operator!=(const VolumeValue& o) const { return !(*this == o); }
  bool operator<(const VolumeValue& o) const { return (*this - o).sign() < 0; }
  bool operator<=(const VolumeValue& o) const { return (*this - o).sign() <= 0; }
  bool operator>(const VolumeValue& o) const { return o < *this; }
  bool operator>=(const VolumeValue& o) const { return o <= *this; }

  /// Exact sign, by isolating x = p^{-1/D} in shrinking rational intervals.
  int sign() const {
    if (is_zero()) return 0;
    if (D_ == 1) return sgn(a_[0]);
    Rational target(1, static_cast<unsigned long>(p_));
    Rational lo(0), hi(1);
    for (int iter = 0; iter < 4000; ++iter) {
      // interval evaluation of Σ a_j x^j for x ∈ [lo, hi], x > 0
      Rational flo(0), fhi(0), plo(1), phi(1);
      for (long j = 0; j < D_; ++j) {
        const Rational& c = a_[static_cast<std::size_t>(j)];
        if (c > 0) {
          flo += c * plo;
          fhi += c * phi;
        } else if (c < 0) {
          flo += c * phi;
          fhi += c * plo;
        }
        plo *= lo;
        phi *= hi;
      }
      if (flo > 0) return 1;
      if (fhi < 0) return -1;
      Rational mid = (lo + hi) / 2;
      Rational m = 1;
      for (long j = 0; j < D_; ++j) m *= mid;
      if (m <= target)
        lo = mid;
      else
        hi = mid;
    }
    throw Error("VolumeValue::sign did not converge");
  }

  /// Exact rendering in base q, e.g. "1 + 5^{-1/2}", "1/2*5^{-1/2}", "3/4".
  std::string str() const {
    if (is_zero()) return "0";
    std::string q = std::to_string(base());
    std::string out;
    for (const auto& [e, c] : terms()) {
      std::string term;
      bool neg = c < 0;
      Rational ac = neg ? Rational(-c) : c;
      if (e == 0) {
        term = to_string(ac);
      } else {
        std::string pw = q + "^{-" + to_string(e) + "}";
        term = ac == 1 ? pw : to_string(ac) + "*" + pw;
      }
      if (out.empty())
        out = (neg ? "-" : "") + term;
      else
        out += (neg ? " - " : " + ") + term;
    }
    return out;
  }

 private:
  std::uint64_t p_ = 0;
  unsigned r_ = 0;
  long D_ = 1;
  std::vector<Rational> a_;

  static Rational pow_rational(std::uint64_t p, long e) {
    Integer P(static_cast<unsigned long>(p)), res;
    mpz_pow_ui(res.get_mpz_t(), P.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? Rational(Integer(1), res) : Rational(res);
  }

  /// Re-expresses the value with denominator D' = k·D (x = y^k).
  VolumeValue refined(long Dp) const {
    if (Dp == D_) return *this;
    long k = Dp / D_;
    VolumeValue v = *this;
    v.D_ = Dp;
    v.a_.assign(static_cast<std::size_t>(Dp), Rational(0));
    for (long j = 0; j < D_; ++j) v.a_[static_cast<std::size_t>(j * k)] = a_[static_cast<std::size_t>(j)];
    return v;
  }

  static std::pair<VolumeValue, VolumeValue> align(const VolumeValue& a, const VolumeValue& b) {
    std::uint64_t p = a.p_ ? a.p_ : b.p_;
    unsigned r = a.p_ ? a.r_ : b.r_;
    if (a.p_ && b.p_ && (a.p_ != b.p_ || a.r_ != b.r_)) throw Error("VolumeValue: mixed bases");
    long D = std::lcm(a.D_, b.D_);
    VolumeValue x = a.refined(D), y = b.refined(D);
    x.p_ = y.p_ = p;
    x.r_ = y.r_ = r;
    return {x, y};
  }

  void canonicalize() {
    for (auto& c : a_) c.canonicalize();
    long g = D_;
    for (long j = 1; j < D_; ++j)
      if (a_[static_cast<std::size_t>(j)] != 0) g = std::gcd(g, j);
    if (g > 1) {
      long nD = D_ / g;
      std::vector<Rational> na(static_cast<std::size_t>(nD), Rational(0));
      for (long j = 0; j < nD; ++j) na[static_cast<std::size_t>(j)] = a_[static_cast<std::size_t>(j * g)];
      a_ = std::move(na);
      D_ = nD;
    }
  }
};

/// Enclosing interval [lo, hi] for an integral.
struct IntervalVolume {
  VolumeValue lo;
  VolumeValue hi;
  bool bounded = true;  ///< false when the upper bound is infinite

  bool contains(const VolumeValue& v) const { return lo <= v && (!bounded || v <= hi); }
  VolumeValue width() const {
    if (!bounded) throw Error("width of an unbounded interval");
    return hi - lo;
  }
  std::string str() const { return "[" + lo.str() + ", " + (bounded ? hi.str() : std::string("inf")) + "]"; }
};

}  // namespace padicvol
