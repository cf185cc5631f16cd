#pragma once

#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"

namespace padicvol {

/// Q(ζ_M)[x]/(x^D − 1/q): cyclotomic rationals with a formal x = q^{-1/D}.
struct CycloContext {
  std::uint64_t M = 1;
  std::uint64_t D = 1;
  std::uint64_t q = 1;
  std::vector<long> phi;  ///< Φ_M, monic, ascending coefficients

  std::size_t degree() const { return phi.size() - 1; }
  std::size_t dim() const { return degree() * static_cast<std::size_t>(D); }
};

using CycloRef = std::shared_ptr<const CycloContext>;

namespace detail {

/// Exact quotient of integer polynomials by a monic divisor (ascending coefficients).
inline std::vector<long> poly_div_monic(std::vector<long> a, const std::vector<long>& b) {
  const std::size_t db = b.size() - 1;
  if (a.size() < b.size()) return {0};
  std::vector<long> quo(a.size() - db, 0);
  for (std::size_t i = a.size(); i-- > db;) {
    long c = a[i];
    quo[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  for (std::size_t i = 0; i < db; ++i)
    if (a[i] != 0) throw Error("cyclotomic polynomial division is not exact");
  return quo;
}

inline std::vector<long> cyclotomic_poly(std::uint64_t M) {
  std::vector<long> p(M + 1, 0);
  p[0] = -1;
  p[M] = 1;
  for (std::uint64_t d = 1; d < M; ++d)
    if (M % d == 0) p = poly_div_monic(p, cyclotomic_poly(d));
  return p;
}

}  // namespace detail

inline CycloRef make_cyclo_context(std::uint64_t M, std::uint64_t D, std::uint64_t q) {
  if (M == 0 || D == 0 || q < 2) throw Error("cyclo: invalid context");
  auto c = std::make_shared<CycloContext>();
  c->M = M;
  c->D = D;
  c->q = q;
  c->phi = detail::cyclotomic_poly(M);
  return c;
}

/**
 * @brief An exact element Σ c_{ij} ζ_M^i q^{-j/D}, i < φ(M), j < D.
 *
 * All values combined in one computation must share a context.
 */
class CycloValue {
 public:
  CycloValue() = default;
  explicit CycloValue(CycloRef ctx, const Rational& r = 0) : ctx_(std::move(ctx)), c_(ctx_->dim(), Rational(0)) { c_[0] = r; }

  static CycloValue zeta_power(CycloRef ctx, long k) {
    CycloValue v(ctx);
    v.c_[0] = 0;
    const long M = static_cast<long>(ctx->M);
    k = ((k % M) + M) % M;
    std::vector<Rational> z(static_cast<std::size_t>(k) + 1, Rational(0));
    z[static_cast<std::size_t>(k)] = 1;
    v.add_zeta_poly(std::move(z), 0);
    return v;
  }

  /// exp(2πi e) for e ∈ Q/Z; the denominator of e must divide M.
  static CycloValue root_of_unity(CycloRef ctx, const Rational& e) {
    Rational k = e * Rational(static_cast<long>(ctx->M));
    if (k.get_den() != 1) throw Error("cyclo: context lacks the required roots of unity");
    return zeta_power(std::move(ctx), k.get_num().get_si());
  }

  /// q^e; e·D must be an integer.
  static CycloValue q_power(CycloRef ctx, const Rational& e) {
    Rational k = -e * Rational(static_cast<long>(ctx->D));
    if (k.get_den() != 1) throw Error("cyclo: exponent denominator does not divide D");
    const long D = static_cast<long>(ctx->D);
    long kk = k.get_num().get_si();
    long a = kk >= 0 ? kk / D : -((-kk + D - 1) / D);
    long b = kk - a * D;
    CycloValue v(ctx);
    v.c_[0] = 0;
    Rational scale = 1;
    mpz_class qa;
    mpz_ui_pow_ui(qa.get_mpz_t(), ctx->q, static_cast<unsigned long>(a >= 0 ? a : -a));
    scale = a >= 0 ? Rational(1) / Rational(qa) : Rational(qa);
    v.c_[v.idx(0, static_cast<std::size_t>(b))] = scale;
    return v;
  }

  const CycloRef& context() const { return ctx_; }
  bool valid() const { return static_cast<bool>(ctx_); }

  CycloValue operator+(const CycloValue& o) const {
    check(o);
    CycloValue r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
  }
  CycloValue operator-(const CycloValue& o) const {
    check(o);
    CycloValue r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
    return r;
  }
  CycloValue operator-() const { return CycloValue(ctx_) - *this; }
  CycloValue& operator+=(const CycloValue& o) { return *this = *this + o; }
  CycloValue& operator-=(const CycloValue& o) { return *this = *this - o; }

  CycloValue operator*(const CycloValue& o) const {
    check(o);
    const std::size_t deg = ctx_->degree(), D = ctx_->D;
    CycloValue r(ctx_);
    r.c_[0] = 0;
    // multiply per x-degree, then reduce ζ and wrap x^D = 1/q
    std::vector<std::vector<Rational>> acc(D, std::vector<Rational>(2 * deg, Rational(0)));
    std::vector<std::vector<Rational>> wrap(D, std::vector<Rational>(2 * deg, Rational(0)));
    for (std::size_t j1 = 0; j1 < D; ++j1)
      for (std::size_t i1 = 0; i1 < deg; ++i1) {
        const Rational& a = c_[idx(i1, j1)];
        if (a == 0) continue;
        for (std::size_t j2 = 0; j2 < D; ++j2)
          for (std::size_t i2 = 0; i2 < deg; ++i2) {
            const Rational& b = o.c_[idx(i2, j2)];
            if (b == 0) continue;
            std::size_t j = j1 + j2;
            if (j < D)
              acc[j][i1 + i2] += a * b;
            else
              wrap[j - D][i1 + i2] += a * b;
          }
      }
    const Rational qinv = Rational(1) / Rational(static_cast<long>(ctx_->q));
    for (std::size_t j = 0; j < D; ++j) {
      for (std::size_t i = 0; i < 2 * deg; ++i) acc[j][i] += wrap[j][i] * qinv;
      r.add_zeta_poly(std::move(acc[j]), j);
    }
    return r;
  }
  CycloValue& operator*=(const CycloValue& o) { return *this = *this * o; }

  CycloValue scale(const Rational& s) const {
    CycloValue r = *this;
    for (auto& x : r.c_) x *= s;
    return r;
  }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x != 0) return false;
    return true;
  }
  bool operator==(const CycloValue& o) const {
    check(o);
    return c_ == o.c_;
  }
  bool operator!=(const CycloValue& o) const { return !(*this == o); }

  /// The rational part when no ζ or q^{-1/D} terms are present.
  bool is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }
  const Rational& rational_part() const { return c_[0]; }
  /// Coefficient of ζ^i q^{-j/D}.
  const Rational& coeff(std::size_t i, std::size_t j) const { return c_.at(idx(i, j)); }

  /// "3/2 + 1/2*z^3*q^(-1/2)"; z = ζ_M. Parsed back by parse_cyclo.
  std::string str() const {
    std::string s;
    const std::size_t deg = ctx_->degree();
    for (std::size_t j = 0; j < ctx_->D; ++j)
      for (std::size_t i = 0; i < deg; ++i) {
        const Rational& a = c_[idx(i, j)];
        if (a == 0) continue;
        std::string term = a.get_str();
        if (i > 0) term += "*z^" + std::to_string(i);
        if (j > 0) term += "*q^(" + Rational(-static_cast<long>(j), static_cast<long>(ctx_->D)).get_str() + ")";
        if (!s.empty()) s += term[0] == '-' ? " - " + term.substr(1) : " + " + term;
        else s = term;
      }
    return s.empty() ? "0" : s;
  }

 private:
  CycloRef ctx_;
  std::vector<Rational> c_;

  std::size_t idx(std::size_t i, std::size_t j) const { return j * ctx_->degree() + i; }
  void check(const CycloValue& o) const {
    if (!ctx_ || !o.ctx_) throw Error("cyclo: uninitialized value");
    if (ctx_ != o.ctx_ && (ctx_->M != o.ctx_->M || ctx_->D != o.ctx_->D || ctx_->q != o.ctx_->q))
      throw Error("cyclo: values from different contexts");
  }
  /// Adds Σ z_i ζ^i (any length) at x-degree j, reducing modulo Φ_M.
  void add_zeta_poly(std::vector<Rational> z, std::size_t j) {
    const auto& phi = ctx_->phi;
    const std::size_t deg = ctx_->degree();
    for (std::size_t i = z.size(); i-- > deg;) {
      if (z[i] == 0) continue;
      Rational c = z[i];
      for (std::size_t k = 0; k <= deg; ++k) z[i - deg + k] -= c * Rational(phi[k]);
    }
    for (std::size_t i = 0; i < deg && i < z.size(); ++i) c_[idx(i, j)] += z[i];
  }
};

/// Parses the str() format; every term is rational[*z^i][*q^(e)].
inline CycloValue parse_cyclo(const CycloRef& ctx, const std::string& text) {
  CycloValue out(ctx);
  std::string s;
  for (char ch : text)
    if (ch != ' ') s += ch;
  if (s.empty()) throw Error("cyclo: empty value");
  std::size_t pos = 0;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    }
    std::size_t end = pos;
    int depth = 0;
    while (end < s.size() && !(depth == 0 && end > pos && (s[end] == '+' || s[end] == '-'))) {
      if (s[end] == '(') ++depth;
      if (s[end] == ')') --depth;
      ++end;
    }
    std::string term = s.substr(pos, end - pos);
    pos = end;
    CycloValue v(ctx, Rational(sign));
    std::stringstream ts(term);
    std::string factor;
    bool first = true;
    while (std::getline(ts, factor, '*')) {
      if (factor.rfind("z^", 0) == 0) {
        v = v * CycloValue::zeta_power(ctx, std::stol(factor.substr(2)));
      } else if (factor.rfind("q^(", 0) == 0 && factor.back() == ')') {
        v = v * CycloValue::q_power(ctx, parse_rational(factor.substr(3, factor.size() - 4)));
      } else if (first) {
        v = v.scale(parse_rational(factor));
      } else {
        throw Error("cyclo: bad factor '" + factor + "'");
      }
      first = false;
    }
    out += v;
  }
  return out;
}

}  // namespace padicvol
