#pragma once

#include <climits>
#include <string>
#include <vector>

#include "field.hpp"

namespace padicvol {

/**
 * @brief Element of K((u)), u^N = t, known to a finite u-adic precision.
 *
 * Three states: exactly zero, zero to precision (valuation ≥ prec, unknown),
 * and a nonzero element whose leading coefficient is known. `prec == kInf`
 * marks coefficients known exactly (a finite Laurent polynomial).
 */
class TruncatedSeries {
 public:
  static constexpr long kInf = LONG_MAX / 4;

  TruncatedSeries() = default;
  TruncatedSeries(FieldDescriptor K, int N = 1) : K_(std::move(K)), N_(N), val_(kInf), prec_(kInf) {}

  /// Exact series Σ coeffs[i] u^{val+i}.
  static TruncatedSeries exact(FieldDescriptor K, int N, long val, std::vector<Code> coeffs) {
    TruncatedSeries s(std::move(K), N);
    s.val_ = val;
    s.coeffs_ = std::move(coeffs);
    s.prec_ = kInf;
    s.normalize();
    return s;
  }
  /// Series known modulo u^prec.
  static TruncatedSeries approx(FieldDescriptor K, int N, long val, std::vector<Code> coeffs, long prec) {
    TruncatedSeries s(std::move(K), N);
    s.val_ = val;
    s.prec_ = prec;
    if (prec < val) prec = val;
    coeffs.resize(static_cast<std::size_t>(std::max(0L, prec - val)), 0);
    s.coeffs_ = std::move(coeffs);
    s.normalize();
    return s;
  }
  static TruncatedSeries constant(FieldDescriptor K, int N, Code c) { return exact(std::move(K), N, 0, {c}); }
  static TruncatedSeries monomial(FieldDescriptor K, int N, Code c, long e) { return exact(std::move(K), N, e, {c}); }
  static TruncatedSeries zero_to(FieldDescriptor K, int N, long prec) { return approx(std::move(K), N, prec, {}, prec); }

  const FieldDescriptor& field() const { return K_; }
  int ram_index() const { return N_; }
  bool is_exact() const { return prec_ == kInf; }
  bool is_exact_zero() const { return prec_ == kInf && coeffs_.empty(); }
  /// True when no nonzero coefficient is known (exact zero or zero to precision).
  bool is_zero() const { return coeffs_.empty(); }
  bool valuation_known() const { return !coeffs_.empty(); }
  /// u-adic valuation; for zero-to-precision elements a lower bound (= prec).
  long val() const { return val_; }
  long prec() const { return prec_; }
  Code leading() const { return coeffs_.empty() ? 0 : coeffs_.front(); }
  const std::vector<Code>& coeffs() const { return coeffs_; }

  /// Coefficient of u^k; throws when k is beyond the known precision.
  Code coeff(long k) const {
    if (k >= prec_) throw Error("coefficient beyond precision");
    if (coeffs_.empty() || k < val_) return 0;
    auto i = static_cast<std::size_t>(k - val_);
    return i < coeffs_.size() ? coeffs_[i] : 0;
  }
  /// Largest exponent with a stored coefficient (for exact elements).
  long degree() const { return coeffs_.empty() ? -kInf : val_ + static_cast<long>(coeffs_.size()) - 1; }

  TruncatedSeries operator+(const TruncatedSeries& o) const { return combine(o, false); }
  TruncatedSeries operator-(const TruncatedSeries& o) const { return combine(o, true); }
  TruncatedSeries operator-() const {
    TruncatedSeries s = *this;
    for (auto& c : s.coeffs_) c = K_->neg(c);
    return s;
  }
  TruncatedSeries operator*(const TruncatedSeries& o) const {
    check(o);
    TruncatedSeries s(K_, N_);
    if (is_exact_zero() || o.is_exact_zero()) return s;
    long v = add_val(val_, o.val_);
    long p1 = add_val(val_, o.prec_), p2 = add_val(o.val_, prec_);
    long pr = std::min(p1, p2);
    s.val_ = v;
    s.prec_ = pr;
    if (coeffs_.empty() || o.coeffs_.empty()) {
      s.coeffs_.clear();
      s.val_ = pr;
      return s;
    }
    std::size_t len = coeffs_.size() + o.coeffs_.size() - 1;
    if (pr != kInf) len = std::min<std::size_t>(len, static_cast<std::size_t>(std::max(0L, pr - v)));
    s.coeffs_.assign(len, 0);
    for (std::size_t i = 0; i < coeffs_.size() && i < len; ++i) {
      if (coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < o.coeffs_.size() && i + j < len; ++j)
        s.coeffs_[i + j] = K_->add(s.coeffs_[i + j], K_->mul(coeffs_[i], o.coeffs_[j]));
    }
    if (pr != kInf) s.coeffs_.resize(static_cast<std::size_t>(std::max(0L, pr - v)), 0);
    s.normalize();
    return s;
  }
  TruncatedSeries scale(Code c) const {
    if (c == 0) return is_exact() ? TruncatedSeries(K_, N_) : zero_to(K_, N_, prec_);
    TruncatedSeries s = *this;
    for (auto& x : s.coeffs_) x = K_->mul(x, c);
    return s;
  }
  /// Multiplication by u^k.
  TruncatedSeries shift(long k) const {
    TruncatedSeries s = *this;
    if (s.val_ != kInf) s.val_ += k;
    if (s.prec_ != kInf) s.prec_ += k;
    return s;
  }
  /// Forgets coefficients at and beyond u^prec.
  TruncatedSeries truncate(long prec) const {
    if (prec >= prec_) return *this;
    TruncatedSeries s(K_, N_);
    s.prec_ = prec;
    s.val_ = val_;
    s.coeffs_ = coeffs_;
    if (val_ >= prec || coeffs_.empty()) {
      s.coeffs_.clear();
      s.val_ = prec;
      return s;
    }
    s.coeffs_.resize(static_cast<std::size_t>(prec - val_), 0);
    s.normalize();
    return s;
  }
  /**
   * @brief Multiplicative inverse with `rel_prec` correct terms beyond the leading one.
   *
   * For inexact inputs the relative precision is capped by the input's.
   */
  TruncatedSeries inverse(long rel_prec) const {
    if (!valuation_known()) throw Error("inverse of a series with unknown valuation");
    long rp = prec_ == kInf ? rel_prec : std::min(rel_prec, prec_ - val_);
    std::vector<Code> b(static_cast<std::size_t>(rp), 0);
    Code a0inv = K_->inv(coeffs_[0]);
    for (long k = 0; k < rp; ++k) {
      Code acc = k == 0 ? 1 : 0;
      for (long i = 1; i <= k; ++i) {
        Code ai = static_cast<std::size_t>(i) < coeffs_.size() ? coeffs_[static_cast<std::size_t>(i)] : 0;
        if (ai != 0) acc = K_->sub(acc, K_->mul(ai, b[static_cast<std::size_t>(k - i)]));
      }
      b[static_cast<std::size_t>(k)] = K_->mul(acc, a0inv);
    }
    return approx(K_, N_, -val_, std::move(b), -val_ + rp);
  }
  TruncatedSeries pow(unsigned e) const {
    TruncatedSeries r = constant(K_, N_, 1);
    for (TruncatedSeries b = *this; e; e >>= 1, b = b * b)
      if (e & 1) r = r * b;
    return r;
  }
  /**
   * @brief The N-th root of a series with leading term c·u^{kN}, given a chosen N-th root rho of c.
   *
   * Solves y^N = x coefficient by coefficient; requires p ∤ N. Returns `rel_prec` terms.
   */
  TruncatedSeries nth_root(unsigned n, Code rho, long rel_prec) const {
    if (!valuation_known()) throw Error("nth_root of a series with unknown valuation");
    if (val_ % static_cast<long>(n) != 0) throw Error("nth_root: valuation not divisible");
    if (K_->pow(rho, n) != coeffs_[0]) throw Error("nth_root: rho is not a root of the leading coefficient");
    if (n % K_->p == 0) throw Error("nth_root: p divides n");
    long rp = prec_ == kInf ? rel_prec : std::min(rel_prec, prec_ - val_);
    // normalized unit w = x / (c u^val) = 1 + ...; y = rho·u^{val/n}·w^{1/n}
    Code cinv = K_->inv(coeffs_[0]);
    std::vector<Code> w(static_cast<std::size_t>(rp), 0);
    for (long i = 0; i < rp && static_cast<std::size_t>(i) < coeffs_.size(); ++i)
      w[static_cast<std::size_t>(i)] = K_->mul(coeffs_[static_cast<std::size_t>(i)], cinv);
    std::vector<Code> y(static_cast<std::size_t>(rp), 0);
    y[0] = 1;
    Code ninv = K_->inv(K_->from_int(static_cast<long>(n)));
    auto yN = [&](long upto) {
      TruncatedSeries ys = approx(K_, 1, 0, y, upto);
      return ys.pow(n);
    };
    for (long k = 1; k < rp; ++k) {
      TruncatedSeries cur = yN(k + 1);
      Code diff = K_->sub(cur.coeff(k), w[static_cast<std::size_t>(k)]);
      y[static_cast<std::size_t>(k)] = K_->sub(y[static_cast<std::size_t>(k)], K_->mul(diff, ninv));
    }
    for (auto& c : y) c = K_->mul(c, rho);
    return approx(K_, N_, val_ / static_cast<long>(n), std::move(y), val_ / static_cast<long>(n) + rp);
  }

  /// The automorphism u ↦ ζu (coefficient of u^k scaled by ζ^k).
  TruncatedSeries act(Code zeta) const {
    TruncatedSeries s = *this;
    for (std::size_t i = 0; i < s.coeffs_.size(); ++i)
      if (s.coeffs_[i] != 0) s.coeffs_[i] = K_->mul(s.coeffs_[i], K_->pow(zeta, val_ + static_cast<long>(i)));
    return s;
  }
  /// Coefficientwise x ↦ x^{p^k}; fixes u.
  TruncatedSeries frobenius(std::uint32_t k) const {
    TruncatedSeries s = *this;
    for (auto& c : s.coeffs_) c = K_->frob(c, k);
    return s;
  }
  /// Residue modulo u, for integral elements known to precision ≥ 1.
  Code residue() const {
    if (prec_ < 1) throw Error("residue: insufficient precision");
    if (!coeffs_.empty() && val_ < 0) throw Error("residue: element not integral");
    return coeff(0);
  }
  /// Reinterprets a series in t as a series in u with u^N = t.
  TruncatedSeries ramify(int N) const {
    if (N_ != 1) throw Error("ramify: input must be a series in t");
    TruncatedSeries s(K_, N);
    if (coeffs_.empty()) {
      s.val_ = val_ == kInf ? kInf : val_ * N;
      s.prec_ = prec_ == kInf ? kInf : prec_ * N;
      return s;
    }
    s.val_ = val_ * N;
    s.prec_ = prec_ == kInf ? kInf : prec_ * N;
    std::size_t len = (coeffs_.size() - 1) * static_cast<std::size_t>(N) + 1;
    if (s.prec_ != kInf) len = static_cast<std::size_t>(s.prec_ - s.val_);
    s.coeffs_.assign(len, 0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) s.coeffs_[i * static_cast<std::size_t>(N)] = coeffs_[i];
    return s;
  }

  bool operator==(const TruncatedSeries& o) const {
    return N_ == o.N_ && val_ == o.val_ && prec_ == o.prec_ && coeffs_ == o.coeffs_;
  }
  bool operator!=(const TruncatedSeries& o) const { return !(*this == o); }

  std::string str() const {
    if (is_exact_zero()) return "0";
    std::string var = N_ == 1 ? "t" : "u";
    std::string s;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i] == 0) continue;
      long e = val_ + static_cast<long>(i);
      std::string c = K_->str(coeffs_[i]);
      if (c.find('+') != std::string::npos) c = "(" + c + ")";
      std::string term;
      if (e == 0)
        term = c;
      else
        term = (c == "1" ? "" : c + "*") + var + (e == 1 ? "" : "^" + std::to_string(e));
      s += (s.empty() ? "" : " + ") + term;
    }
    if (prec_ != kInf) s += std::string(s.empty() ? "" : " + ") + "O(" + var + "^" + std::to_string(prec_) + ")";
    return s;
  }

 private:
  FieldDescriptor K_;
  int N_ = 1;
  long val_ = kInf;
  long prec_ = kInf;
  std::vector<Code> coeffs_;

  static long add_val(long a, long b) { return (a == kInf || b == kInf) ? kInf : a + b; }

  void check(const TruncatedSeries& o) const {
    if (K_.get() != o.K_.get() || N_ != o.N_) throw Error("series arithmetic across different rings");
  }

  void normalize() {
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead == coeffs_.size()) {
      coeffs_.clear();
      val_ = prec_;
      return;
    }
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
    val_ += static_cast<long>(lead);
    if (prec_ == kInf)
      while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  TruncatedSeries combine(const TruncatedSeries& o, bool subtract) const {
    check(o);
    TruncatedSeries s(K_, N_);
    s.prec_ = std::min(prec_, o.prec_);
    long v = std::min(val_, o.val_);
    if (v == kInf) return s;
    if (v >= s.prec_) return zero_to(K_, N_, s.prec_);
    long end = s.prec_;
    if (end == kInf) end = std::max(degree(), o.degree()) + 1;
    s.val_ = v;
    s.coeffs_.assign(static_cast<std::size_t>(end - v), 0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      long e = val_ + static_cast<long>(i);
      if (e < end) s.coeffs_[static_cast<std::size_t>(e - v)] = coeffs_[i];
    }
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
      long e = o.val_ + static_cast<long>(i);
      if (e >= end) continue;
      Code c = subtract ? K_->neg(o.coeffs_[i]) : o.coeffs_[i];
      auto& dst = s.coeffs_[static_cast<std::size_t>(e - v)];
      dst = K_->add(dst, c);
    }
    s.normalize();
    return s;
  }
};

/**
 * @brief Arithmetic context for O_L = K[[u]], u^N = t, with its μ_N-action u ↦ ζu.
 */
struct RamifiedContext {
  FieldDescriptor K;
  int N = 1;
  long precision = 0;

  TruncatedSeries uniformizer() const { return TruncatedSeries::monomial(K, N, 1, 1); }
  TruncatedSeries t() const { return TruncatedSeries::monomial(K, N, 1, N); }
  /// The action of ζ ∈ μ_N(K) on O_L; ζ must satisfy ζ^N = 1.
  TruncatedSeries act(Code zeta, const TruncatedSeries& x) const {
    if (K->pow(zeta, N) != 1) throw Error("act: not an N-th root of unity");
    return x.act(zeta);
  }
  TruncatedSeries lift(const TruncatedSeries& x_in_t) const { return x_in_t.ramify(N).truncate(precision); }
};

inline RamifiedContext adjoin_ramified_root(FieldDescriptor K, long precision, int N) {
  if (N < 1) throw Error("adjoin_ramified_root: N must be positive");
  if (N % static_cast<int>(K->p) == 0) throw Error("adjoin_ramified_root: wild ramification (p | N) unsupported");
  return RamifiedContext{std::move(K), N, precision};
}

}  // namespace padicvol
