#pragma once

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "series.hpp"

namespace padicvol {

using Exponent = std::vector<int>;

/**
 * @brief Polynomial in n variables with coefficients in K((t)).
 *
 * Coefficients are TruncatedSeries with ram_index 1; zero terms are never stored.
 */
class Poly {
 public:
  Poly() = default;
  Poly(FieldDescriptor K, int n) : K_(std::move(K)), n_(n) {}

  static Poly constant(FieldDescriptor K, int n, const TruncatedSeries& c) {
    Poly f(std::move(K), n);
    f.add_term(Exponent(static_cast<std::size_t>(n), 0), c);
    return f;
  }
  static Poly variable(FieldDescriptor K, int n, int i) {
    Poly f(K, n);
    Exponent e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 1;
    f.add_term(e, TruncatedSeries::constant(K, 1, 1));
    return f;
  }

  const FieldDescriptor& field() const { return K_; }
  int nvars() const { return n_; }
  const std::map<Exponent, TruncatedSeries>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      (void)c;
      int s = 0;
      for (int x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  void add_term(const Exponent& e, const TruncatedSeries& c) {
    if (c.is_exact_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
      return;
    }
    it->second = it->second + c;
    if (it->second.is_exact_zero()) terms_.erase(it);
  }

  Poly operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }
  Poly operator-() const {
    Poly r(K_, n_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }
  Poly operator-(const Poly& o) const { return *this + (-o); }
  Poly operator*(const Poly& o) const {
    Poly r(K_, n_);
    for (const auto& [a, ca] : terms_)
      for (const auto& [b, cb] : o.terms_) {
        Exponent e(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) e[i] = a[i] + b[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  Poly pow(unsigned k) const {
    Poly r = constant(K_, n_, TruncatedSeries::constant(K_, 1, 1));
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }
  Poly scale(const TruncatedSeries& c) const {
    Poly r(K_, n_);
    for (const auto& [e, x] : terms_) r.add_term(e, x * c);
    return r;
  }

  /// Evaluation at a point of (K((t)))^n.
  TruncatedSeries eval(const std::vector<TruncatedSeries>& x) const {
    TruncatedSeries acc(K_, 1);
    std::vector<std::vector<TruncatedSeries>> pw(static_cast<std::size_t>(n_));
    for (const auto& [e, c] : terms_) {
      TruncatedSeries m = c;
      for (int i = 0; i < n_; ++i) {
        auto& cache = pw[static_cast<std::size_t>(i)];
        if (cache.empty()) cache.push_back(TruncatedSeries::constant(K_, 1, 1));
        while (static_cast<int>(cache.size()) <= e[static_cast<std::size_t>(i)])
          cache.push_back(cache.back() * x[static_cast<std::size_t>(i)]);
        if (e[static_cast<std::size_t>(i)] > 0) m = m * cache[static_cast<std::size_t>(e[static_cast<std::size_t>(i)])];
      }
      acc = acc + m;
    }
    return acc;
  }

  /// Reduction mod t: coefficients as residue-field Codes (coefficients must be integral).
  std::map<Exponent, Code> residue_terms() const {
    std::map<Exponent, Code> out;
    for (const auto& [e, c] : terms_) {
      Code r = c.residue();
      if (r != 0) out[e] = r;
    }
    return out;
  }

  /**
   * @brief Taylor coefficients at c: f(c + y) = Σ_k g_k y^k, with g_k the Hasse derivative D^k f(c).
   */
  std::map<Exponent, TruncatedSeries> taylor(const std::vector<TruncatedSeries>& c) const {
    std::map<Exponent, TruncatedSeries> g;
    std::vector<std::vector<TruncatedSeries>> pw(static_cast<std::size_t>(n_));
    int maxdeg = 0;
    for (const auto& [e, x] : terms_) {
      (void)x;
      for (int v : e) maxdeg = std::max(maxdeg, v);
    }
    for (int i = 0; i < n_; ++i) {
      auto& P = pw[static_cast<std::size_t>(i)];
      P.push_back(TruncatedSeries::constant(K_, 1, 1));
      for (int k = 1; k <= maxdeg; ++k) P.push_back(P.back() * c[static_cast<std::size_t>(i)]);
    }
    for (const auto& [a, coef] : terms_) {
      Exponent k(a.size(), 0);
      while (true) {
        Code b = 1;
        for (std::size_t i = 0; i < a.size(); ++i) b = K_->mul(b, binom_mod(a[i], k[i]));
        if (b != 0) {
          TruncatedSeries term = coef.scale(b);
          for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] - k[i] > 0) term = term * pw[i][static_cast<std::size_t>(a[i] - k[i])];
          auto it = g.find(k);
          if (it == g.end())
            g.emplace(k, term);
          else
            it->second = it->second + term;
        }
        std::size_t i = 0;
        while (i < a.size() && k[i] == a[i]) k[i++] = 0;
        if (i == a.size()) break;
        ++k[i];
      }
    }
    for (auto it = g.begin(); it != g.end();)
      it = it->second.is_exact_zero() ? g.erase(it) : std::next(it);
    return g;
  }

  /// Partial derivative in variable i.
  Poly derivative(int i) const {
    Poly r(K_, n_);
    for (const auto& [e, c] : terms_) {
      int k = e[static_cast<std::size_t>(i)];
      if (k == 0) continue;
      Exponent d = e;
      --d[static_cast<std::size_t>(i)];
      r.add_term(d, c.scale(K_->from_int(k)));
    }
    return r;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      std::string mon;
      for (int i = 0; i < n_; ++i) {
        int k = it->first[static_cast<std::size_t>(i)];
        if (k == 0) continue;
        if (!mon.empty()) mon += "*";
        mon += "x" + std::to_string(i) + (k > 1 ? "^" + std::to_string(k) : "");
      }
      std::string c = "(" + it->second.str() + ")";
      s += (s.empty() ? "" : " + ") + (mon.empty() ? c : c + "*" + mon);
    }
    return s;
  }

 private:
  FieldDescriptor K_;
  int n_ = 0;
  std::map<Exponent, TruncatedSeries> terms_;

  Code binom_mod(int a, int k) const {
    // Lucas-free: small degrees, compute exactly then reduce
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(k));
    Integer m = b % Integer(K_->p);
    return static_cast<Code>(m.get_ui());
  }
};

/**
 * @brief Parses expressions like "x0^2 - t", "y^2 - x^3 - x", "x*y - 1".
 *
 * Variables: x0..x9, or x, y, z, w for the first four; `t` is the uniformizer.
 * Integer literals are read mod p. Operators: + - * ^ and parentheses.
 */
class PolyParser {
 public:
  PolyParser(FieldDescriptor K, int n) : K_(std::move(K)), n_(n) {}

  Poly parse(const std::string& text) {
    s_ = text;
    pos_ = 0;
    Poly r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  FieldDescriptor K_;
  int n_;
  std::string s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("polynomial parse error at " + std::to_string(pos_) + " in \"" + s_ + "\": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Poly expr() {
    Poly r = term();
    while (true) {
      if (accept('+'))
        r = r + term();
      else if (accept('-'))
        r = r - term();
      else
        return r;
    }
  }
  Poly term() {
    Poly r = unary();
    while (accept('*')) r = r * unary();
    return r;
  }
  Poly unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    Poly b = primary();
    if (accept('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      b = b.pow(static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start))));
    }
    return b;
  }
  Poly primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      Integer v(s_.substr(start, pos_ - start));
      Integer m = v % Integer(K_->p);
      return Poly::constant(K_, n_, TruncatedSeries::constant(K_, 1, static_cast<Code>(m.get_ui())));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id == "t") return Poly::constant(K_, n_, TruncatedSeries::monomial(K_, 1, 1, 1));
      int idx = -1;
      if (id == "x") idx = 0;
      if (id == "y") idx = 1;
      if (id == "z") idx = 2;
      if (id == "w") idx = 3;
      if (id.size() >= 2 && id[0] == 'x' && std::isdigit(static_cast<unsigned char>(id[1]))) idx = std::stoi(id.substr(1));
      if (idx < 0 || idx >= n_) fail("unknown variable '" + id + "'");
      return Poly::variable(K_, n_, idx);
    }
    fail("unexpected character");
  }
};

inline Poly parse_poly(const FieldDescriptor& K, int n, const std::string& text) { return PolyParser(K, n).parse(text); }

}  // namespace padicvol
