#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "orbifold.hpp"

namespace padicvol {

/// An element of Q/Z, kept as a rational in [0, 1).
struct QmodZValue {
  Rational value = 0;

  QmodZValue() = default;
  explicit QmodZValue(Rational v) : value(std::move(v)) {
    value.canonicalize();
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    value -= fl;
  }
  bool operator==(const QmodZValue& o) const { return value == o.value; }
  bool operator!=(const QmodZValue& o) const { return !(*this == o); }
  QmodZValue operator+(const QmodZValue& o) const { return QmodZValue(value + o.value); }
  std::string str() const { return value.get_str(); }
  /// e^{2πiλ} as "re+im*i"; presentation only.
  std::string complex_str(int digits = 6) const {
    const double a = 2 * M_PI * value.get_d();
    std::ostringstream os;
    os.precision(digits);
    os << std::fixed << std::cos(a) << (std::sin(a) < 0 ? "-" : "+") << std::fabs(std::sin(a)) << "i";
    return os.str();
  }
};

/// A G_m-gerbe on Bμ_N, by its class in Z/N.
struct BmuNGerbeClass {
  std::uint64_t N = 1;
  std::uint64_t cls = 0;
};

/// A character μ_N → G_m, i.e. an element of Z/N.
struct MuNCharacter {
  std::uint64_t N = 1;
  std::uint64_t chi = 0;
};

inline void check_modulus(std::uint64_t N) {
  if (N == 0) throw Error("hasse: N must be positive");
}

inline QmodZValue invariant(const BmuNGerbeClass& g) {
  check_modulus(g.N);
  return QmodZValue(Rational(static_cast<long>(g.cls % g.N), static_cast<long>(g.N)));
}

/// The map Z/N → Z/dN induced by μ_N ⊂ μ_{dN}; p = 0 skips the tameness check.
inline BmuNGerbeClass push_along_inclusion(const BmuNGerbeClass& g, std::uint64_t d, std::uint64_t p = 0) {
  check_modulus(g.N);
  if (d == 0) throw Error("push_along_inclusion: d must be positive");
  if (p != 0 && d % p == 0) throw Error("push_along_inclusion: d must be prime to p");
  return {g.N * d, (g.cls % g.N) * d};
}

/// The gerbe α_{L_χ} induced by Frobenius ↦ L_χ.
inline BmuNGerbeClass torsor_gerbe(const MuNCharacter& c) {
  check_modulus(c.N);
  return {c.N, c.chi % c.N};
}

/// A homomorphism Γ → Z/M describing a line bundle on [X/Γ] through its fiber characters.
struct StackCharacter {
  std::uint64_t M = 1;
  std::vector<std::uint64_t> values;  ///< indexed by group element

  void validate(const GroupWithFrobenius& G) const {
    if (values.size() != G.order()) throw Error("character: wrong number of values");
    for (Elem a = 0; a < G.order(); ++a)
      for (Elem b = 0; b < G.order(); ++b)
        if (values[G.mul(a, b)] % M != (values[a] + values[b]) % M) throw Error("character: not a homomorphism");
  }
};

/// Exponent k with h = mu_gen^k, i.e. h ↔ ξ_N^k under the primitive-root convention.
inline std::uint64_t mu_exponent(const QuotientStackDesc& st, Elem h) {
  if (st.mu_N == 0) throw Error("hasse: stack is not a mu_N quotient");
  Elem x = 0;
  for (std::uint64_t k = 0; k < st.mu_N; ++k, x = st.G().mul(x, st.mu_gen))
    if (x == h) return k;
  throw Error("hasse: element outside mu_N");
}

/// L_χ on [X/μ_N]: ξ^k ↦ χk.
inline StackCharacter mu_character(const QuotientStackDesc& st, std::uint64_t chi) {
  StackCharacter L;
  L.M = st.mu_N;
  for (Elem h = 0; h < st.order(); ++h) L.values.push_back(chi * mu_exponent(st, h) % st.mu_N);
  return L;
}

inline QmodZValue chi_of_inertia(const StackCharacter& L, const InertiaClass& cls) {
  if (cls.alpha >= L.values.size()) throw Error("chi_of_inertia: alpha outside the domain of L");
  return QmodZValue(Rational(static_cast<long>(L.values[cls.alpha] % L.M), static_cast<long>(L.M)));
}

/// Smallest Code of K that generates F_q^× ⊂ K^×.
inline Code residue_generator(const QuotientStackDesc& st) {
  const Field& K = *st.K;
  const std::uint64_t m = st.q - 1;
  for (Code c = 1; c < K.q; ++c) {
    if (K.pow(c, static_cast<std::int64_t>(st.q)) != c) continue;
    bool gen = true;
    for (std::uint64_t d = 1; d < m && gen; ++d)
      if (m % d == 0 && K.pow(c, static_cast<std::int64_t>(d)) == 1) gen = false;
    if (gen) return c;
  }
  throw Error("residue_generator: not found");
}

/**
 * @brief Tame symbol (a, b)_N ∈ μ_N ⊂ F_q^× of two elements of F_q((t))^×.
 *
 * ((−1)^{v(a)v(b)} a^{v(b)} b^{−v(a)} mod t)^{(q−1)/N}; only valuations and leading
 * coefficients enter. Leading coefficients must be F_q-rational.
 */
inline Code tame_symbol(const Field& K, std::uint64_t q, std::uint64_t N, long va, Code a0, long vb, Code b0) {
  if ((q - 1) % N != 0) throw Error("tame_symbol: N must divide q - 1");
  if (a0 == 0 || b0 == 0) throw Error("tame_symbol: zero argument");
  Code s = K.mul(K.pow(a0, vb), K.pow(b0, -va));
  if ((va * vb) % 2 != 0) s = K.neg(s);
  return K.pow(s, static_cast<std::int64_t>((q - 1) / N));
}

/// Quadratic Hilbert symbol as ±1 (Legendre symbol of the tame symbol's base).
inline int hilbert_symbol_2(const Field& K, std::uint64_t q, long va, Code a0, long vb, Code b0) {
  return tame_symbol(K, q, 2, va, a0, vb, b0) == 1 ? 1 : -1;
}

struct HasseCheck {
  QmodZValue lhs;  ///< inv(x_F^*α_L) by the tame symbol
  QmodZValue rhs;  ///< χ_L(e(x))
  InertiaClass cls;
  bool equal = false;
};

/**
 * @brief Compares inv(x_F^*α_L) with χ_L(e(x)) at the coarse point U of [A^1/μ_N].
 *
 * U is a series in t over the working field with F_q-rational coefficients and U ≠ 0 mod t^prec.
 * The left side pairs the Kummer class of U with the unramified class (Frobenius ↦ L), computed
 * as the tame symbol (ε, U)_N against η = ε^{(q−1)/N}. The right side lifts U to x = U^{1/N}
 * and specializes.
 */
inline HasseCheck hasse_specialization_check(const QuotientStackDesc& st, std::uint64_t chi, const TruncatedSeries& U, long precision = 8) {
  if (st.n != 1 || st.mu_N == 0) throw Error("hasse_specialization_check: only [A^1/mu_N] is supported");
  if (U.ram_index() != 1) throw Error("hasse_specialization_check: U must be a series in t");
  if (!U.valuation_known() || U.val() < 0) throw Error("hasse_specialization_check: U must be a nonzero integral point");
  const Field& K = *st.K;
  const std::uint64_t N = st.mu_N;
  if ((st.q - 1) % N != 0) throw Error("hasse_specialization_check: requires mu_N in F_q");
  const int Ni = static_cast<int>(N);
  const long v = U.val();
  HasseCheck out;

  // μ_N acts through mu_gen ↦ ξ^w, so the torsor x^N = U is the Kummer class of U^{w^{-1}}
  const Code xi = st.root_of_order(N);
  long w = -1;
  for (long j = 1; j <= Ni && w < 0; ++j)
    if (K.pow(xi, j) == st.group.elems[st.mu_gen](0, 0)) w = j % Ni;
  if (w < 0 || std::gcd(w, static_cast<long>(Ni)) != 1) throw Error("hasse_specialization_check: action is not faithful");
  const long winv = detail::inv_mod_long(w, Ni);

  // Left side: (ε, U)_N = η^k
  Code eps = residue_generator(st);
  Code eta = K.pow(eps, static_cast<std::int64_t>((st.q - 1) / N));
  Code sym = tame_symbol(K, st.q, N, 0, eps, v, U.leading());
  long k = -1;
  for (long j = 0; j < Ni && k < 0; ++j)
    if (K.pow(eta, j) == sym) k = j;
  if (k < 0) throw Error("hasse_specialization_check: tame symbol outside mu_N");
  out.lhs = QmodZValue(Rational(static_cast<long>(chi % N) * winv * k, Ni));

  // Right side: x = U^{1/N} as a series in u = t^{1/N}.
  TruncatedSeries Uu = U.ramify(Ni);
  Code c0 = Uu.leading();
  // ρ^N = c0 = ε^j via θ ∈ μ_{N(q−1)} with θ^N = ε
  Code rho = 0;
  {
    const std::uint64_t M = N * (st.q - 1);
    if ((K.q - 1) % M != 0) throw Error("hasse_specialization_check: working field lacks mu_{N(q-1)}");
    Code z = 0;
    for (Code c = 2; c < K.q && z == 0; ++c) {
      Code cand = K.pow(c, static_cast<std::int64_t>((K.q - 1) / M));
      if (K.order(cand) == M) z = cand;
    }
    if (z == 0) throw Error("hasse_specialization_check: no primitive root of order N(q-1)");
    auto eps_log = [&](Code x) {
      Code y = 1;
      for (std::uint64_t i = 0; i + 1 < st.q; ++i, y = K.mul(y, eps))
        if (y == x) return static_cast<long>(i);
      throw Error("hasse_specialization_check: leading coefficient is not F_q-rational");
    };
    const long m = static_cast<long>(st.q - 1);
    Code theta = K.pow(z, detail::inv_mod_long(eps_log(K.pow(z, Ni)), m));
    rho = K.pow(theta, eps_log(c0));
  }
  TruncatedSeries x = Uu.nth_root(static_cast<unsigned>(N), rho, precision * Ni);
  Code xiv = K.pow(xi, v);
  Elem r = st.order();
  for (Elem h = 0; h < st.order(); ++h)
    if (st.group.elems[h](0, 0) == xiv) r = h;
  if (r == st.order()) throw Error("hasse_specialization_check: no group element acts by xi^v");
  out.cls = specialize({{x}, r}, st);
  out.rhs = chi_of_inertia(mu_character(st, chi), out.cls);
  out.equal = out.lhs == out.rhs;
  return out;
}

}  // namespace padicvol
