#pragma once

#include <map>
#include <string>
#include <thread>
#include <vector>

#include "parallel.hpp"
#include "poly.hpp"
#include "volume.hpp"

namespace padicvol {

/// Integrand |f|^s on O_F^n. The gauge-form case ω = f·(dx)^{⊗r} is s = 1/r.
struct FormIntegrand {
  Poly f;
  Rational s;

  static FormIntegrand gauge(Poly f, int r) {
    if (r < 1) throw Error("FormIntegrand: r must be positive");
    return {std::move(f), Rational(1, r)};
  }
};

struct IntegrateOptions {
  std::uint64_t max_cells = 100000000;
  unsigned jobs = 1;
};

/// Π_i (1 - q^{-1}) / (1 - q^{-1 - e_i/r}): the integral of |Π x_i^{e_i}|^{1/r} over O_F^n.
inline VolumeValue integrate_monomial(const std::vector<int>& e, int r, std::uint64_t q) {
  if (r < 1) throw Error("integrate_monomial: r must be positive");
  VolumeValue one = VolumeValue::with_base(q, 1);
  VolumeValue res = one;
  for (int ei : e) {
    if (ei < 0) throw Error("integrate_monomial: negative exponent");
    VolumeValue num = one - VolumeValue::q_power(q, -1);
    VolumeValue den = one - VolumeValue::q_power(q, Rational(-1) - Rational(ei, r));
    res = res * num / den;
  }
  return res;
}

namespace detail {

/// Exact accumulator Σ count·q^{-exponent}; merges are order-independent.
struct MassAccumulator {
  std::map<Rational, Integer> mass;
  void add(const Rational& e, const Integer& c = 1) {
    auto it = mass.find(e);
    if (it == mass.end())
      mass.emplace(e, c);
    else
      it->second += c;
  }
  void merge(const MassAccumulator& o) {
    for (const auto& [e, c] : o.mass) add(e, c);
  }
  VolumeValue value(std::uint64_t q) const {
    VolumeValue v = VolumeValue::with_base(q, 0);
    for (const auto& [e, c] : mass) v += VolumeValue::q_power(q, -e) * VolumeValue(Rational(c));
    return v;
  }
};

struct AdaptiveState {
  MassAccumulator exact;     // determined cells
  MassAccumulator hi_extra;  // upper-bound slack of undetermined cells (s ≥ 0) or lower bounds (s < 0)
  MassAccumulator hensel;    // s < 0: mass·|b|^s to be scaled by (1-q^{-1})/(1-q^{-1-s})
  bool unbounded = false;
  std::uint64_t cells = 0;
};

class AdaptiveIntegrator {
 public:
  AdaptiveIntegrator(const FormIntegrand& f, int max_level, const IntegrateOptions& opt)
      : f_(f), K_(f.f.field()), n_(f.f.nvars()), max_level_(max_level), opt_(opt) {}

  /// Handles the cell if it is determined or at max level; false means "subdivide".
  bool decide(int m, const std::vector<TruncatedSeries>& center, AdaptiveState& st) const {
    if (++st.cells > opt_.max_cells) throw GuardError("integrate_adaptive: cell budget exceeded");
    auto g = f_.f.taylor(center);
    const Exponent zero(static_cast<std::size_t>(n_), 0);
    const long inf = TruncatedSeries::kInf;
    long va = inf;
    if (auto it = g.find(zero); it != g.end() && !it->second.is_zero()) va = it->second.val();
    long vmin = inf;
    bool unique_linear = false;  // minimum attained only by one linear term
    for (const auto& [k, c] : g) {
      int deg = 0;
      for (int x : k) deg += x;
      if (deg == 0 || c.is_zero()) continue;
      long nu = static_cast<long>(m) * deg + c.val();
      if (nu < vmin) {
        vmin = nu;
        unique_linear = (deg == 1);
      } else if (nu == vmin) {
        unique_linear = false;
      }
    }
    const Rational mass_e(static_cast<long>(m) * n_);  // Haar mass q^{-mn}
    if (va < vmin) {
      st.exact.add(mass_e + Rational(va) * f_.s);
      return true;
    }
    if (va == inf && vmin == inf) {  // f vanishes identically on the cell
      if (f_.s < 0) st.unbounded = true;
      if (f_.s == 0) st.exact.add(mass_e);
      return true;
    }
    if (m < max_level_) return false;
    const long vk = std::min(va, vmin);
    st.hi_extra.add(mass_e + Rational(vk) * f_.s);
    if (f_.s < 0) {
      if (unique_linear)
        st.hensel.add(mass_e + Rational(vmin) * f_.s);
      else
        st.unbounded = true;
    }
    return true;
  }

  void run_cell(int m, const std::vector<TruncatedSeries>& center, AdaptiveState& st) const {
    if (decide(m, center, st)) return;
    std::vector<TruncatedSeries> child = center;
    std::vector<Code> b(static_cast<std::size_t>(n_), 0);
    const std::uint64_t q = K_->q;
    while (true) {
      for (int i = 0; i < n_; ++i)
        child[static_cast<std::size_t>(i)] =
            center[static_cast<std::size_t>(i)] + TruncatedSeries::monomial(K_, 1, b[static_cast<std::size_t>(i)], m);
      run_cell(m + 1, child, st);
      int i = 0;
      while (i < n_ && b[static_cast<std::size_t>(i)] == q - 1) b[static_cast<std::size_t>(i++)] = 0;
      if (i == n_) break;
      ++b[static_cast<std::size_t>(i)];
    }
  }

  IntervalVolume run() const {
    const std::uint64_t q = K_->q;
    std::vector<TruncatedSeries> root(static_cast<std::size_t>(n_), TruncatedSeries(K_, 1));
    AdaptiveState top;
    if (!decide(0, root, top)) {
      // level-1 cells in parallel; per-task accumulators merge exactly
      std::uint64_t ncells = ipow(q, static_cast<unsigned>(n_));
      auto parts = parallel_map(opt_.jobs, ncells, [&](std::uint64_t idx) {
        AdaptiveState st;
        std::vector<TruncatedSeries> c;
        std::uint64_t x = idx;
        for (int i = 0; i < n_; ++i, x /= q) c.push_back(TruncatedSeries::constant(K_, 1, static_cast<Code>(x % q)));
        run_cell(1, c, st);
        return st;
      });
      for (auto& st : parts) {
        top.exact.merge(st.exact);
        top.hi_extra.merge(st.hi_extra);
        top.hensel.merge(st.hensel);
        top.unbounded = top.unbounded || st.unbounded;
        top.cells += st.cells;
      }
      if (top.cells > opt_.max_cells) throw GuardError("integrate_adaptive: cell budget exceeded");
    }
    IntervalVolume out;
    VolumeValue ex = top.exact.value(q);
    VolumeValue extra = top.hi_extra.value(q);
    if (f_.s >= 0) {
      out.lo = ex;
      out.hi = ex + extra;
    } else {
      // on a cell with a strictly dominant linear term b the integral is mass·|b|^s·∫_O|z|^s
      VolumeValue one = VolumeValue::with_base(q, 1);
      VolumeValue factor = (one - VolumeValue::q_power(q, -1)) / (one - VolumeValue::q_power(q, Rational(-1) - f_.s));
      out.lo = ex + extra;
      out.hi = ex + top.hensel.value(q) * factor;
      out.bounded = !top.unbounded;
    }
    return out;
  }

 private:
  const FormIntegrand& f_;
  FieldDescriptor K_;
  int n_;
  int max_level_;
  IntegrateOptions opt_;
};

}  // namespace detail

/**
 * @brief Interval enclosing ∫_{O_F^n} |f|^s by adaptive cell refinement.
 *
 * A cell c + t^m O^n is determined when v(f(c)) is smaller than every
 * m|k| + v(D^k f(c)), k ≠ 0. Undetermined cells at max_level are bracketed:
 * [0, mass·q^{-s·v_known}] for s ≥ 0; for s < 0 a strictly dominant linear
 * term b gives [mass·q^{-s·v_known}, mass·|b|^s·(1-q^{-1})/(1-q^{-1-s})].
 */
inline IntervalVolume integrate_adaptive(const FormIntegrand& f, int max_level, const IntegrateOptions& opt = {}) {
  if (max_level < 0) throw Error("integrate_adaptive: negative level");
  if (f.s <= -1) throw Error("integrate_adaptive: exponent must exceed -1");
  for (const auto& [e, c] : f.f.terms()) {
    (void)e;
    if (!c.is_exact()) throw Error("integrate_adaptive: coefficients must be exact");
  }
  return detail::AdaptiveIntegrator(f, max_level, opt).run();
}

/// Smooth affine O_F-scheme given by equations in n variables, of relative dimension d.
struct AffineSchemeDesc {
  int n = 0;
  std::vector<Poly> equations;
  int d = 0;
  std::string name;
};

namespace detail {

struct ResiduePoly {
  std::vector<std::pair<Exponent, Code>> terms;
};

inline Code eval_residue(const Field& F, const ResiduePoly& f, const std::vector<Code>& x) {
  Code acc = 0;
  for (const auto& [e, c] : f.terms) {
    Code m = c;
    for (std::size_t i = 0; i < e.size() && m; ++i)
      if (e[i]) m = F.mul(m, F.pow(x[i], e[i]));
    acc = F.add(acc, m);
  }
  return acc;
}

inline std::size_t rank_mod(const Field& F, std::vector<std::vector<Code>> M) {
  std::size_t rank = 0;
  const std::size_t rows = M.size(), cols = rows ? M[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && M[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(M[piv], M[rank]);
    Code inv = F.inv(M[rank][c]);
    for (auto& x : M[rank]) x = F.mul(x, inv);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || M[r][c] == 0) continue;
      Code f = M[r][c];
      for (std::size_t j = 0; j < cols; ++j) M[r][j] = F.sub(M[r][j], F.mul(f, M[rank][j]));
    }
    ++rank;
  }
  return rank;
}

/// k-points of X where the Jacobian mod t has rank n - d.
inline std::vector<std::vector<Code>> smooth_points(const AffineSchemeDesc& X, const Field& F, std::uint64_t max_cells) {
  std::vector<ResiduePoly> eqs, jac;
  for (const auto& f : X.equations) {
    ResiduePoly r;
    for (const auto& [e, c] : f.residue_terms()) r.terms.emplace_back(e, c);
    eqs.push_back(r);
    for (int j = 0; j < X.n; ++j) {
      ResiduePoly dj;
      for (const auto& [e, c] : f.derivative(j).residue_terms()) dj.terms.emplace_back(e, c);
      jac.push_back(dj);
    }
  }
  const std::uint64_t total = ipow(F.q, static_cast<unsigned>(X.n));
  if (total > max_cells) throw GuardError("count_smooth_points: enumeration exceeds cell budget");
  std::vector<std::vector<Code>> out;
  std::vector<Code> x(static_cast<std::size_t>(X.n), 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t v = idx;
    for (int i = 0; i < X.n; ++i, v /= F.q) x[static_cast<std::size_t>(i)] = static_cast<Code>(v % F.q);
    bool ok = true;
    for (const auto& f : eqs)
      if (eval_residue(F, f, x) != 0) {
        ok = false;
        break;
      }
    if (!ok) continue;
    if (!eqs.empty()) {
      std::vector<std::vector<Code>> J(eqs.size(), std::vector<Code>(static_cast<std::size_t>(X.n)));
      for (std::size_t i = 0; i < eqs.size(); ++i)
        for (int j = 0; j < X.n; ++j) J[i][static_cast<std::size_t>(j)] = eval_residue(F, jac[i * static_cast<std::size_t>(X.n) + static_cast<std::size_t>(j)], x);
      if (rank_mod(F, J) != static_cast<std::size_t>(X.n - X.d)) continue;
    } else if (X.d != X.n) {
      continue;
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace detail

/// Smooth F_q-points of the special fiber (singular points are excluded, not rejected).
inline std::uint64_t count_smooth_points(const AffineSchemeDesc& X, const FieldDescriptor& K, std::uint64_t max_cells = 100000000) {
  return detail::smooth_points(X, *K, max_cells).size();
}

/// |X(k)| / q^d; the fiber of the reduction map over each counted point has volume q^{-d}.
inline VolumeValue weil_volume(const AffineSchemeDesc& X, const FieldDescriptor& K, std::uint64_t max_cells = 100000000) {
  std::uint64_t c = count_smooth_points(X, K, max_cells);
  return VolumeValue::with_base(K->q, Rational(Integer(static_cast<unsigned long>(c)), Integer(static_cast<unsigned long>(ipow(K->q, static_cast<unsigned>(X.d))))));
}

inline VolumeValue weil_fiber_volume(const AffineSchemeDesc& X, const FieldDescriptor& K) {
  return VolumeValue::q_power(K->q, -X.d);
}

/**
 * @brief Number of solutions in (O/t^m)^n reducing to smooth k-points, by level-wise brute force.
 */
inline Integer lift_count(const AffineSchemeDesc& X, const FieldDescriptor& K, int m, std::uint64_t max_cells = 100000000) {
  if (m < 1) throw Error("lift_count: m must be positive");
  const std::uint64_t q = K->q;
  auto base = detail::smooth_points(X, *K, max_cells);
  using Point = std::vector<TruncatedSeries>;
  std::vector<Point> level;
  for (const auto& x : base) {
    Point pt;
    for (Code c : x) pt.push_back(TruncatedSeries::approx(K, 1, 0, {c}, 1));
    level.push_back(pt);
  }
  if (m == 1) return Integer(static_cast<unsigned long>(level.size()));
  const std::uint64_t nb = ipow(q, static_cast<unsigned>(X.n));
  std::uint64_t work = 0;
  for (int k = 1; k < m; ++k) {
    const bool last = (k == m - 1);
    if (X.equations.empty() && last) {
      // every candidate is a solution; nothing to evaluate
      return Integer(static_cast<unsigned long>(level.size())) * Integer(static_cast<unsigned long>(nb));
    }
    std::vector<Point> next;
    Integer count = 0;
    for (const auto& x : level) {
      for (std::uint64_t idx = 0; idx < nb; ++idx) {
        if (++work > max_cells) throw GuardError("lift_count: enumeration exceeds cell budget");
        Point y;
        std::uint64_t v = idx;
        for (int i = 0; i < X.n; ++i, v /= q) {
          const auto& xi = x[static_cast<std::size_t>(i)];
          std::vector<Code> c(static_cast<std::size_t>(k + 1), 0);
          for (int j = 0; j < k; ++j) c[static_cast<std::size_t>(j)] = xi.coeff(j);
          c[static_cast<std::size_t>(k)] = static_cast<Code>(v % q);
          y.push_back(TruncatedSeries::approx(K, 1, 0, c, k + 1));
        }
        bool ok = true;
        for (const auto& f : X.equations) {
          TruncatedSeries r = f.eval(y);
          if (!r.is_zero() && r.val() < k + 1) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        if (last)
          ++count;
        else
          next.push_back(std::move(y));
      }
    }
    if (last) return count;
    level = std::move(next);
  }
  return Integer(static_cast<unsigned long>(level.size()));
}

}  // namespace padicvol
