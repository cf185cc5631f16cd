#pragma once

#include <optional>
#include <string>
#include <vector>

#include "integrate.hpp"
#include "parallel.hpp"

namespace padicvol {

/// y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6 over K.
struct WeierstrassCurve {
  FieldDescriptor K;
  Code a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
  Code discriminant = 0;

  /// Throws on a singular curve.
  static WeierstrassCurve make(FieldDescriptor K, Code a1, Code a2, Code a3, Code a4, Code a6) {
    WeierstrassCurve E{std::move(K), a1, a2, a3, a4, a6, 0};
    E.discriminant = E.compute_discriminant();
    if (E.discriminant == 0) throw Error("weierstrass: singular curve (discriminant 0)");
    return E;
  }
  static WeierstrassCurve short_form(FieldDescriptor K, long a2, long a4, long a6) {
    const Field& F = *K;
    return make(K, 0, F.from_int(a2), 0, F.from_int(a4), F.from_int(a6));
  }

  /// Left minus right side of the equation at (x, y).
  Code equation(Code x, Code y) const {
    const Field& F = *K;
    Code lhs = F.add(F.mul(y, y), F.mul(y, F.add(F.mul(a1, x), a3)));
    Code rhs = F.add(F.mul(F.add(F.mul(F.add(x, a2), x), a4), x), a6);
    return F.sub(lhs, rhs);
  }
  bool contains(Code x, Code y) const { return equation(x, y) == 0; }

  std::string str() const {
    const Field& F = *K;
    return "[" + F.str(a1) + "," + F.str(a2) + "," + F.str(a3) + "," + F.str(a4) + "," + F.str(a6) + "]";
  }

 private:
  Code compute_discriminant() const {
    const Field& F = *K;
    auto c = [&](long v) { return F.from_int(v); };
    Code b2 = F.add(F.mul(a1, a1), F.mul(c(4), a2));
    Code b4 = F.add(F.mul(a1, a3), F.mul(c(2), a4));
    Code b6 = F.add(F.mul(a3, a3), F.mul(c(4), a6));
    Code b8 = F.sub(F.add(F.sub(F.add(F.mul(F.mul(a1, a1), a6), F.mul(F.mul(c(4), a2), a6)), F.mul(F.mul(a1, a3), a4)), F.mul(F.mul(a2, a3), a3)),
                    F.mul(a4, a4));
    // Δ = −b2²b8 − 8b4³ − 27b6² + 9b2b4b6
    Code d = F.neg(F.mul(F.mul(b2, b2), b8));
    d = F.sub(d, F.mul(c(8), F.mul(F.mul(b4, b4), b4)));
    d = F.sub(d, F.mul(c(27), F.mul(b6, b6)));
    d = F.add(d, F.mul(c(9), F.mul(F.mul(b2, b4), b6)));
    return d;
  }
};

/// Projective F_q-points by enumerating the q² affine cells, split into x-stripes over `jobs` threads.
inline std::uint64_t count_points(const WeierstrassCurve& E, unsigned jobs = 1, std::uint64_t max_cells = 100000000) {
  if (E.discriminant == 0) throw Error("count_points: singular curve");
  const std::uint64_t q = E.K->q;
  if (q > max_cells / q) throw GuardError("count_points: enumeration exceeds the cell bound");
  auto stripe = parallel_map(jobs, q, [&](std::uint64_t x) {
    std::uint64_t n = 0;
    for (Code y = 0; y < q; ++y)
      if (E.contains(static_cast<Code>(x), y)) ++n;
    return n;
  });
  std::uint64_t total = 1;  // point at infinity
  for (auto n : stripe) total += n;
  return total;
}

/// (N − q − 1)² ≤ 4q.
inline bool satisfies_hasse_bound(std::uint64_t N, std::uint64_t q) {
  const Integer t = Integer(static_cast<unsigned long>(N)) - Integer(static_cast<unsigned long>(q)) - 1;
  return t * t <= Integer(static_cast<unsigned long>(4 * q));
}

struct AffinePoint {
  Code x = 0, y = 0;
};

struct IsogenyData {
  WeierstrassCurve source;
  WeierstrassCurve target;
  AffinePoint kernel;  ///< T, in the source's coordinates
  unsigned degree = 2;
  /// The source rewritten as y² = x(x² + a·x + b) with T at the origin.
  Code shift = 0, a = 0, b = 0;

  /// φ(x, y) = (y²/x², y(b − x²)/x²) in shifted coordinates; T and O map to O (nullopt).
  std::optional<AffinePoint> map(const AffinePoint& P) const {
    const Field& F = *source.K;
    const Code half = F.inv(F.from_int(2));
    // complete the square, then move T to the origin
    Code y = F.add(P.y, F.mul(half, F.add(F.mul(source.a1, P.x), source.a3)));
    Code x = F.sub(P.x, shift);
    if (x == 0) return std::nullopt;
    Code xi2 = F.inv(F.mul(x, x));
    return AffinePoint{F.mul(F.mul(y, y), xi2), F.mul(F.mul(y, F.sub(b, F.mul(x, x))), xi2)};
  }
};

/**
 * @brief E' = E/⟨T⟩ for a rational 2-torsion point T, q odd.
 *
 * The source is moved to y² = x(x² + ax + b) and the quotient is y² = x(x² − 2ax + a² − 4b).
 */
inline IsogenyData two_isogenous(const WeierstrassCurve& E, const AffinePoint& T) {
  const Field& F = *E.K;
  if (F.p == 2) throw Error("two_isogenous: requires odd characteristic");
  if (!E.contains(T.x, T.y)) throw Error("two_isogenous: T is not on the curve");
  // 2-torsion: the tangent is vertical, i.e. 2y + a1x + a3 = 0
  if (F.add(F.add(T.y, T.y), F.add(F.mul(E.a1, T.x), E.a3)) != 0) throw Error("two_isogenous: T is not a 2-torsion point");
  auto c = [&](long v) { return F.from_int(v); };
  const Code quarter = F.inv(c(4)), half = F.inv(c(2));
  // y² = x³ + (b2/4)x² + (b4/2)x + b6/4 after completing the square
  Code A2 = F.mul(quarter, F.add(F.mul(E.a1, E.a1), F.mul(c(4), E.a2)));
  Code A4 = F.mul(half, F.add(F.mul(E.a1, E.a3), F.mul(c(2), E.a4)));
  const Code x0 = T.x;
  IsogenyData D{E, E, T, 2, x0, 0, 0};
  D.a = F.add(F.mul(c(3), x0), A2);
  D.b = F.add(F.add(F.mul(c(3), F.mul(x0, x0)), F.mul(c(2), F.mul(A2, x0))), A4);
  if (D.b == 0) throw Error("two_isogenous: degenerate kernel (b = 0), singular quotient");
  Code a2p = F.neg(F.add(D.a, D.a));
  Code a4p = F.sub(F.mul(D.a, D.a), F.mul(c(4), D.b));
  D.target = WeierstrassCurve::make(E.K, 0, a2p, 0, a4p, 0);
  return D;
}

/// Rational points of order 2, ascending in x.
inline std::vector<AffinePoint> two_torsion_points(const WeierstrassCurve& E) {
  const Field& F = *E.K;
  std::vector<AffinePoint> out;
  for (Code x = 0; x < F.q; ++x)
    for (Code y = 0; y < F.q; ++y)
      if (E.contains(x, y) && F.add(F.add(y, y), F.add(F.mul(E.a1, x), E.a3)) == 0) out.push_back({x, y});
  return out;
}

/// y² = (x − e1)(x − e2)(x − e3) for all e1 < e2 < e3 in F_q (by Code).
inline std::vector<WeierstrassCurve> full_two_torsion_curves(const FieldDescriptor& K) {
  const Field& F = *K;
  std::vector<WeierstrassCurve> out;
  for (Code e1 = 0; e1 < F.q; ++e1)
    for (Code e2 = e1 + 1; e2 < F.q; ++e2)
      for (Code e3 = e2 + 1; e3 < F.q; ++e3) {
        Code s1 = F.add(F.add(e1, e2), e3);
        Code s2 = F.add(F.add(F.mul(e1, e2), F.mul(e1, e3)), F.mul(e2, e3));
        Code s3 = F.mul(F.mul(e1, e2), e3);
        out.push_back(WeierstrassCurve::make(K, 0, F.neg(s1), 0, s2, F.neg(s3)));
      }
  return out;
}

/// The affine chart as a scheme over O_F, for weil_volume.
inline AffineSchemeDesc affine_chart(const WeierstrassCurve& E) {
  const FieldDescriptor& K = E.K;
  auto k = [&](Code c) { return Poly::constant(K, 2, TruncatedSeries::constant(K, 1, c)); };
  Poly x = Poly::variable(K, 2, 0), y = Poly::variable(K, 2, 1);
  Poly f = y * y + k(E.a1) * x * y + k(E.a3) * y - (x * x * x + k(E.a2) * x * x + k(E.a4) * x + k(E.a6));
  return {2, {f}, 1, "E" + E.str()};
}

struct VolumeEqualityReport {
  std::uint64_t count_source = 0;
  std::uint64_t count_target = 0;
  VolumeValue volume_source;  ///< count/q
  VolumeValue volume_target;
  bool hasse_ok = false;
  bool equal = false;
};

inline VolumeEqualityReport verify_volume_equality(const WeierstrassCurve& E, const WeierstrassCurve& Ep, unsigned jobs = 1) {
  const std::uint64_t q = E.K->q;
  VolumeEqualityReport r;
  r.count_source = count_points(E, jobs);
  r.count_target = count_points(Ep, jobs);
  r.volume_source = VolumeValue::with_base(q, Rational(Integer(static_cast<unsigned long>(r.count_source)), Integer(static_cast<unsigned long>(q))));
  r.volume_target = VolumeValue::with_base(q, Rational(Integer(static_cast<unsigned long>(r.count_target)), Integer(static_cast<unsigned long>(q))));
  r.hasse_ok = satisfies_hasse_bound(r.count_source, q) && satisfies_hasse_bound(r.count_target, q);
  r.equal = r.count_source == r.count_target;
  return r;
}

}  // namespace padicvol
