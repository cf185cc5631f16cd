#pragma once

#include <string>
#include <vector>

#include "field.hpp"

namespace padicvol {

/// Dense matrix over a finite field, row-major Codes.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Code> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Matrix diagonal(const std::vector<Code>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  Code& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  Code operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  bool operator<(const Matrix& o) const { return a < o.a; }
  bool is_diagonal() const {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (i != j && (*this)(i, j) != 0) return false;
    return true;
  }
};

inline Matrix mat_mul(const Field& F, const Matrix& A, const Matrix& B) {
  if (A.cols != B.rows) throw Error("mat_mul: shape mismatch");
  Matrix C(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t k = 0; k < A.cols; ++k) {
      Code x = A(i, k);
      if (!x) continue;
      for (std::size_t j = 0; j < B.cols; ++j) C(i, j) = F.add(C(i, j), F.mul(x, B(k, j)));
    }
  return C;
}

inline std::vector<Code> mat_vec(const Field& F, const Matrix& A, const std::vector<Code>& v) {
  std::vector<Code> out(A.rows, 0);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j)
      if (A(i, j) && v[j]) out[i] = F.add(out[i], F.mul(A(i, j), v[j]));
  return out;
}

inline Matrix mat_sub(const Field& F, const Matrix& A, const Matrix& B) {
  Matrix C = A;
  for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] = F.sub(A.a[i], B.a[i]);
  return C;
}

inline Matrix mat_scale(const Field& F, const Matrix& A, Code c) {
  Matrix C = A;
  for (auto& x : C.a) x = F.mul(x, c);
  return C;
}

inline Matrix mat_pow(const Field& F, const Matrix& A, std::uint64_t e) {
  Matrix R = Matrix::identity(A.rows);
  for (Matrix B = A; e; e >>= 1, B = mat_mul(F, B, B))
    if (e & 1) R = mat_mul(F, R, B);
  return R;
}

/// Entrywise x ↦ x^{p^k}.
inline Matrix mat_frob(const Field& F, const Matrix& A, std::uint32_t k) {
  Matrix C = A;
  for (auto& x : C.a) x = F.frob(x, k);
  return C;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(const Field& F, Matrix& M) {
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < M.cols && r < M.rows; ++c) {
    std::size_t k = r;
    while (k < M.rows && M(k, c) == 0) ++k;
    if (k == M.rows) continue;
    for (std::size_t j = 0; j < M.cols; ++j) std::swap(M(k, j), M(r, j));
    Code inv = F.inv(M(r, c));
    for (std::size_t j = 0; j < M.cols; ++j) M(r, j) = F.mul(M(r, j), inv);
    for (std::size_t i = 0; i < M.rows; ++i) {
      if (i == r || M(i, c) == 0) continue;
      Code f = M(i, c);
      for (std::size_t j = 0; j < M.cols; ++j) M(i, j) = F.sub(M(i, j), F.mul(f, M(r, j)));
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

inline std::size_t rank(const Field& F, Matrix M) { return rref(F, M).size(); }

/// Basis of the right kernel {v : M v = 0}, one vector per free column, from the RREF.
inline std::vector<std::vector<Code>> kernel(const Field& F, Matrix M) {
  auto piv = rref(F, M);
  std::vector<bool> is_piv(M.cols, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::vector<Code>> basis;
  for (std::size_t f = 0; f < M.cols; ++f) {
    if (is_piv[f]) continue;
    std::vector<Code> v(M.cols, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = F.neg(M(r, f));
    basis.push_back(v);
  }
  return basis;
}

inline Matrix inverse(const Field& F, const Matrix& A) {
  if (A.rows != A.cols) throw Error("inverse: not square");
  const std::size_t n = A.rows;
  Matrix M(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) M(i, j) = A(i, j);
    M(i, n + i) = 1;
  }
  auto piv = rref(F, M);
  if (piv.size() < n || piv[n - 1] != n - 1) throw Error("inverse: singular matrix");
  Matrix R(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) R(i, j) = M(i, n + j);
  return R;
}

/// Matrix with the given vectors as columns.
inline Matrix from_columns(const std::vector<std::vector<Code>>& cols) {
  Matrix M(cols.empty() ? 0 : cols[0].size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < M.rows; ++i) M(i, j) = cols[j][i];
  return M;
}

/**
 * @brief Kernel of an F_p-linear map K^n → K^n given as a function, enumerated in full.
 *
 * The domain is identified with F_p^{rn} through Code digits; the result lists every
 * kernel element (p^{dim} vectors) in a deterministic order.
 */
template <class Fn>
std::vector<std::vector<Code>> fp_linear_kernel(const Field& F, std::size_t n, Fn&& map, std::uint64_t max_elems) {
  const std::uint32_t p = F.p, r = F.r;
  const std::size_t dim = n * r;
  std::vector<std::vector<std::uint32_t>> cols;  // images of basis vectors as F_p digit vectors
  std::vector<std::uint64_t> pw(r, 1);
  for (std::uint32_t j = 1; j < r; ++j) pw[j] = pw[j - 1] * p;
  for (std::size_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < r; ++j) {
      std::vector<Code> e(n, 0);
      e[i] = static_cast<Code>(pw[j]);
      auto img = map(e);
      std::vector<std::uint32_t> d;
      for (std::size_t k = 0; k < n; ++k) {
        auto c = F.coords(img[k]);
        d.insert(d.end(), c.begin(), c.end());
      }
      cols.push_back(d);
    }
  // Gaussian elimination over F_p on the dim x dim matrix with these columns
  std::vector<std::vector<std::uint32_t>> M(dim, std::vector<std::uint32_t>(dim));
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t rr = 0; rr < dim; ++rr) M[rr][c] = cols[c][rr];
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t c = 0; c < dim && row < dim; ++c) {
    std::size_t k = row;
    while (k < dim && M[k][c] == 0) ++k;
    if (k == dim) continue;
    std::swap(M[k], M[row]);
    std::uint64_t inv = fp::inv_mod(M[row][c], p);
    for (auto& x : M[row]) x = static_cast<std::uint32_t>(x * inv % p);
    for (std::size_t i = 0; i < dim; ++i) {
      if (i == row || M[i][c] == 0) continue;
      std::uint64_t f = M[i][c];
      for (std::size_t j = 0; j < dim; ++j) M[i][j] = static_cast<std::uint32_t>((M[i][j] + (p - f) * M[row][j]) % p);
    }
    piv.push_back(c);
    ++row;
  }
  std::vector<bool> is_piv(dim, false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::vector<std::uint32_t>> basis;
  for (std::size_t f = 0; f < dim; ++f) {
    if (is_piv[f]) continue;
    std::vector<std::uint32_t> v(dim, 0);
    v[f] = 1;
    for (std::size_t rr = 0; rr < piv.size(); ++rr) v[piv[rr]] = (p - M[rr][f]) % p;
    basis.push_back(v);
  }
  std::uint64_t count = ipow(p, static_cast<unsigned>(basis.size()));
  if (count > max_elems) throw GuardError("kernel enumeration exceeds cell budget");
  std::vector<std::vector<Code>> out;
  out.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<std::uint32_t> v(dim, 0);
    std::uint64_t x = idx;
    for (std::size_t b = 0; b < basis.size(); ++b, x /= p) {
      std::uint32_t c = static_cast<std::uint32_t>(x % p);
      if (!c) continue;
      for (std::size_t j = 0; j < dim; ++j) v[j] = (v[j] + c * basis[b][j]) % p;
    }
    std::vector<Code> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::uint32_t> digits(v.begin() + static_cast<long>(i * r), v.begin() + static_cast<long>((i + 1) * r));
      y[i] = F.from_coords(digits);
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace padicvol
