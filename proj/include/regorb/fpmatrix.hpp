#pragma once

// Dense exact linear algebra over prime fields.
//
// Convention used everywhere in this library: vectors are ROW vectors and
// matrices act on the RIGHT (v |-> v*M). Consequently "kernel" always means
// the left null space {x : x*M = 0}, and a group acting on V composes as
// v*(M1*M2) = (v*M1)*M2. Basis computations break ties by lowest index, so
// every returned basis is canonical.

#include <algorithm>
#include <vector>

#include "regorb/fp.hpp"
#include "regorb/fppoly.hpp"

namespace regorb {

using Vec = std::vector<i64>;

struct Matrix {
  int rows = 0, cols = 0;
  i64 mod = 2;
  std::vector<i64> a;

  Matrix() = default;
  Matrix(int r, int c, i64 p) : rows(r), cols(c), mod(p), a(static_cast<size_t>(r) * c, 0) {}

  i64& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  i64 at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  Vec row(int r) const {
    return Vec(a.begin() + static_cast<size_t>(r) * cols, a.begin() + static_cast<size_t>(r + 1) * cols);
  }
  void set_row(int r, const Vec& v) {
    std::copy(v.begin(), v.end(), a.begin() + static_cast<size_t>(r) * cols);
  }

  static Matrix identity(int n, i64 p) {
    Matrix m(n, n, p);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1 % p;
    return m;
  }
  static Matrix from_rows(const std::vector<Vec>& rows_, i64 p) {
    if (rows_.empty()) return Matrix(0, 0, p);
    Matrix m(static_cast<int>(rows_.size()), static_cast<int>(rows_[0].size()), p);
    for (int i = 0; i < m.rows; ++i)
      for (int j = 0; j < m.cols; ++j) m.at(i, j) = fp_reduce(rows_[i][j], p);
    return m;
  }

  bool operator==(const Matrix& o) const {
    return rows == o.rows && cols == o.cols && mod == o.mod && a == o.a;
  }
};

inline Matrix mat_mul(const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows || x.mod != y.mod) throw DomainError("matrix product shape/field mismatch");
  Matrix r(x.rows, y.cols, x.mod);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      i64 v = x.at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < y.cols; ++j)
        r.at(i, j) = fp_reduce(r.at(i, j) + v * y.at(k, j), x.mod);
    }
  return r;
}

inline Matrix mat_add(const Matrix& x, const Matrix& y) {
  Matrix r(x.rows, x.cols, x.mod);
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = fp_add(x.a[i], y.a[i], x.mod);
  return r;
}

inline Matrix mat_sub(const Matrix& x, const Matrix& y) {
  Matrix r(x.rows, x.cols, x.mod);
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = fp_sub(x.a[i], y.a[i], x.mod);
  return r;
}

inline Matrix mat_scale(const Matrix& x, i64 s) {
  Matrix r = x;
  for (auto& v : r.a) v = fp_mul(v, s, x.mod);
  return r;
}

inline Matrix mat_transpose(const Matrix& x) {
  Matrix r(x.cols, x.rows, x.mod);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
  return r;
}

inline bool mat_is_zero(const Matrix& x) {
  return std::all_of(x.a.begin(), x.a.end(), [](i64 v) { return v == 0; });
}

inline Matrix mat_pow(Matrix m, i64 e) {
  Matrix r = Matrix::identity(m.rows, m.mod);
  while (e > 0) {
    if (e & 1) r = mat_mul(r, m);
    m = mat_mul(m, m);
    e >>= 1;
  }
  return r;
}

inline Vec vec_mat(const Vec& v, const Matrix& m) {
  Vec r(m.cols, 0);
  for (int i = 0; i < m.rows; ++i) {
    if (v[i] == 0) continue;
    for (int j = 0; j < m.cols; ++j) r[j] = fp_reduce(r[j] + v[i] * m.at(i, j), m.mod);
  }
  return r;
}

inline Vec vec_add(const Vec& x, const Vec& y, i64 p) {
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = fp_add(x[i], y[i], p);
  return r;
}

inline Vec vec_sub(const Vec& x, const Vec& y, i64 p) {
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = fp_sub(x[i], y[i], p);
  return r;
}

inline Vec vec_scale(const Vec& x, i64 s, i64 p) {
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = fp_mul(x[i], s, p);
  return r;
}

inline bool vec_is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](i64 x) { return x == 0; });
}

struct RrefResult {
  Matrix reduced;
  int rank = 0;
  std::vector<int> pivots;
};

inline RrefResult rref(Matrix m) {
  RrefResult res;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int pivot = -1;
    for (int i = r; i < m.rows; ++i)
      if (m.at(i, c) != 0) { pivot = i; break; }
    if (pivot < 0) continue;
    if (pivot != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(pivot, j), m.at(r, j));
    i64 inv = field_inverse(m.at(r, c), m.mod);
    for (int j = 0; j < m.cols; ++j) m.at(r, j) = fp_mul(m.at(r, j), inv, m.mod);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || m.at(i, c) == 0) continue;
      i64 f = m.at(i, c);
      for (int j = 0; j < m.cols; ++j)
        m.at(i, j) = fp_sub(m.at(i, j), fp_mul(f, m.at(r, j), m.mod), m.mod);
    }
    res.pivots.push_back(c);
    ++r;
  }
  res.rank = r;
  res.reduced = std::move(m);
  return res;
}

inline int mat_rank(const Matrix& m) { return rref(m).rank; }

inline bool mat_is_invertible(const Matrix& m) {
  return m.rows == m.cols && mat_rank(m) == m.rows;
}

inline Matrix mat_inverse(const Matrix& m) {
  if (m.rows != m.cols) throw DomainError("inverse of non-square matrix");
  Matrix aug(m.rows, 2 * m.cols, m.mod);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols + i) = 1;
  }
  RrefResult rr = rref(aug);
  if (rr.rank < m.rows || rr.pivots.back() >= m.cols)
    throw DomainError("matrix is singular");
  Matrix inv(m.rows, m.cols, m.mod);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) inv.at(i, j) = rr.reduced.at(i, m.cols + j);
  return inv;
}

// Basis of {x : x*M = 0} (row-vector kernel), canonical free-variable form.
inline std::vector<Vec> solve_homogeneous(const Matrix& m) {
  Matrix t = mat_transpose(m);
  RrefResult rr = rref(t);
  std::vector<bool> is_pivot(t.cols, false);
  for (int c : rr.pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (int f = 0; f < t.cols; ++f) {
    if (is_pivot[f]) continue;
    Vec x(t.cols, 0);
    x[f] = 1;
    for (size_t pi = 0; pi < rr.pivots.size(); ++pi)
      x[rr.pivots[pi]] = fp_neg(rr.reduced.at(static_cast<int>(pi), f), m.mod);
    basis.push_back(std::move(x));
  }
  return basis;
}

// Kronecker product with lexicographic ordering of the tensor basis: index
// (i, j) maps to i*B.rows + j, so (x (x) y) * kronecker(A, B) = (xA) (x) (yB).
inline Matrix kronecker(const Matrix& x, const Matrix& y) {
  if (x.mod != y.mod) throw DomainError("kronecker over different fields");
  Matrix r(x.rows * y.rows, x.cols * y.cols, x.mod);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      i64 v = x.at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < y.rows; ++j)
        for (int l = 0; l < y.cols; ++l)
          r.at(i * y.rows + j, k * y.cols + l) = fp_mul(v, y.at(j, l), x.mod);
    }
  return r;
}

namespace detail {

inline Vec vectorize(const Matrix& m) { return m.a; }

}  // namespace detail

// Least-degree monic polynomial with f(M) = 0, found as the first linear
// dependence among I, M, M^2, ...
inline FpPoly minimal_polynomial(const Matrix& m) {
  if (m.rows != m.cols) throw DomainError("minimal polynomial of non-square matrix");
  if (m.rows == 0) return FpPoly::one(m.mod);
  std::vector<Matrix> powers{Matrix::identity(m.rows, m.mod)};
  for (int t = 1; t <= m.rows; ++t) {
    powers.push_back(mat_mul(powers.back(), m));
    Matrix stack(t + 1, m.rows * m.cols, m.mod);
    for (int i = 0; i <= t; ++i) stack.set_row(i, detail::vectorize(powers[i]));
    auto kernel = solve_homogeneous(stack);
    if (!kernel.empty()) {
      // First dependence: kernel is one-dimensional and involves M^t.
      Vec k = kernel[0];
      if (k[t] == 0) throw InternalError("minimal polynomial dependence misses top power");
      return poly_monic(FpPoly(m.mod, k));
    }
  }
  throw InternalError("no annihilating polynomial up to the dimension");
}

// Jordan block sizes (descending) of a unipotent matrix, computed from the
// rank sequence r_k = rank((M-I)^k): the number of blocks of size >= k is
// r_{k-1} - r_k. The optional unit divisor supports matrices that are linear
// over an extension field E of F_p represented F_p-linearly: all ranks are
// then multiples of [E:F_p] and block sizes are counted over E.
inline std::vector<int> unipotent_partition_over_unit(const Matrix& m, i64 p, int unit) {
  if (m.rows != m.cols) throw DomainError("unipotent partition of non-square matrix");
  if (m.mod != p) throw DomainError("field mismatch in unipotent partition");
  int d = m.rows;
  if (d == 0) return {};
  Matrix n = mat_sub(m, Matrix::identity(d, p));
  std::vector<int> ranks{d};
  Matrix power = Matrix::identity(d, p);
  while (ranks.back() > 0) {
    power = mat_mul(power, n);
    ranks.push_back(mat_rank(power));
    if (static_cast<int>(ranks.size()) > d + 1)
      throw DomainError("matrix is not unipotent: M - I is not nilpotent");
  }
  std::vector<int> at_least;  // at_least[k-1] = #blocks of size >= k (over E)
  for (size_t k = 1; k < ranks.size(); ++k) {
    int diff = ranks[k - 1] - ranks[k];
    if (diff % unit != 0) throw InternalError("rank sequence not divisible by endomorphism degree");
    at_least.push_back(diff / unit);
  }
  std::vector<int> sizes;
  for (size_t k = 0; k < at_least.size(); ++k) {
    int exactly = at_least[k] - (k + 1 < at_least.size() ? at_least[k + 1] : 0);
    for (int i = 0; i < exactly; ++i) sizes.push_back(static_cast<int>(k) + 1);
  }
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

inline std::vector<int> unipotent_partition(const Matrix& m, i64 p) {
  return unipotent_partition_over_unit(m, p, 1);
}

inline i64 mat_order(const Matrix& m, i64 cap = 1 << 20) {
  Matrix id = Matrix::identity(m.rows, m.mod);
  Matrix cur = m;
  for (i64 k = 1; k <= cap; ++k) {
    if (cur == id) return k;
    cur = mat_mul(cur, m);
  }
  throw CapError("matrix order exceeds cap");
}

// Coordinates of v in the row space of `basis` (rows independent); throws if
// v is outside the span.
inline Vec coords_in_basis(const Matrix& basis, const Vec& v) {
  // Solve c * basis = v by row-reducing [basis^T | v^T].
  Matrix aug(basis.cols, basis.rows + 1, basis.mod);
  for (int i = 0; i < basis.cols; ++i) {
    for (int j = 0; j < basis.rows; ++j) aug.at(i, j) = basis.at(j, i);
    aug.at(i, basis.rows) = fp_reduce(v[i], basis.mod);
  }
  RrefResult rr = rref(aug);
  Vec c(basis.rows, 0);
  for (size_t pi = 0; pi < rr.pivots.size(); ++pi) {
    if (rr.pivots[pi] == basis.rows)
      throw DomainError("vector not in span of basis");
    c[rr.pivots[pi]] = rr.reduced.at(static_cast<int>(pi), basis.rows);
  }
  return c;
}

// Matrix of v |-> v*op on the row space of `basis`, in basis coordinates.
// The subspace must be op-invariant.
inline Matrix restrict_to_subspace(const Matrix& op, const Matrix& basis) {
  Matrix r(basis.rows, basis.rows, basis.mod);
  for (int i = 0; i < basis.rows; ++i) {
    Vec image = vec_mat(basis.row(i), op);
    r.set_row(i, coords_in_basis(basis, image));
  }
  return r;
}

// Canonical (rref) basis matrix of the row space spanned by `vectors`.
inline Matrix span_basis(const std::vector<Vec>& vectors, int dim, i64 p) {
  Matrix m = Matrix::from_rows(vectors, p);
  if (vectors.empty()) return Matrix(0, dim, p);
  RrefResult rr = rref(m);
  Matrix basis(rr.rank, dim, p);
  for (int i = 0; i < rr.rank; ++i) basis.set_row(i, rr.reduced.row(i));
  return basis;
}

}  // namespace regorb
