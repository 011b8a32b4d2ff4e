#include "ergocheck/linalg.hpp"

#include <algorithm>
#include <utility>

#include "ergocheck/errors.hpp"

namespace ergocheck {

namespace {

// Integer rows with the content gcd divided out after every update.
std::size_t integer_row_rank(std::vector<IntegerVector> rows, std::size_t cols) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = rows.size();
    for (std::size_t i = r; i < rows.size(); ++i)
      if (rows[i][c] != 0 && (pivot == rows.size() || abs(rows[i][c]) < abs(rows[pivot][c])))
        pivot = i;
    if (pivot == rows.size()) continue;
    std::swap(rows[r], rows[pivot]);
    const IntegerVector& p = rows[r];
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      Integer g = gcd(p[c], rows[i][c]);
      Integer fp = p[c] / g, fi = rows[i][c] / g;
      Integer content = 0;
      for (std::size_t j = c; j < cols; ++j) {
        if (rows[i][j] == 0 && p[j] == 0) continue;
        rows[i][j] = fp * rows[i][j] - fi * p[j];
        content = gcd(content, rows[i][j]);
      }
      if (content > 1)
        for (std::size_t j = c; j < cols; ++j)
          if (rows[i][j] != 0) rows[i][j] /= content;
    }
    ++r;
  }
  return r;
}

std::vector<IntegerVector> integer_rows(const RationalMatrix& m) {
  std::vector<IntegerVector> rows(m.rows(), IntegerVector(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) l = lcm(l, m(i, j).get_den());
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
  }
  return rows;
}

}  // namespace

std::size_t rank(const RationalMatrix& m) { return integer_row_rank(integer_rows(m), m.cols()); }

std::size_t rank(const IntegerMatrix& m) {
  std::vector<IntegerVector> rows(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) rows[i].assign(m.row(i).begin(), m.row(i).end());
  return integer_row_rank(std::move(rows), m.cols());
}

Rational determinant(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  RationalMatrix a = m;
  const std::size_t n = a.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a(pivot, c) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(pivot, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      Rational f = a(i, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j)
        if (a(c, j) != 0) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

RationalMatrix left_null_space(const RationalMatrix& m) {
  // Null space of m^T via reduced row echelon form.
  RationalMatrix a = m.transpose();
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && a(pivot, c) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(pivot, j));
    Rational inv = 1 / a(r, c);
    for (std::size_t j = c; j < cols; ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      Rational f = a(i, c);
      for (std::size_t j = c; j < cols; ++j)
        if (a(r, j) != 0) a(i, j) -= f * a(r, j);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  RationalMatrix basis(cols - pivot_cols.size(), cols);
  std::size_t b = 0;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    basis(b, free) = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) basis(b, pivot_cols[i]) = -a(i, free);
    ++b;
  }
  return basis;
}

std::vector<Integer> HnfResult::pivot_values() const {
  std::vector<Integer> out;
  out.reserve(pivot_rows.size());
  for (std::size_t j = 0; j < pivot_rows.size(); ++j) out.push_back(hnf(pivot_rows[j], j));
  return out;
}

HnfResult hermite_normal_form(const IntegerMatrix& m) {
  const std::size_t rows = m.rows(), n = m.cols();
  // Work column-wise: h[j] is column j of the transformed matrix, u[j] of U.
  std::vector<IntegerVector> h(n, IntegerVector(rows)), u(n, IntegerVector(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < rows; ++i) h[j][i] = m(i, j);
    u[j][j] = 1;
  }

  // col_a <- s*col_a + t*col_b, col_b <- x*col_a + y*col_b (old values).
  auto combine = [](IntegerVector& a, IntegerVector& b, const Integer& s, const Integer& t,
                    const Integer& x, const Integer& y) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0 && b[i] == 0) continue;
      Integer na = s * a[i] + t * b[i];
      b[i] = x * a[i] + y * b[i];
      a[i] = std::move(na);
    }
  };
  auto axpy = [](IntegerVector& dst, const Integer& f, const IntegerVector& src) {
    for (std::size_t i = 0; i < dst.size(); ++i)
      if (src[i] != 0) dst[i] += f * src[i];
  };

  std::vector<std::size_t> pivot_rows;
  std::size_t p = 0;
  for (std::size_t r = 0; r < rows && p < n; ++r) {
    // Bring the smallest nonzero entry of row r (columns >= p) to column p.
    std::size_t best = n;
    for (std::size_t j = p; j < n; ++j)
      if (h[j][r] != 0 && (best == n || abs(h[j][r]) < abs(h[best][r]))) best = j;
    if (best == n) continue;
    if (best != p) {
      std::swap(h[p], h[best]);
      std::swap(u[p], u[best]);
    }
    for (std::size_t j = p + 1; j < n; ++j) {
      if (h[j][r] == 0) continue;
      const Integer a = h[p][r], b = h[j][r];
      if (b % a == 0) {
        Integer q = -(b / a);
        axpy(h[j], q, h[p]);
        axpy(u[j], q, u[p]);
        continue;
      }
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      Integer x = -(b / g), y = a / g;
      combine(h[p], h[j], s, t, x, y);
      combine(u[p], u[j], s, t, x, y);
    }
    if (h[p][r] < 0) {
      for (auto& e : h[p]) e = -e;
      for (auto& e : u[p]) e = -e;
    }
    const Integer& pivot = h[p][r];
    for (std::size_t j = 0; j < p; ++j) {
      if (h[j][r] >= 0 && h[j][r] < pivot) continue;
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), h[j][r].get_mpz_t(), pivot.get_mpz_t());
      q = -q;
      axpy(h[j], q, h[p]);
      axpy(u[j], q, u[p]);
    }
    pivot_rows.push_back(r);
    ++p;
  }

  HnfResult out{IntegerMatrix(rows, n), IntegerMatrix(n, n), std::move(pivot_rows)};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < rows; ++i) out.hnf(i, j) = std::move(h[j][i]);
    for (std::size_t i = 0; i < n; ++i) out.unimodular(i, j) = std::move(u[j][i]);
  }
  return out;
}

bool lattice_spans_full(const HnfResult& hnf, std::size_t dim) {
  if (hnf.hnf.rows() != dim || hnf.rank() != dim) return false;
  for (const auto& v : hnf.pivot_values())
    if (v != 1) return false;
  return true;
}

bool lattice_spans_full(const IntegerMatrix& m, std::size_t dim) {
  if (m.rows() != dim) return false;
  return lattice_spans_full(hermite_normal_form(m), dim);
}

}  // namespace ergocheck
