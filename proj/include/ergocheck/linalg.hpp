#pragma once

#include <cstddef>
#include <vector>

#include "ergocheck/matrix.hpp"

namespace ergocheck {

std::size_t rank(const RationalMatrix& m);
std::size_t rank(const IntegerMatrix& m);

Rational determinant(const RationalMatrix& m);

// Basis of {y : y^T m = 0}, one vector per row of the result.
RationalMatrix left_null_space(const RationalMatrix& m);

// Column-style Hermite normal form: m * unimodular = hnf.
//
// Pivots sit in a staircase: pivot j lies in row pivot_rows[j] of column j,
// is strictly positive, and has zeros to its right. Entries left of a pivot
// in its row lie in [0, pivot). Columns at and beyond the rank are zero.
struct HnfResult {
  IntegerMatrix hnf;
  IntegerMatrix unimodular;
  std::vector<std::size_t> pivot_rows;

  std::size_t rank() const { return pivot_rows.size(); }
  std::vector<Integer> pivot_values() const;
};

HnfResult hermite_normal_form(const IntegerMatrix& m);

// True iff the integer column lattice of m equals Z^dim.
bool lattice_spans_full(const IntegerMatrix& m, std::size_t dim);
bool lattice_spans_full(const HnfResult& hnf, std::size_t dim);

}  // namespace ergocheck
