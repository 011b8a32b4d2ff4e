#include <doctest.h>

#include "cycling.hpp"
#include "ergocheck/errors.hpp"
#include "ergocheck/lfp.hpp"
#include "support.hpp"

using namespace ergocheck;

namespace {

LfpProblem positive_flux(const RationalMatrix& m) {
  LfpProblem p;
  const std::size_t k = m.cols();
  p.a = RationalMatrix(k, k);
  for (std::size_t i = 0; i < k; ++i) p.a(i, i) = -1;
  p.b.assign(k, -1);
  p.a_eq = m;
  p.b_eq.assign(m.rows(), 0);
  return p;
}

}  // namespace

TEST_CASE("positive flux problems of the small examples") {
  auto bd = solve_lfp(positive_flux(RationalMatrix::from_rows({{1, -1}})));
  REQUIRE(bd.feasible());
  CHECK(testsupport::satisfies_exactly(positive_flux(RationalMatrix::from_rows({{1, -1}})), bd.witness));
  CHECK_FALSE(solve_lfp(positive_flux(RationalMatrix::from_rows({{1}}))).feasible());
}

TEST_CASE("nonnegative variables cannot sum below zero") {
  LfpProblem p;
  p.a = RationalMatrix::from_rows({{1, 1}, {-1, 0}, {0, -1}});
  p.b = {-1, 0, 0};
  p.a_eq = RationalMatrix(0, 2);
  auto out = solve_lfp(p);
  CHECK(out.status == LfpStatus::Infeasible);
  CHECK(out.witness.empty());
}

TEST_CASE("free, bounded and equality-only problems") {
  LfpProblem p;
  p.a = RationalMatrix(0, 2);
  p.a_eq = RationalMatrix::from_rows({{1, 1}, {1, -1}});
  p.b_eq = {3, Rational(1, 2)};
  auto out = solve_lfp(p);
  REQUIRE(out.feasible());
  CHECK(out.witness == RationalVector{Rational(7, 4), Rational(5, 4)});

  LfpProblem q;
  q.a = RationalMatrix::from_rows({{1, 0}, {-1, 0}, {0, 1}});
  q.b = {-2, 3, -5};
  q.a_eq = RationalMatrix(0, 2);
  auto qo = solve_lfp(q);
  REQUIRE(qo.feasible());
  CHECK(testsupport::satisfies_exactly(q, qo.witness));
}

TEST_CASE("dimension mismatches are rejected") {
  LfpProblem p;
  p.a = RationalMatrix(2, 3);
  p.b = {0};
  p.a_eq = RationalMatrix(0, 3);
  CHECK_THROWS_AS(solve_lfp(p), DimensionMismatch);
}

TEST_CASE("first violation names the offending row") {
  LfpProblem p;
  p.a = RationalMatrix::from_rows({{1, 0}, {0, 1}});
  p.b = {1, 1};
  p.a_eq = RationalMatrix::from_rows({{1, 1}});
  p.b_eq = {2};
  CHECK_FALSE(first_violation(p, {1, 1}).has_value());
  auto v = first_violation(p, {2, 0});
  REQUIRE(v.has_value());
  CHECK(v->find("1") != std::string::npos);
  CHECK_FALSE(satisfies(p, {0, 1}));
}

TEST_CASE("Bland's rule terminates on cycling examples") {
  for (const auto& c : testsupport::cycling_cases()) {
    CAPTURE(c.name);
    auto out = solve_lfp(c.problem);
    CHECK(out.feasible() == c.feasible);
    if (out.feasible()) CHECK(testsupport::satisfies_exactly(c.problem, out.witness));
  }
}

TEST_CASE("agreement with vertex enumeration on random bounded instances") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> entry(-3, 3), nvar(1, 3), nrow(1, 4), neq(0, 1);
  int feasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(nvar(rng));
    const auto m = static_cast<std::size_t>(nrow(rng));
    const auto e = static_cast<std::size_t>(neq(rng));
    LfpProblem p;
    p.a = RationalMatrix(m + 2 * n, n);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) p.a(r, c) = entry(rng);
      p.b.push_back(entry(rng));
    }
    for (std::size_t c = 0; c < n; ++c) {
      p.a(m + 2 * c, c) = 1;
      p.a(m + 2 * c + 1, c) = -1;
      p.b.push_back(2);
      p.b.push_back(2);
    }
    p.a_eq = RationalMatrix(e, n);
    for (std::size_t r = 0; r < e; ++r) {
      for (std::size_t c = 0; c < n; ++c) p.a_eq(r, c) = entry(rng);
      p.b_eq.push_back(entry(rng));
    }
    auto out = solve_lfp(p);
    CHECK(out.feasible() == testsupport::vertex_oracle_feasible(p));
    if (out.feasible()) {
      ++feasible;
      CHECK(testsupport::satisfies_exactly(p, out.witness));
    }
  }
  CHECK(feasible > 20);
}
