#pragma once

// Independent oracles and generators shared by the unit and acceptance
// tests. Nothing here calls into the library's algorithms; the oracles are
// deliberately naive so that agreement means something.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ergocheck/lfp.hpp"
#include "ergocheck/matrix.hpp"
#include "ergocheck/network.hpp"

#ifndef ERGOCHECK_NETWORK_DIR
#define ERGOCHECK_NETWORK_DIR "networks"
#endif

namespace testsupport {

using ergocheck::Counts;
using ergocheck::Integer;
using ergocheck::IntegerMatrix;
using ergocheck::Rational;
using ergocheck::RationalMatrix;
using ergocheck::RationalVector;

inline std::string network_path(const std::string& name) { return std::string(ERGOCHECK_NETWORK_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// theta * prod x! / (nu! (x - nu)!) through full factorials.
inline Rational factorial_propensity(const Rational& theta, const Counts& nu, const Counts& x) {
  Rational out = theta;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (x[i] < nu[i]) return 0;
    Integer a, b, c;
    mpz_fac_ui(a.get_mpz_t(), static_cast<unsigned long>(x[i]));
    mpz_fac_ui(b.get_mpz_t(), static_cast<unsigned long>(nu[i]));
    mpz_fac_ui(c.get_mpz_t(), static_cast<unsigned long>(x[i] - nu[i]));
    out *= Rational(a, b * c);
  }
  out.canonicalize();
  return out;
}

// Poisson(lambda) probabilities on 0..n by the recurrence p_k = p_{k-1} lambda / k.
inline std::vector<double> poisson_pmf(double lambda, std::size_t n) {
  std::vector<double> p(n + 1);
  p[0] = std::exp(-lambda);
  for (std::size_t k = 1; k <= n; ++k) p[k] = p[k - 1] * lambda / static_cast<double>(k);
  return p;
}

// Reachability in at most n-1 steps (including zero steps) by BFS from
// every vertex.
inline std::vector<std::vector<bool>> bfs_reachability(const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t s = 0; s < n; ++s) {
    std::queue<std::size_t> q;
    q.push(s);
    reach[s][s] = true;
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (auto v : adj[u])
        if (!reach[s][v]) {
          reach[s][v] = true;
          q.push(v);
        }
    }
  }
  return reach;
}

// Bareiss fraction-free determinant of a square integer matrix.
inline Integer bareiss_determinant(IntegerMatrix m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(p, c), m(k, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

// Solves a x = b exactly over the rationals by Gaussian elimination;
// nullopt when the system is singular or inconsistent.
inline std::optional<RationalVector> solve_square(RationalMatrix a, RationalVector b) {
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0) continue;
      Rational f = a(r, c) / a(c, c);
      for (std::size_t j = 0; j < n; ++j) a(r, j) -= f * a(c, j);
      b[r] -= f * b[c];
    }
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a(i, i);
  return x;
}

inline bool satisfies_exactly(const ergocheck::LfpProblem& p, const RationalVector& v) {
  for (std::size_t r = 0; r < p.a.rows(); ++r) {
    Rational s = 0;
    for (std::size_t c = 0; c < v.size(); ++c) s += p.a(r, c) * v[c];
    if (s > p.b[r]) return false;
  }
  for (std::size_t r = 0; r < p.a_eq.rows(); ++r) {
    Rational s = 0;
    for (std::size_t c = 0; c < v.size(); ++c) s += p.a_eq(r, c) * v[c];
    if (s != p.b_eq[r]) return false;
  }
  return true;
}

// Vertex enumeration: for a problem whose inequalities bound every
// variable, the feasible set is a polytope, nonempty iff it has a vertex.
// Every choice of n linearly independent tight rows is tried.
inline bool vertex_oracle_feasible(const ergocheck::LfpProblem& p) {
  const std::size_t n = p.a.cols();
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (std::size_t r = 0; r < p.a_eq.rows(); ++r) {
    rows.emplace_back(p.a_eq.row(r).begin(), p.a_eq.row(r).end());
    rhs.push_back(p.b_eq[r]);
  }
  for (std::size_t r = 0; r < p.a.rows(); ++r) {
    rows.emplace_back(p.a.row(r).begin(), p.a.row(r).end());
    rhs.push_back(p.b[r]);
  }
  const std::size_t total = rows.size();
  // Equalities need not be among the chosen rows: every candidate point
  // is re-checked against the whole problem.
  if (total < n) return false;
  std::vector<bool> mask(total, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n), true);
  do {
    RationalMatrix a(n, n);
    RationalVector b(n);
    std::size_t k = 0;
    for (std::size_t r = 0; r < total; ++r)
      if (mask[r]) {
        for (std::size_t c = 0; c < n; ++c) a(k, c) = rows[r][c];
        b[k] = rhs[r];
        ++k;
      }
    if (auto x = solve_square(a, b); x && satisfies_exactly(p, *x)) return true;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return false;
}

// Searches the grid {k/4 : |k/4| <= bound} in every coordinate.
inline std::optional<RationalVector> grid_oracle(const ergocheck::LfpProblem& p, int bound) {
  const std::size_t n = p.a.cols();
  const int steps = 8 * bound + 1;
  std::vector<int> idx(n, 0);
  for (;;) {
    RationalVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = Rational(idx[i] - 4 * bound, 4);
    if (satisfies_exactly(p, v)) return v;
    std::size_t i = 0;
    while (i < n && ++idx[i] == steps) idx[i++] = 0;
    if (i == n) return std::nullopt;
  }
}

inline std::string species_name(std::size_t i) { return "X" + std::to_string(i + 1); }

// Random mass-action network with reactions of order at most `max_order`.
inline ergocheck::ReactionNetwork random_network(std::mt19937_64& rng, std::size_t d, std::size_t k,
                                                 int max_order = 2, int max_product = 2) {
  std::vector<std::string> species;
  for (std::size_t i = 0; i < d; ++i) species.push_back(species_name(i));
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  std::uniform_int_distribution<int> order(0, max_order), produced(0, max_product), rate(1, 6);
  std::vector<ergocheck::Reaction> reactions;
  while (reactions.size() < k) {
    ergocheck::Reaction r;
    r.reactants.assign(d, 0);
    r.products.assign(d, 0);
    for (int j = order(rng); j > 0; --j) ++r.reactants[pick(rng)];
    for (int j = produced(rng); j > 0; --j) ++r.products[pick(rng)];
    if (r.reactants == r.products) continue;
    r.rate = Rational(rate(rng), rate(rng));
    r.rate.canonicalize();
    reactions.push_back(std::move(r));
  }
  return {species, reactions};
}

inline Integer dot(const Counts& a, const Counts& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Integer(static_cast<long>(a[i])) * static_cast<long>(b[i]);
  return s;
}

// Linear cascade: X1 made from nothing, X(i+1) made catalytically by X(i),
// every species degraded at rate 3 and converted into its successor
// (the last one into X1). Three reactions per species.
inline std::string cascade_network_text(std::size_t d) {
  std::ostringstream os;
  os << "species:";
  for (std::size_t i = 0; i < d; ++i) os << ' ' << species_name(i);
  os << '\n';
  for (std::size_t i = 0; i < d; ++i) {
    const auto x = species_name(i);
    const auto next = species_name((i + 1) % d);
    if (i == 0) os << "0 -> " << x << " ; 1\n";
    else os << species_name(i - 1) << " -> " << species_name(i - 1) << " + " << x << " ; 1\n";
    os << x << " -> 0 ; 3\n";
    os << x << " -> " << next << " ; 1\n";
  }
  return os.str();
}

}  // namespace testsupport
