#include "ergocheck/conservation.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

#include "ergocheck/errors.hpp"
#include "ergocheck/lfp.hpp"
#include "ergocheck/linalg.hpp"

namespace ergocheck {

std::size_t max_states_from_env(std::size_t fallback) {
  if (const char* env = std::getenv("ERGOCHECK_MAX_STATES")) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw InputError(std::string("ERGOCHECK_MAX_STATES is not a number: ") + env);
    }
  }
  return fallback;
}

namespace {

// Nonnegative left null vectors are parametrised as basis^T y.
class NullConeSearch {
 public:
  explicit NullConeSearch(RationalMatrix basis) : basis_(std::move(basis)) {}

  // gamma >= 0, gamma_i >= 1, gamma_j = 0 for j in zeros.
  std::optional<RationalVector> find(std::size_t i, const std::vector<std::size_t>& zeros) const {
    const std::size_t r = basis_.rows(), d = basis_.cols();
    LfpProblem p{RationalMatrix(d + 1, r), RationalVector(d + 1), RationalMatrix(zeros.size(), r),
                 RationalVector(zeros.size())};
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t l = 0; l < r; ++l) p.a(j, l) = -basis_(l, j);
    for (std::size_t l = 0; l < r; ++l) p.a(d, l) = -basis_(l, i);
    p.b[d] = -1;
    for (std::size_t z = 0; z < zeros.size(); ++z)
      for (std::size_t l = 0; l < r; ++l) p.a_eq(z, l) = basis_(l, zeros[z]);
    auto out = solve_lfp(p);
    if (!out.feasible()) return std::nullopt;
    RationalVector gamma(d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t l = 0; l < r; ++l)
        if (basis_(l, j) != 0) gamma[j] += basis_(l, j) * out.witness[l];
    return gamma;
  }

 private:
  RationalMatrix basis_;
};

std::vector<std::size_t> support(const RationalVector& v) {
  std::vector<std::size_t> s;
  for (std::size_t j = 0; j < v.size(); ++j)
    if (v[j] != 0) s.push_back(j);
  return s;
}

Counts coprime_integer(const RationalVector& v) {
  Integer l = 1;
  for (const auto& q : v) l = lcm(l, q.get_den());
  IntegerVector z(v.size());
  Integer g = 0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    z[j] = v[j].get_num() * (l / v[j].get_den());
    g = gcd(g, z[j]);
  }
  Counts out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    Integer e = z[j] / g;
    if (!e.fits_slong_p()) throw OverlappingConservation("conservation vector entry too large");
    out[j] = e.get_si();
  }
  return out;
}

}  // namespace

std::vector<Counts> find_conservation_relations(const IntegerMatrix& m) {
  const std::size_t d = m.rows();
  RationalMatrix basis = left_null_space(to_rational(m));
  if (basis.rows() == 0) return {};

  NullConeSearch search(basis);
  std::vector<bool> conservable(d, false), decided(d, false);
  for (std::size_t i = 0; i < d; ++i) {
    bool in_span = false;
    for (std::size_t l = 0; l < basis.rows(); ++l) in_span = in_span || basis(l, i) != 0;
    if (!in_span) decided[i] = true;
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (decided[i]) continue;
    decided[i] = true;
    if (auto gamma = search.find(i, {})) {
      for (auto j : support(*gamma)) {
        conservable[j] = true;
        decided[j] = true;
      }
    }
  }

  std::vector<Counts> pieces;
  std::vector<bool> covered(d, false);
  for (std::size_t i = 0; i < d; ++i) {
    if (!conservable[i] || covered[i]) continue;
    auto gamma = *search.find(i, {});
    std::vector<std::size_t> zeros;
    for (std::size_t j = 0; j < d; ++j)
      if (gamma[j] == 0) zeros.push_back(j);
    // Shrink to a minimal support containing i; such a support carries a
    // unique null vector up to scale.
    for (auto j : support(gamma)) {
      if (j == i || gamma[j] == 0) continue;
      auto trial = zeros;
      trial.push_back(j);
      if (auto smaller = search.find(i, trial)) {
        gamma = std::move(*smaller);
        zeros.clear();
        for (std::size_t z = 0; z < d; ++z)
          if (gamma[z] == 0) zeros.push_back(z);
      }
    }
    Counts piece = coprime_integer(gamma);
    for (std::size_t j = 0; j < d; ++j) {
      if (piece[j] == 0) continue;
      if (covered[j])
        throw OverlappingConservation("conservation relations overlap on species index " +
                                      std::to_string(j + 1));
      covered[j] = true;
    }
    pieces.push_back(std::move(piece));
  }
  if (pieces.empty()) return pieces;

  // The disjoint pieces must span every left null vector supported on the
  // conserved species; otherwise further, overlapping relations exist.
  std::vector<std::size_t> conserved;
  for (std::size_t j = 0; j < d; ++j)
    if (covered[j]) conserved.push_back(j);
  IntegerMatrix restricted(conserved.size(), m.cols());
  for (std::size_t r = 0; r < conserved.size(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) restricted(r, c) = m(conserved[r], c);
  const std::size_t dim = conserved.size() - rank(restricted);
  if (dim != pieces.size())
    throw OverlappingConservation("nonnegative conservation relations do not decompose into " +
                                  std::to_string(pieces.size()) + " disjoint supports (null space dimension " +
                                  std::to_string(dim) + ")");
  return pieces;
}

std::pair<std::size_t, std::size_t> ConservedStructure::block(std::size_t r) const {
  std::size_t first = 0;
  for (std::size_t q = 0; q < r; ++q)
    for (std::size_t i = unconserved_count; i < species_count(); ++i)
      if (gammas[q][i] != 0) ++first;
  std::size_t size = 0;
  for (std::size_t i = unconserved_count; i < species_count(); ++i)
    if (gammas.at(r)[i] != 0) ++size;
  return {first, first + size};
}

ConservedStructure unconserved_structure(std::size_t species_count) {
  ConservedStructure cs;
  cs.unconserved_count = species_count;
  cs.order.resize(species_count);
  std::iota(cs.order.begin(), cs.order.end(), std::size_t{0});
  cs.conserved_states = {Counts{}};
  return cs;
}

std::pair<ReactionNetwork, ConservedStructure> reorder_conserved_last(
    const ReactionNetwork& net, const std::vector<Counts>& gammas) {
  const std::size_t d = net.species_count();
  std::vector<int> owner(d, -1);
  for (std::size_t r = 0; r < gammas.size(); ++r) {
    if (gammas[r].size() != d) throw DimensionMismatch("conservation vector has wrong length");
    for (std::size_t i = 0; i < d; ++i) {
      if (gammas[r][i] < 0) throw InputError("conservation vector has a negative entry");
      if (gammas[r][i] == 0) continue;
      if (owner[i] >= 0) throw OverlappingConservation("conservation supports are not disjoint");
      owner[i] = static_cast<int>(r);
    }
  }
  ConservedStructure cs;
  for (std::size_t i = 0; i < d; ++i)
    if (owner[i] < 0) cs.order.push_back(i);
  cs.unconserved_count = cs.order.size();
  for (std::size_t r = 0; r < gammas.size(); ++r)
    for (std::size_t i = 0; i < d; ++i)
      if (owner[i] == static_cast<int>(r)) cs.order.push_back(i);
  cs.conserved_count = d - cs.unconserved_count;
  for (const auto& g : gammas) {
    Counts p(d);
    for (std::size_t i = 0; i < d; ++i) p[i] = g[cs.order[i]];
    cs.gammas.push_back(std::move(p));
  }
  if (gammas.empty()) cs.conserved_states = {Counts{}};
  return {net.permuted(cs.order), std::move(cs)};
}

namespace {

void enumerate_block(const Counts& weights, std::int64_t remaining, std::size_t pos, Counts& current,
                     std::vector<Counts>& out) {
  if (pos == weights.size()) {
    if (remaining == 0) out.push_back(current);
    return;
  }
  for (std::int64_t x = 0; x * weights[pos] <= remaining; ++x) {
    current[pos] = x;
    enumerate_block(weights, remaining - x * weights[pos], pos + 1, current, out);
  }
  current[pos] = 0;
}

// Number of solutions of weights . x = total, x >= 0, saturating at cap.
std::size_t count_block(const Counts& weights, std::int64_t total, std::size_t cap) {
  std::vector<std::size_t> ways(static_cast<std::size_t>(total) + 1, 0);
  ways[0] = 1;
  for (auto w : weights)
    for (std::int64_t s = w; s <= total; ++s)
      ways[s] = std::min(cap, ways[s] + ways[s - w]);
  return ways[static_cast<std::size_t>(total)];
}

}  // namespace

std::vector<Counts> enumerate_conserved_states(const ConservedStructure& cs, std::size_t max_states) {
  if (cs.totals.size() != cs.gammas.size())
    throw InputError("expected " + std::to_string(cs.gammas.size()) + " conserved totals, got " +
                     std::to_string(cs.totals.size()));
  std::vector<Counts> weights;
  std::size_t total_count = 1;
  for (std::size_t r = 0; r < cs.gammas.size(); ++r) {
    if (cs.totals[r] < 0) throw InputError("conserved totals must be nonnegative");
    Counts w;
    for (std::size_t i = cs.unconserved_count; i < cs.species_count(); ++i)
      if (cs.gammas[r][i] != 0) w.push_back(cs.gammas[r][i]);
    std::size_t c = count_block(w, cs.totals[r], max_states + 1);
    total_count = c == 0 ? 0 : std::min(max_states + 1, total_count * c);
    if (total_count > max_states)
      throw StateSpaceTooLarge("conserved state space exceeds " + std::to_string(max_states) + " states");
    weights.push_back(std::move(w));
  }

  std::vector<Counts> states{Counts{}};
  for (std::size_t r = 0; r < weights.size(); ++r) {
    std::vector<Counts> block;
    Counts current(weights[r].size(), 0);
    enumerate_block(weights[r], cs.totals[r], 0, current, block);
    std::vector<Counts> next;
    next.reserve(states.size() * block.size());
    for (const auto& s : states)
      for (const auto& b : block) {
        Counts joined = s;
        joined.insert(joined.end(), b.begin(), b.end());
        next.push_back(std::move(joined));
      }
    states = std::move(next);
  }
  return states;
}

ConservedStructure with_totals(ConservedStructure cs, std::vector<std::int64_t> totals, std::size_t max_states) {
  cs.totals = std::move(totals);
  cs.conserved_states = enumerate_conserved_states(cs, max_states);
  return cs;
}

}  // namespace ergocheck
