#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ergocheck/matrix.hpp"
#include "ergocheck/network.hpp"

namespace ergocheck {

inline constexpr std::size_t kDefaultMaxStates = 1'000'000;

// Bound on enumerated state sets; ERGOCHECK_MAX_STATES overrides the default.
std::size_t max_states_from_env(std::size_t fallback = kDefaultMaxStates);

// Nonnegative integer vectors gamma with gamma^T m = 0, coprime entries and
// pairwise disjoint supports, ordered by their smallest support index.
// Throws OverlappingConservation when the nonnegative left null vectors do
// not decompose into disjoint supports.
std::vector<Counts> find_conservation_relations(const IntegerMatrix& m);

// Species indexing with conserved species last. Conserved coordinates are
// grouped per relation, in relation order.
struct ConservedStructure {
  std::vector<Counts> gammas;      // in the reordered indexing, length d each
  std::size_t unconserved_count = 0;
  std::size_t conserved_count = 0;
  std::vector<std::size_t> order;  // reordered species i is original order[i]
  std::vector<std::int64_t> totals;
  std::vector<Counts> conserved_states;  // enumerated E_c, length d_c each

  std::size_t species_count() const { return unconserved_count + conserved_count; }
  std::size_t relation_count() const { return gammas.size(); }
  // Half-open range of conserved coordinates (0-based within E_c vectors)
  // belonging to relation r.
  std::pair<std::size_t, std::size_t> block(std::size_t r) const;
  bool has_conservation() const { return !gammas.empty(); }
};

// Trivial structure for a network without conservation: identity order and a
// single empty conserved state.
ConservedStructure unconserved_structure(std::size_t species_count);

std::pair<ReactionNetwork, ConservedStructure> reorder_conserved_last(
    const ReactionNetwork& net, const std::vector<Counts>& gammas);

// Lexicographic E_c for cs.totals. Throws StateSpaceTooLarge past max_states.
std::vector<Counts> enumerate_conserved_states(const ConservedStructure& cs,
                                               std::size_t max_states = kDefaultMaxStates);

// Copy of cs with totals set and E_c enumerated.
ConservedStructure with_totals(ConservedStructure cs, std::vector<std::int64_t> totals,
                               std::size_t max_states = kDefaultMaxStates);

}  // namespace ergocheck
