#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ergocheck/matrix.hpp"
#include "ergocheck/rational.hpp"

namespace ergocheck {

// Molecule counts per species; also used for states and displacements.
using Counts = std::vector<std::int64_t>;
using SpeciesSet = std::vector<std::size_t>;  // sorted, 0-based

struct Reaction {
  Counts reactants;  // consumed molecules per species
  Counts products;   // produced molecules per species
  Rational rate;

  std::int64_t order() const;
  bool is_identity() const { return reactants == products; }
  Counts displacement() const;

  friend bool operator==(const Reaction&, const Reaction&) = default;
};

// Validated mass-action reaction network. Immutable after construction.
class ReactionNetwork {
 public:
  ReactionNetwork(std::vector<std::string> species, std::vector<Reaction> reactions);

  const std::vector<std::string>& species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  const Reaction& reaction(std::size_t k) const { return reactions_.at(k); }
  std::size_t species_count() const { return species_.size(); }
  std::size_t reaction_count() const { return reactions_.size(); }

  std::optional<std::size_t> species_index(std::string_view name) const;

  // 0-based indices of reactions that never change the state.
  std::vector<std::size_t> identity_reactions() const;

  // Network whose species i is this network's species order[i].
  ReactionNetwork permuted(std::span<const std::size_t> order) const;

  friend bool operator==(const ReactionNetwork&, const ReactionNetwork&) = default;

 private:
  std::vector<std::string> species_;
  std::vector<Reaction> reactions_;
};

// Reactant/product pairs with rate constants stripped.
struct NetworkStructure {
  std::size_t species_count = 0;
  std::vector<std::pair<Counts, Counts>> pairs;

  std::size_t reaction_count() const { return pairs.size(); }
  friend bool operator==(const NetworkStructure&, const NetworkStructure&) = default;
};

NetworkStructure structure_of(const ReactionNetwork& net);

// Flips every arrow: pair k becomes (products_k, reactants_k).
NetworkStructure inverse_structure(const NetworkStructure& s);

ReactionNetwork parse_network(std::string_view text);

// Text form accepted by parse_network; always carries a species header.
std::string serialize_network(const ReactionNetwork& net);

// d x K matrix with column k equal to products_k - reactants_k.
IntegerMatrix stoichiometry_matrix(const NetworkStructure& s);
IntegerMatrix stoichiometry_matrix(const ReactionNetwork& net);

// Mass-action propensity theta_k * prod_i C(x_i, nu_ik). Throws
// IndexOutOfRange for a bad reaction index or state dimension.
Rational propensity(const ReactionNetwork& net, std::size_t k, std::span<const std::int64_t> x);

// Floating evaluation of the same expression, for simulation.
double propensity_value(const ReactionNetwork& net, std::size_t k, std::span<const std::int64_t> x);

// Human form of one reaction, e.g. "2*A + B -> C".
std::string format_reaction(const ReactionNetwork& net, std::size_t k);

}  // namespace ergocheck
