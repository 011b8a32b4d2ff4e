#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergocheck/conservation.hpp"
#include "ergocheck/lfp.hpp"
#include "ergocheck/linalg.hpp"
#include "ergocheck/network.hpp"

namespace ergocheck {

using BoolMatrix = Matrix<std::uint8_t>;
using Adjacency = std::vector<std::vector<std::size_t>>;

// Reactions that can fire when the unconserved species in `available` are
// abundant and the conserved species sit at state e (empty without
// conservation). Species indices follow the reordered network.
std::vector<std::size_t> fireable_reactions(const NetworkStructure& s, const ConservedStructure& cs,
                                            const SpeciesSet& available, std::span<const std::int64_t> e);

// Pattern of (I + Z)^(n-1), by repeated boolean squaring.
BoolMatrix reachability_by_powering(const Adjacency& z);
// Same pattern from a breadth-first search out of every vertex.
BoolMatrix reachability_by_bfs(const Adjacency& z);
// Mutual-reachability classes, each sorted, ordered by smallest member.
std::vector<std::vector<std::size_t>> classes_from_reachability(const BoolMatrix& omega);
std::vector<std::vector<std::size_t>> strongly_connected_components(const Adjacency& z);

struct ConservedClassAnalysis {
  SpeciesSet available;
  Adjacency transitions;  // Z(A) as sorted successor lists
  std::optional<BoolMatrix> reachability;  // Omega(A), kept for small E_c only
  std::vector<std::vector<std::size_t>> classes;
  std::vector<bool> closed;

  std::size_t state_count() const { return transitions.size(); }
  std::size_t eta() const;  // number of closed classes
  std::vector<std::vector<std::size_t>> closed_classes() const;
};

inline constexpr std::size_t kPoweringLimit = 256;

ConservedClassAnalysis conserved_class_analysis(const NetworkStructure& s, const ConservedStructure& cs,
                                                const SpeciesSet& available);

struct LevelDecomposition {
  std::vector<SpeciesSet> levels;  // G_1, G_2, ...; never empty sets
  bool exhaustive = false;
  SpeciesSet uncovered;
  // Class analysis at every H_{l-1} visited; empty without conservation.
  std::vector<ConservedClassAnalysis> class_analyses;

  std::vector<SpeciesSet> cumulative() const;
};

LevelDecomposition level_decomposition(const NetworkStructure& s);
LevelDecomposition level_decomposition_conserved(const NetworkStructure& s, const ConservedStructure& cs);

enum class IrreducibilityStatus { Proven, NecessaryConditionFailed, Inconclusive };

enum class IrreducibilityCondition {
  None,
  Rank,
  Lattice,
  Lfp,
  Eta,
  ForwardExhaustive,
  InverseExhaustive,
  EmptyConservedSpace,
};

std::string to_string(IrreducibilityStatus status);
std::string to_string(IrreducibilityCondition condition);
IrreducibilityStatus irreducibility_status_from_string(const std::string& s);
IrreducibilityCondition irreducibility_condition_from_string(const std::string& s);

struct IrreducibilityVerdict {
  IrreducibilityStatus status = IrreducibilityStatus::Inconclusive;
  IrreducibilityCondition failed_condition = IrreducibilityCondition::None;
  std::string diagnostic;

  std::size_t rank = 0;
  std::size_t required_rank = 0;
  std::optional<HnfResult> hnf;
  std::optional<LfpOutcome> lfp;  // positive flux on the full or reduced stoichiometry
  std::optional<ConservedClassAnalysis> full_availability;  // class analysis at A = D_u
  std::optional<LevelDecomposition> forward;
  std::optional<LevelDecomposition> inverse;
};

// `net` must already be in conserved-last order matching cs, with E_c
// enumerated in cs.conserved_states.
IrreducibilityVerdict check_irreducibility(const ReactionNetwork& net, const ConservedStructure& cs);

// d_u x K matrix of unconserved displacements.
IntegerMatrix reduced_stoichiometry(const NetworkStructure& s, std::size_t unconserved_count);

}  // namespace ergocheck
