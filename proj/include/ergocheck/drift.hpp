#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ergocheck/conservation.hpp"
#include "ergocheck/lfp.hpp"
#include "ergocheck/network.hpp"

namespace ergocheck {

// Partition of the reactions (0-based, ascending) by reactant form.
struct ReactionClassification {
  std::vector<std::size_t> unary_unconserved;  // S_i -> *, S_i unconserved
  std::vector<std::size_t> binary;             // two reactant molecules
  std::vector<std::size_t> remainder;          // constitutive, or unary on a conserved species
  std::vector<std::size_t> unary_species;      // reactant index of each unary_unconserved entry
};

// Throws UnsupportedReactionOrder for any reaction with three or more
// reactant molecules. `net` is in the conserved-last order of cs.
ReactionClassification classify_reactions(const ReactionNetwork& net, const ConservedStructure& cs);

struct DriftSystem {
  RationalMatrix drift;                 // d_u x d: sum over unary k of theta_k e_i (nu'_k - nu_k)^T
  IntegerMatrix binary_stoichiometry;   // d x K_q, columns in ascending reaction order
  RationalMatrix bound_block;           // d_u x d: [-I 0]
  LfpProblem problem;                   // [drift; bound] w <= -1, binary^T w = 0
  std::vector<Counts> gammas;           // conservation vectors for positivisation
};

DriftSystem build_drift_system(const ReactionClassification& rc, const ReactionNetwork& net,
                               const ConservedStructure& cs);

// V(x) = v . x with v strictly positive, drift v < 0 and v^T binary = 0.
struct LyapunovCertificate {
  RationalVector w;             // solution of the drift feasibility problem
  RationalVector v;             // w + sum_r alpha_r gamma_r
  RationalVector alphas;        // one per conservation relation
  RationalVector drift_margin;  // drift * w, every entry <= -1
};

// First violated drift-problem constraint for a candidate w, named by
// block ("B-block", "A-block", "M_q"), or nullopt.
std::optional<std::string> witness_violation(const DriftSystem& ds, const RationalVector& w);

// Builds the certificate from a feasible w; alpha_r is the least power of
// two making the support of gamma_r positive. Throws WitnessRejected.
LyapunovCertificate positivize(const DriftSystem& ds, const RationalVector& w);

// Solves the drift problem; nullopt when infeasible.
std::optional<LyapunovCertificate> check_negative_drift(const DriftSystem& ds);

// Independent exact re-check of every certificate condition.
bool verify_certificate(const LyapunovCertificate& cert, const DriftSystem& ds);

LyapunovCertificate scaled(const LyapunovCertificate& cert, const Rational& factor);

}  // namespace ergocheck
