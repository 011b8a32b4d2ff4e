#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "ergocheck/matrix.hpp"

namespace ergocheck {

// {v : a v <= b, a_eq v = b_eq}. Both matrices carry the variable count as
// their column count, including when they have no rows.
struct LfpProblem {
  RationalMatrix a;
  RationalVector b;
  RationalMatrix a_eq;
  RationalVector b_eq;

  std::size_t variables() const { return a.cols(); }
  // Throws DimensionMismatch.
  void validate() const;
};

enum class LfpStatus { Feasible, Infeasible };

struct LfpOutcome {
  LfpStatus status = LfpStatus::Infeasible;
  RationalVector witness;  // present iff Feasible

  bool feasible() const { return status == LfpStatus::Feasible; }
};

// Exact phase-I simplex with Bland's rule.
LfpOutcome solve_lfp(const LfpProblem& problem);

// Description of the first constraint v violates, or nullopt if v is
// feasible. Rows are reported 1-based, inequalities before equalities.
std::optional<std::string> first_violation(const LfpProblem& problem, const RationalVector& v);

inline bool satisfies(const LfpProblem& problem, const RationalVector& v) {
  return !first_violation(problem, v).has_value();
}

std::string to_string(LfpStatus status);

}  // namespace ergocheck
