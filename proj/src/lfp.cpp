#include "ergocheck/lfp.hpp"

#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ergocheck/errors.hpp"

namespace ergocheck {

void LfpProblem::validate() const {
  if (a_eq.cols() != a.cols())
    throw DimensionMismatch("inequality and equality blocks have different variable counts");
  if (b.size() != a.rows()) throw DimensionMismatch("inequality right-hand side has wrong length");
  if (b_eq.size() != a_eq.rows()) throw DimensionMismatch("equality right-hand side has wrong length");
}

std::string to_string(LfpStatus status) {
  return status == LfpStatus::Feasible ? "Feasible" : "Infeasible";
}

std::optional<std::string> first_violation(const LfpProblem& p, const RationalVector& v) {
  p.validate();
  if (v.size() != p.variables())
    return "witness has " + std::to_string(v.size()) + " entries, expected " +
           std::to_string(p.variables());
  auto lhs = multiply(p.a, v);
  for (std::size_t i = 0; i < lhs.size(); ++i)
    if (lhs[i] > p.b[i])
      return "inequality row " + std::to_string(i + 1) + ": " + to_string(lhs[i]) + " > " + to_string(p.b[i]);
  auto lhs_eq = multiply(p.a_eq, v);
  for (std::size_t i = 0; i < lhs_eq.size(); ++i)
    if (lhs_eq[i] != p.b_eq[i])
      return "equality row " + std::to_string(i + 1) + ": " + to_string(lhs_eq[i]) +
             " != " + to_string(p.b_eq[i]);
  return std::nullopt;
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct SparseRow {
  std::vector<std::pair<std::size_t, Rational>> entries;  // variable, coefficient
  Rational rhs;
  bool equality = false;
};

// v_j = offset_j + sum over columns c with var[c] == j of sign[c] * x_c.
struct Substitution {
  RationalVector offset;
  std::vector<std::size_t> var;
  std::vector<int> sign;
};

class PhaseOne {
 public:
  // rows: sum coef * x_col (+ slack if inequality) = rhs, x >= 0.
  PhaseOne(std::size_t columns, std::vector<SparseRow> rows) {
    const std::size_t m = rows.size();
    std::size_t slacks = 0;
    for (const auto& r : rows)
      if (!r.equality) ++slacks;
    real_ = columns + slacks;
    width_ = real_ + 1;  // last entry is the right-hand side
    tableau_.assign(m, RationalVector(width_));
    basis_.assign(m, kNone);
    objective_.assign(width_, Rational(0));

    std::size_t slack = columns;
    for (std::size_t i = 0; i < m; ++i) {
      auto& t = tableau_[i];
      for (const auto& [c, coef] : rows[i].entries) t[c] += coef;
      t[real_] = rows[i].rhs;
      std::size_t my_slack = kNone;
      if (!rows[i].equality) {
        my_slack = slack++;
        t[my_slack] = 1;
      }
      if (t[real_] < 0) {
        for (auto& e : t)
          if (e != 0) e = -e;
      }
      if (my_slack != kNone && t[my_slack] == 1) {
        basis_[i] = my_slack;
      } else {
        // Artificial basic variable; its column is never stored because an
        // artificial that leaves the basis never needs to re-enter.
        basis_[i] = real_ + i;
        for (std::size_t j = 0; j < width_; ++j)
          if (t[j] != 0) objective_[j] -= t[j];
      }
    }
  }

  // True iff the artificial objective reaches zero.
  bool run() {
    for (;;) {
      std::size_t enter = kNone;
      for (std::size_t j = 0; j < real_; ++j)
        if (objective_[j] < 0) {
          enter = j;
          break;
        }
      if (enter == kNone) break;

      std::size_t leave = kNone;
      Rational best;
      for (std::size_t i = 0; i < tableau_.size(); ++i) {
        const Rational& coef = tableau_[i][enter];
        if (coef <= 0) continue;
        Rational ratio = tableau_[i][real_] / coef;
        if (leave == kNone || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      // Phase I is bounded below by zero, so a negative reduced cost always
      // has a positive column entry.
      if (leave == kNone) throw std::logic_error("phase I ratio test found no leaving row");
      pivot(leave, enter);
    }
    return objective_[real_] == 0;
  }

  RationalVector column_values(std::size_t columns) const {
    RationalVector x(columns);
    for (std::size_t i = 0; i < tableau_.size(); ++i)
      if (basis_[i] < columns) x[basis_[i]] = tableau_[i][real_];
    return x;
  }

 private:
  void pivot(std::size_t row, std::size_t col) {
    auto& p = tableau_[row];
    Rational inv = 1 / p[col];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < width_; ++j)
      if (p[j] != 0) {
        p[j] *= inv;
        nz.push_back(j);
      }
    auto eliminate = [&](RationalVector& t) {
      if (t[col] == 0) return;
      Rational f = t[col];
      for (auto j : nz) t[j] -= f * p[j];
    };
    for (std::size_t i = 0; i < tableau_.size(); ++i)
      if (i != row) eliminate(tableau_[i]);
    eliminate(objective_);
    basis_[row] = col;
  }

  std::size_t real_ = 0;
  std::size_t width_ = 0;
  std::vector<RationalVector> tableau_;
  std::vector<std::size_t> basis_;
  RationalVector objective_;
};

}  // namespace

LfpOutcome solve_lfp(const LfpProblem& problem) {
  problem.validate();
  const std::size_t n = problem.variables();
  const LfpOutcome infeasible{LfpStatus::Infeasible, {}};

  // Singleton inequality rows become variable bounds.
  std::vector<std::optional<Rational>> lower(n), upper(n);
  std::vector<std::size_t> general;
  for (std::size_t i = 0; i < problem.a.rows(); ++i) {
    std::size_t nonzeros = 0, var = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (problem.a(i, j) != 0) {
        ++nonzeros;
        var = j;
      }
    if (nonzeros == 0) {
      if (problem.b[i] < 0) return infeasible;
      continue;
    }
    if (nonzeros > 1) {
      general.push_back(i);
      continue;
    }
    const Rational& coef = problem.a(i, var);
    Rational bound = problem.b[i] / coef;
    if (coef > 0) {
      if (!upper[var] || bound < *upper[var]) upper[var] = bound;
    } else {
      if (!lower[var] || bound > *lower[var]) lower[var] = bound;
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    if (lower[j] && upper[j] && *lower[j] > *upper[j]) return infeasible;

  Substitution sub{RationalVector(n), {}, {}};
  std::vector<SparseRow> rows;
  for (std::size_t j = 0; j < n; ++j) {
    if (lower[j]) {
      sub.offset[j] = *lower[j];
      sub.var.push_back(j);
      sub.sign.push_back(1);
      if (upper[j])
        rows.push_back({{{sub.var.size() - 1, Rational(1)}}, *upper[j] - *lower[j], false});
    } else if (upper[j]) {
      sub.offset[j] = *upper[j];
      sub.var.push_back(j);
      sub.sign.push_back(-1);
    } else {
      sub.var.push_back(j);
      sub.sign.push_back(1);
      sub.var.push_back(j);
      sub.sign.push_back(-1);
    }
  }
  std::vector<std::vector<std::size_t>> columns_of(n);
  for (std::size_t c = 0; c < sub.var.size(); ++c) columns_of[sub.var[c]].push_back(c);

  auto substitute = [&](std::span<const Rational> coefs, const Rational& rhs, bool equality) {
    SparseRow row{{}, rhs, equality};
    for (std::size_t j = 0; j < n; ++j) {
      if (coefs[j] == 0) continue;
      row.rhs -= coefs[j] * sub.offset[j];
      for (auto c : columns_of[j]) row.entries.emplace_back(c, coefs[j] * sub.sign[c]);
    }
    return row;
  };
  for (auto i : general) rows.push_back(substitute(problem.a.row(i), problem.b[i], false));
  for (std::size_t i = 0; i < problem.a_eq.rows(); ++i) {
    SparseRow row = substitute(problem.a_eq.row(i), problem.b_eq[i], true);
    if (row.entries.empty()) {
      if (row.rhs != 0) return infeasible;
      continue;
    }
    rows.push_back(std::move(row));
  }

  PhaseOne simplex(sub.var.size(), std::move(rows));
  if (!simplex.run()) return infeasible;

  RationalVector x = simplex.column_values(sub.var.size());
  RationalVector v = sub.offset;
  for (std::size_t c = 0; c < x.size(); ++c)
    if (x[c] != 0) v[sub.var[c]] += sub.sign[c] * x[c];

  if (auto bad = first_violation(problem, v))
    throw std::logic_error("simplex witness failed exact re-check: " + *bad);
  return {LfpStatus::Feasible, std::move(v)};
}

}  // namespace ergocheck
