#include "ergocheck/irreducibility.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

#include "ergocheck/errors.hpp"

namespace ergocheck {

namespace {

// Per-reaction data split into unconserved and conserved coordinates.
struct SplitReaction {
  std::vector<std::size_t> unconserved_reactants;
  std::vector<std::size_t> unconserved_products;
  Counts conserved_reactants;
  Counts conserved_shift;
};

std::vector<SplitReaction> split(const NetworkStructure& s, std::size_t du) {
  std::vector<SplitReaction> out;
  out.reserve(s.pairs.size());
  for (const auto& [reactants, products] : s.pairs) {
    SplitReaction r;
    for (std::size_t i = 0; i < du; ++i) {
      if (reactants[i] != 0) r.unconserved_reactants.push_back(i);
      if (products[i] != 0) r.unconserved_products.push_back(i);
    }
    for (std::size_t i = du; i < s.species_count; ++i) {
      r.conserved_reactants.push_back(reactants[i]);
      r.conserved_shift.push_back(products[i] - reactants[i]);
    }
    out.push_back(std::move(r));
  }
  return out;
}

bool can_fire(const SplitReaction& r, const std::vector<bool>& in_available, std::span<const std::int64_t> e) {
  for (auto i : r.unconserved_reactants)
    if (!in_available[i]) return false;
  for (std::size_t c = 0; c < e.size(); ++c)
    if (e[c] < r.conserved_reactants[c]) return false;
  return true;
}

std::vector<bool> membership(const SpeciesSet& set, std::size_t n) {
  std::vector<bool> in(n, false);
  for (auto i : set) in.at(i) = true;
  return in;
}

void check_shapes(const NetworkStructure& s, const ConservedStructure& cs) {
  if (s.species_count != cs.species_count())
    throw DimensionMismatch("network and conserved structure disagree on species count");
}

// Class analysis over precomputed split reactions.
ConservedClassAnalysis analyse(const std::vector<SplitReaction>& reactions, const ConservedStructure& cs,
                               const std::map<Counts, std::size_t>& state_index, const SpeciesSet& available) {
  const auto& states = cs.conserved_states;
  const std::size_t n = states.size();
  auto in_available = membership(available, cs.unconserved_count);
  ConservedClassAnalysis out;
  out.available = available;
  out.transitions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& succ = out.transitions[i];
    for (const auto& r : reactions) {
      if (!can_fire(r, in_available, states[i])) continue;
      Counts next = states[i];
      for (std::size_t c = 0; c < next.size(); ++c) next[c] += r.conserved_shift[c];
      auto it = state_index.find(next);
      if (it == state_index.end())
        throw std::logic_error("conserved transition leaves E_c; conservation vector is wrong");
      succ.push_back(it->second);
    }
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
  }

  if (n <= kPoweringLimit) {
    out.reachability = reachability_by_powering(out.transitions);
    out.classes = classes_from_reachability(*out.reachability);
  } else {
    out.classes = strongly_connected_components(out.transitions);
  }
  std::vector<std::size_t> class_of(n);
  for (std::size_t c = 0; c < out.classes.size(); ++c)
    for (auto i : out.classes[c]) class_of[i] = c;
  out.closed.assign(out.classes.size(), true);
  for (std::size_t i = 0; i < n; ++i)
    for (auto j : out.transitions[i])
      if (class_of[j] != class_of[i]) out.closed[class_of[i]] = false;
  return out;
}

std::map<Counts, std::size_t> index_states(const ConservedStructure& cs) {
  std::map<Counts, std::size_t> index;
  for (std::size_t i = 0; i < cs.conserved_states.size(); ++i) index.emplace(cs.conserved_states[i], i);
  return index;
}

}  // namespace

std::vector<std::size_t> fireable_reactions(const NetworkStructure& s, const ConservedStructure& cs,
                                            const SpeciesSet& available, std::span<const std::int64_t> e) {
  check_shapes(s, cs);
  if (e.size() != cs.conserved_count) throw DimensionMismatch("conserved state has wrong length");
  auto reactions = split(s, cs.unconserved_count);
  auto in_available = membership(available, cs.unconserved_count);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < reactions.size(); ++k)
    if (can_fire(reactions[k], in_available, e)) out.push_back(k);
  return out;
}

BoolMatrix reachability_by_powering(const Adjacency& z) {
  const std::size_t n = z.size();
  BoolMatrix power(n, n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    power(i, i) = 1;
    for (auto j : z[i]) power(i, j) = 1;
  }
  // (I + Z)^m has the pattern of paths of length <= m; any m >= n - 1 gives
  // the same pattern as m = n - 1.
  for (std::size_t reach = 1; reach + 1 < n; reach *= 2) {
    BoolMatrix next(n, n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (!power(i, k)) continue;
        for (std::size_t j = 0; j < n; ++j)
          if (power(k, j)) next(i, j) = 1;
      }
    power = std::move(next);
  }
  return power;
}

BoolMatrix reachability_by_bfs(const Adjacency& z) {
  const std::size_t n = z.size();
  BoolMatrix out(n, n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::size_t> queue{s};
    out(s, s) = 1;
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      for (auto v : z[u])
        if (!out(s, v)) {
          out(s, v) = 1;
          queue.push_back(v);
        }
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> classes_from_reachability(const BoolMatrix& omega) {
  const std::size_t n = omega.rows();
  std::vector<bool> assigned(n, false);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    std::vector<std::size_t> cls;
    for (std::size_t j = i; j < n; ++j)
      if (!assigned[j] && omega(i, j) && omega(j, i)) {
        assigned[j] = true;
        cls.push_back(j);
      }
    classes.push_back(std::move(cls));
  }
  return classes;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const Adjacency& z) {
  // Iterative Tarjan.
  const std::size_t n = z.size();
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // vertex, next edge
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge < z[v].size()) {
        std::size_t w = z[v][edge++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
    }
  }
  std::sort(components.begin(), components.end());
  return components;
}

std::size_t ConservedClassAnalysis::eta() const {
  return static_cast<std::size_t>(std::count(closed.begin(), closed.end(), true));
}

std::vector<std::vector<std::size_t>> ConservedClassAnalysis::closed_classes() const {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (closed[c]) out.push_back(classes[c]);
  return out;
}

ConservedClassAnalysis conserved_class_analysis(const NetworkStructure& s, const ConservedStructure& cs,
                                                const SpeciesSet& available) {
  check_shapes(s, cs);
  return analyse(split(s, cs.unconserved_count), cs, index_states(cs), available);
}

std::vector<SpeciesSet> LevelDecomposition::cumulative() const {
  std::vector<SpeciesSet> out;
  SpeciesSet h;
  for (const auto& g : levels) {
    h.insert(h.end(), g.begin(), g.end());
    std::sort(h.begin(), h.end());
    out.push_back(h);
  }
  return out;
}

LevelDecomposition level_decomposition_conserved(const NetworkStructure& s, const ConservedStructure& cs) {
  check_shapes(s, cs);
  const std::size_t du = cs.unconserved_count;
  const bool conserved = cs.has_conservation();
  auto reactions = split(s, du);
  auto state_index = index_states(cs);

  LevelDecomposition out;
  SpeciesSet h;
  std::vector<bool> in_h(du, false);
  for (;;) {
    auto analysis = analyse(reactions, cs, state_index, h);
    // G_l: species outside H producible under every closed class.
    std::vector<std::size_t> votes(du, 0);
    const auto closed = analysis.closed_classes();
    for (const auto& cls : closed) {
      std::vector<bool> producible(du, false);
      for (auto e : cls)
        for (const auto& r : reactions)
          if (can_fire(r, in_h, cs.conserved_states[e]))
            for (auto i : r.unconserved_products) producible[i] = true;
      for (std::size_t i = 0; i < du; ++i)
        if (producible[i] && !in_h[i]) ++votes[i];
    }
    SpeciesSet level;
    for (std::size_t i = 0; i < du; ++i)
      if (!closed.empty() && votes[i] == closed.size()) level.push_back(i);
    if (conserved) out.class_analyses.push_back(std::move(analysis));
    if (level.empty()) break;
    for (auto i : level) in_h[i] = true;
    h.insert(h.end(), level.begin(), level.end());
    std::sort(h.begin(), h.end());
    out.levels.push_back(std::move(level));
  }
  out.exhaustive = h.size() == du;
  for (std::size_t i = 0; i < du; ++i)
    if (!in_h[i]) out.uncovered.push_back(i);
  return out;
}

LevelDecomposition level_decomposition(const NetworkStructure& s) {
  return level_decomposition_conserved(s, unconserved_structure(s.species_count));
}

std::string to_string(IrreducibilityStatus status) {
  switch (status) {
    case IrreducibilityStatus::Proven: return "IRREDUCIBLE_PROVEN";
    case IrreducibilityStatus::NecessaryConditionFailed: return "NECESSARY_CONDITION_FAILED";
    case IrreducibilityStatus::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

std::string to_string(IrreducibilityCondition condition) {
  switch (condition) {
    case IrreducibilityCondition::None: return "none";
    case IrreducibilityCondition::Rank: return "rank";
    case IrreducibilityCondition::Lattice: return "lattice";
    case IrreducibilityCondition::Lfp: return "lfp";
    case IrreducibilityCondition::Eta: return "eta";
    case IrreducibilityCondition::ForwardExhaustive: return "forward-exhaustive";
    case IrreducibilityCondition::InverseExhaustive: return "inverse-exhaustive";
    case IrreducibilityCondition::EmptyConservedSpace: return "empty-conserved-space";
  }
  return "none";
}

IrreducibilityStatus irreducibility_status_from_string(const std::string& s) {
  for (auto st : {IrreducibilityStatus::Proven, IrreducibilityStatus::NecessaryConditionFailed,
                  IrreducibilityStatus::Inconclusive})
    if (to_string(st) == s) return st;
  throw InputError("unknown irreducibility status '" + s + "'");
}

IrreducibilityCondition irreducibility_condition_from_string(const std::string& s) {
  for (auto c : {IrreducibilityCondition::None, IrreducibilityCondition::Rank, IrreducibilityCondition::Lattice,
                 IrreducibilityCondition::Lfp, IrreducibilityCondition::Eta,
                 IrreducibilityCondition::ForwardExhaustive, IrreducibilityCondition::InverseExhaustive,
                 IrreducibilityCondition::EmptyConservedSpace})
    if (to_string(c) == s) return c;
  throw InputError("unknown irreducibility condition '" + s + "'");
}

IntegerMatrix reduced_stoichiometry(const NetworkStructure& s, std::size_t unconserved_count) {
  return stoichiometry_matrix(s).row_block(0, unconserved_count);
}

IrreducibilityVerdict check_irreducibility(const ReactionNetwork& net, const ConservedStructure& cs) {
  const auto s = structure_of(net);
  check_shapes(s, cs);
  const std::size_t du = cs.unconserved_count;
  const bool conserved = cs.has_conservation();

  IrreducibilityVerdict v;
  v.required_rank = du;
  auto fail = [&](IrreducibilityStatus status, IrreducibilityCondition c, std::string why) {
    v.status = status;
    v.failed_condition = c;
    v.diagnostic = std::move(why);
    return v;
  };
  constexpr auto necessary = IrreducibilityStatus::NecessaryConditionFailed;

  if (conserved && cs.conserved_states.empty())
    return fail(necessary, IrreducibilityCondition::EmptyConservedSpace,
                "no conserved state satisfies the given totals");

  const IntegerMatrix reduced = reduced_stoichiometry(s, du);
  v.rank = rank(reduced);
  if (v.rank != du)
    return fail(necessary, IrreducibilityCondition::Rank,
                "stoichiometry rank " + std::to_string(v.rank) + " < " + std::to_string(du));

  v.hnf = hermite_normal_form(reduced);
  if (multiply(reduced, v.hnf->unimodular) != v.hnf->hnf)
    throw std::logic_error("Hermite normal form failed its M*U = H re-check");
  if (!lattice_spans_full(*v.hnf, du)) {
    std::string pivots;
    for (const auto& p : v.hnf->pivot_values()) pivots += (pivots.empty() ? "" : ",") + to_string(p);
    return fail(necessary, IrreducibilityCondition::Lattice,
                "integer column lattice is a proper sublattice (HNF pivots " + pivots + ")");
  }

  // Positive flux: reduced v = 0, v >= 1.
  const std::size_t k = net.reaction_count();
  LfpProblem f{RationalMatrix(k, k), RationalVector(k, Rational(-1)), to_rational(reduced),
               RationalVector(du)};
  for (std::size_t j = 0; j < k; ++j) f.a(j, j) = -1;
  v.lfp = solve_lfp(f);
  if (!v.lfp->feasible())
    return fail(necessary, IrreducibilityCondition::Lfp,
                std::string("no strictly positive reaction flux balances the ") +
                    (conserved ? "reduced " : "") + "stoichiometry");

  if (conserved) {
    v.full_availability = conserved_class_analysis(s, cs, [&] {
      SpeciesSet all(du);
      for (std::size_t i = 0; i < du; ++i) all[i] = i;
      return all;
    }());
    const auto& fa = *v.full_availability;
    if (fa.classes.size() != 1)
      return fail(necessary, IrreducibilityCondition::Eta,
                  "with every unconserved species available, E_c splits into " +
                      std::to_string(fa.classes.size()) + " classes (" + std::to_string(fa.eta()) + " closed)");
  }

  v.forward = level_decomposition_conserved(s, cs);
  if (!v.forward->exhaustive)
    return fail(IrreducibilityStatus::Inconclusive, IrreducibilityCondition::ForwardExhaustive,
                "forward level construction stops before covering every unconserved species");
  v.inverse = level_decomposition_conserved(inverse_structure(s), cs);
  if (!v.inverse->exhaustive)
    return fail(IrreducibilityStatus::Inconclusive, IrreducibilityCondition::InverseExhaustive,
                "inverse level construction stops before covering every unconserved species");

  v.status = IrreducibilityStatus::Proven;
  return v;
}

}  // namespace ergocheck
