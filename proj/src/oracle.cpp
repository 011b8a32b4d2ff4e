#include "ergocheck/oracle.hpp"

#include <Eigen/Sparse>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

#include "ergocheck/errors.hpp"
#include "ergocheck/irreducibility.hpp"

namespace ergocheck {

namespace {

constexpr double kRateGuard = 1e300;

// Uniform in (0, 1) from the top 53 bits.
double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

struct CountsHash {
  std::size_t operator()(const Counts& c) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : c) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

using StateIndex = std::unordered_map<Counts, std::size_t, CountsHash>;

StateIndex index_of(const std::vector<Counts>& states) {
  StateIndex index;
  index.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) index.emplace(states[i], i);
  return index;
}

}  // namespace

Trajectory gillespie_simulate(const ReactionNetwork& net, const Counts& x0, double t_end, std::uint64_t seed) {
  if (x0.size() != net.species_count()) throw DimensionMismatch("initial state has wrong length");
  if (!(t_end > 0)) throw InputError("simulation end time must be positive");
  for (auto x : x0)
    if (x < 0) throw InputError("initial state has a negative entry");

  const std::size_t k_count = net.reaction_count();
  std::vector<Counts> shifts;
  for (const auto& r : net.reactions()) shifts.push_back(r.displacement());

  Trajectory traj;
  traj.seed = seed;
  traj.end_time = t_end;
  traj.times.push_back(0.0);
  traj.states.push_back(x0);

  std::mt19937_64 rng(seed);
  std::vector<double> rates(k_count);
  Counts x = x0;
  double t = 0;
  for (;;) {
    double total = 0;
    for (std::size_t k = 0; k < k_count; ++k) {
      rates[k] = propensity_value(net, k, x);
      total += rates[k];
    }
    if (!std::isfinite(total) || total > kRateGuard)
      throw PropensityOverflow("total propensity " + std::to_string(total) + " at time " + std::to_string(t));
    if (total == 0) break;
    t += -std::log(open_uniform(rng)) / total;
    if (t >= t_end) break;
    double target = open_uniform(rng) * total;
    std::size_t k = 0;
    for (; k + 1 < k_count; ++k) {
      if (target < rates[k]) break;
      target -= rates[k];
    }
    while (rates[k] == 0) --k;  // rounding can land past the last enabled reaction
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += shifts[k][i];
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  return traj;
}

double time_average(const Trajectory& traj, const StateFunctional& f) {
  if (traj.states.empty()) throw InputError("empty trajectory");
  double acc = 0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const double next = i + 1 < traj.times.size() ? traj.times[i + 1] : traj.end_time;
    acc += f(traj.states[i]) * (next - traj.times[i]);
  }
  return acc / traj.end_time;
}

BatchMeans batch_means(const Trajectory& traj, const StateFunctional& f, std::size_t batches) {
  if (batches < 2) throw InputError("batch means need at least two batches");
  BatchMeans out;
  out.batches.assign(batches, 0.0);
  const double width = traj.end_time / static_cast<double>(batches);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    double start = traj.times[i];
    const double stop = i + 1 < traj.times.size() ? traj.times[i + 1] : traj.end_time;
    const double value = f(traj.states[i]);
    while (start < stop) {
      auto b = std::min(batches - 1, static_cast<std::size_t>(start / width));
      const double edge = b + 1 == batches ? stop : std::min(stop, (b + 1) * width);
      out.batches[b] += value * (edge - start);
      if (edge <= start) break;
      start = edge;
    }
  }
  double sum = 0;
  for (auto& b : out.batches) {
    b /= width;
    sum += b;
  }
  out.mean = sum / static_cast<double>(batches);
  double ss = 0;
  for (auto b : out.batches) ss += (b - out.mean) * (b - out.mean);
  const double var = ss / static_cast<double>(batches - 1);
  out.standard_error = std::sqrt(var / static_cast<double>(batches));
  return out;
}

std::string to_string(StationaryMethod m) {
  return m == StationaryMethod::TimeAverage ? "TIME_AVERAGE" : "TRUNCATED_CME";
}

double StationaryEstimate::mean(std::size_t species) const {
  double m = 0;
  for (std::size_t i = 0; i < support.size(); ++i) m += probabilities[i] * static_cast<double>(support[i].at(species));
  return m;
}

StationaryEstimate stationary_from_trajectory(const Trajectory& traj) {
  std::map<Counts, double> occupancy;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const double next = i + 1 < traj.times.size() ? traj.times[i + 1] : traj.end_time;
    occupancy[traj.states[i]] += next - traj.times[i];
  }
  StationaryEstimate est;
  est.method = StationaryMethod::TimeAverage;
  double total = 0;
  for (const auto& [state, time] : occupancy) {
    est.support.push_back(state);
    est.probabilities.push_back(time / traj.end_time);
    total += time / traj.end_time;
  }
  est.deficit = 1.0 - total;
  return est;
}

std::vector<Counts> truncated_states(const ConservedStructure& cs, const Counts& upper, std::size_t max_states) {
  const std::size_t du = cs.unconserved_count;
  if (upper.size() != du) throw DimensionMismatch("truncation bound needs one entry per unconserved species");
  double count = static_cast<double>(cs.conserved_states.size());
  for (auto u : upper) {
    if (u < 0) throw InputError("truncation bounds must be nonnegative");
    count *= static_cast<double>(u + 1);
  }
  if (count > static_cast<double>(max_states))
    throw StateSpaceTooLarge("truncated state space has " + std::to_string(static_cast<long long>(count)) +
                             " states, bound is " + std::to_string(max_states));
  std::vector<Counts> states;
  states.reserve(static_cast<std::size_t>(count));
  Counts x(du, 0);
  for (;;) {
    for (const auto& e : cs.conserved_states) {
      Counts s = x;
      s.insert(s.end(), e.begin(), e.end());
      states.push_back(std::move(s));
    }
    std::size_t i = du;
    while (i > 0) {
      --i;
      if (x[i] < upper[i]) {
        ++x[i];
        break;
      }
      x[i] = 0;
      if (i == 0) return states;
    }
    if (du == 0) return states;
  }
}

namespace {

struct Transition {
  std::size_t from, to;
  std::size_t reaction;
};

struct TruncatedChain {
  std::vector<Counts> states;
  std::vector<Transition> moves;  // enabled moves staying inside, excluding self-loops
  std::vector<bool> boundary;     // has an enabled move that leaves
};

TruncatedChain build_chain(const ReactionNetwork& net, const ConservedStructure& cs, const Counts& upper,
                           std::size_t max_states) {
  TruncatedChain chain;
  chain.states = truncated_states(cs, upper, max_states);
  const auto index = index_of(chain.states);
  chain.boundary.assign(chain.states.size(), false);
  std::vector<Counts> shifts;
  for (const auto& r : net.reactions()) shifts.push_back(r.displacement());
  for (std::size_t s = 0; s < chain.states.size(); ++s) {
    const Counts& x = chain.states[s];
    for (std::size_t k = 0; k < net.reaction_count(); ++k) {
      const auto& r = net.reaction(k);
      bool enabled = true;
      for (std::size_t i = 0; i < x.size() && enabled; ++i) enabled = x[i] >= r.reactants[i];
      if (!enabled) continue;
      Counts y = x;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += shifts[k][i];
      if (y == x) continue;
      auto it = index.find(y);
      if (it == index.end()) {
        chain.boundary[s] = true;
        continue;
      }
      chain.moves.push_back({s, it->second, k});
    }
  }
  return chain;
}

// Solves pi Q = 0 exactly by sparse elimination. The balance equation of
// the first state is replaced by pi_first = 1, which keeps the system sparse;
// the solution is normalised afterwards.
RationalVector solve_exact(const ReactionNetwork& net, const TruncatedChain& chain) {
  const std::size_t n = chain.states.size();
  std::vector<std::map<std::size_t, Rational>> rows(n);  // row j: balance of state j
  for (const auto& m : chain.moves) {
    Rational rate = propensity(net, m.reaction, chain.states[m.from]);
    rows[m.to][m.from] += rate;
    rows[m.from][m.from] -= rate;
  }
  RationalVector rhs(n);
  rows[0].clear();
  rows[0][0] = 1;
  rhs[0] = 1;
  for (auto& row : rows)
    std::erase_if(row, [](const auto& kv) { return kv.second == 0; });

  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && !rows[pivot].contains(c)) ++pivot;
    if (pivot == n) throw Error("truncated chain has more than one closed class; stationary law is not unique");
    std::swap(rows[c], rows[pivot]);
    std::swap(rhs[c], rhs[pivot]);
    const Rational p = rows[c].at(c);
    for (std::size_t r = c + 1; r < n; ++r) {
      auto it = rows[r].find(c);
      if (it == rows[r].end()) continue;
      const Rational f = it->second / p;
      for (const auto& [col, val] : rows[c]) {
        Rational& target = rows[r][col];
        target -= f * val;
        if (target == 0) rows[r].erase(col);
      }
      rhs[r] -= f * rhs[c];
    }
  }
  RationalVector pi(n);
  for (std::size_t c = n; c-- > 0;) {
    Rational acc = rhs[c];
    for (const auto& [col, val] : rows[c])
      if (col > c) acc -= val * pi[col];
    pi[c] = acc / rows[c].at(c);
  }
  Rational total = 0;
  for (const auto& q : pi) total += q;
  for (auto& q : pi) q /= total;
  return pi;
}

constexpr Eigen::Index kIterativeThreshold = 3000;

std::vector<double> solve_float(const ReactionNetwork& net, const TruncatedChain& chain) {
  const auto n = static_cast<Eigen::Index>(chain.states.size());
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& m : chain.moves) {
    const double rate = propensity_value(net, m.reaction, chain.states[m.from]);
    if (m.to != 0) triplets.emplace_back(m.to, m.from, rate);
    if (m.from != 0) triplets.emplace_back(m.from, m.from, -rate);
  }
  triplets.emplace_back(0, 0, 1.0);
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(0) = 1.0;
  Eigen::VectorXd x;
  // Direct factorisation suffers heavy fill-in on multi-dimensional boxes,
  // so larger chains try a preconditioned iterative solve first.
  bool solved = false;
  if (n > kIterativeThreshold) {
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> it;
    it.setTolerance(1e-13);
    it.setMaxIterations(20 * n);
    it.compute(a);
    if (it.info() == Eigen::Success) {
      x = it.solve(b);
      solved = it.info() == Eigen::Success && (a * x - b).norm() <= 1e-10 * x.norm();
    }
  }
  if (!solved) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw Error("sparse LU failed on truncated generator");
    x = lu.solve(b);
  }
  x /= x.sum();
  return {x.data(), x.data() + n};
}

}  // namespace

StationaryEstimate truncated_cme_stationary(const ReactionNetwork& net, const ConservedStructure& cs,
                                            const Counts& unconserved_upper, const TruncationOptions& options) {
  if (net.species_count() != cs.species_count())
    throw DimensionMismatch("network and conserved structure disagree on species count");
  auto chain = build_chain(net, cs, unconserved_upper, options.max_states);
  const std::size_t n = chain.states.size();

  StationaryEstimate est;
  est.method = StationaryMethod::TruncatedCme;
  std::size_t bandwidth = 0;
  for (const auto& m : chain.moves) bandwidth = std::max(bandwidth, m.from > m.to ? m.from - m.to : m.to - m.from);
  if (n < options.exact_limit && n * bandwidth <= options.exact_profile_limit) {
    auto exact = solve_exact(net, chain);
    for (const auto& q : exact) est.probabilities.push_back(q.get_d());
    est.exact = std::move(exact);
  } else {
    est.probabilities = solve_float(net, chain);
  }
  for (auto& p : est.probabilities)
    if (p < 0 && p > -1e-14) p = 0;

  std::vector<double> balance(n, 0.0);
  for (const auto& m : chain.moves) {
    const double flow = est.probabilities[m.from] * propensity_value(net, m.reaction, chain.states[m.from]);
    balance[m.to] += flow;
    balance[m.from] -= flow;
  }
  for (auto b : balance) est.residual = std::max(est.residual, std::abs(b));

  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += est.probabilities[i];
    if (chain.boundary[i]) est.boundary_mass += est.probabilities[i];
  }
  est.deficit = 1.0 - total;
  est.truncation_too_small = est.boundary_mass > options.boundary_threshold;
  est.support = std::move(chain.states);
  return est;
}

ProbeResult empirical_irreducibility_probe(const ReactionNetwork& net, const ConservedStructure& cs,
                                           const Counts& unconserved_upper, std::size_t max_states) {
  auto chain = build_chain(net, cs, unconserved_upper, max_states);
  const std::size_t n = chain.states.size();
  Adjacency adj(n);
  for (const auto& m : chain.moves) adj[m.from].push_back(m.to);
  auto components = strongly_connected_components(adj);

  ProbeResult out;
  out.states = n;
  out.components = components.size();
  std::vector<std::size_t> comp_of(n);
  for (std::size_t c = 0; c < components.size(); ++c)
    for (auto s : components[c]) comp_of[s] = c;
  std::optional<std::size_t> interior_comp;
  out.strongly_connected = true;
  for (std::size_t s = 0; s < n; ++s) {
    if (chain.boundary[s]) continue;
    ++out.interior_states;
    if (!interior_comp) interior_comp = comp_of[s];
    else if (*interior_comp != comp_of[s]) out.strongly_connected = false;
  }
  return out;
}

std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& species) {
  std::ostringstream os;
  os << std::setprecision(17) << 't';
  for (const auto& s : species) os << ',' << s;
  os << '\n';
  for (std::size_t j = 0; j < traj.states.size(); ++j) {
    os << traj.times[j];
    for (auto x : traj.states[j]) os << ',' << x;
    os << '\n';
  }
  return os.str();
}

std::string stationary_json(const StationaryEstimate& est, const std::vector<std::string>& species) {
  nlohmann::ordered_json j;
  j["method"] = to_string(est.method);
  j["species"] = species;
  j["deficit"] = est.deficit;
  j["boundary_mass"] = est.boundary_mass;
  j["truncation_too_small"] = est.truncation_too_small;
  j["residual"] = est.residual;
  auto states = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < est.support.size(); ++i) {
    nlohmann::ordered_json s;
    s["state"] = est.support[i];
    s["probability"] = est.probabilities[i];
    if (est.exact) s["exact"] = to_string((*est.exact)[i]);
    states.push_back(s);
  }
  j["states"] = states;
  return j.dump(2) + "\n";
}

}  // namespace ergocheck
