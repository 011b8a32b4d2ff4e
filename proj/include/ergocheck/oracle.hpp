#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergocheck/conservation.hpp"
#include "ergocheck/network.hpp"

namespace ergocheck {

// Piecewise-constant path: states[i] holds on [times[i], times[i+1]), the
// last state up to end_time. times[0] = 0 and states[0] is the initial state.
struct Trajectory {
  std::vector<double> times;
  std::vector<Counts> states;
  std::uint64_t seed = 0;
  double end_time = 0;

  const Counts& initial() const { return states.front(); }
  std::size_t jumps() const { return states.size() - 1; }
};

// Direct-method SSA driven by std::mt19937_64 seeded with `seed`.
// Throws PropensityOverflow if the total rate stops being finite or
// exceeds 1e300.
Trajectory gillespie_simulate(const ReactionNetwork& net, const Counts& x0, double t_end, std::uint64_t seed);

using StateFunctional = std::function<double(std::span<const std::int64_t>)>;

double time_average(const Trajectory& traj, const StateFunctional& f);

struct BatchMeans {
  double mean = 0;
  double standard_error = 0;
  std::vector<double> batches;
};

// Time average split into equal-length windows; the standard error is
// the sample deviation of window averages over sqrt(batches).
BatchMeans batch_means(const Trajectory& traj, const StateFunctional& f, std::size_t batches = 20);

enum class StationaryMethod { TimeAverage, TruncatedCme };
std::string to_string(StationaryMethod m);

struct StationaryEstimate {
  std::vector<Counts> support;
  std::vector<double> probabilities;
  std::optional<RationalVector> exact;  // present when solved in exact arithmetic
  StationaryMethod method = StationaryMethod::TruncatedCme;
  double deficit = 0;        // 1 - sum of probabilities
  double boundary_mass = 0;  // mass on states with a suppressed outgoing transition
  bool truncation_too_small = false;
  double residual = 0;       // max |pi Q| entry

  double mean(std::size_t species) const;
};

StationaryEstimate stationary_from_trajectory(const Trajectory& traj);

struct TruncationOptions {
  std::size_t max_states = 200'000;
  std::size_t exact_limit = 2000;  // exact rational solve below this size
  // ... and only when states x bandwidth of the generator stays below this,
  // since elimination fill and coefficient growth follow the bandwidth.
  std::size_t exact_profile_limit = 50'000;
  double boundary_threshold = 1e-6;
};

// Enumerates the box 0 <= x_i <= upper_i over the unconserved species
// times E_c, in lexicographic order of (unconserved, conserved).
std::vector<Counts> truncated_states(const ConservedStructure& cs, const Counts& unconserved_upper,
                                     std::size_t max_states);

// Stationary solution of the CME restricted to the truncated space, with
// transitions leaving it suppressed. `net` is in the conserved-last order.
StationaryEstimate truncated_cme_stationary(const ReactionNetwork& net, const ConservedStructure& cs,
                                            const Counts& unconserved_upper, const TruncationOptions& options = {});

struct ProbeResult {
  std::size_t states = 0;
  std::size_t interior_states = 0;
  std::size_t components = 0;  // strongly connected components of the truncated graph
  bool strongly_connected = false;  // all interior states in one component
};

// Transition graph on the truncated space; interior states are those whose
// enabled one-step moves stay inside it.
ProbeResult empirical_irreducibility_probe(const ReactionNetwork& net, const ConservedStructure& cs,
                                           const Counts& unconserved_upper,
                                           std::size_t max_states = kDefaultMaxStates);

// "t,<species...>" header then one row per state, species in the
// network's order.
std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& species);

// JSON object with method, deficit, boundary mass and the support with
// probabilities; exact probabilities as "p/q" strings when available.
std::string stationary_json(const StationaryEstimate& est, const std::vector<std::string>& species);

}  // namespace ergocheck
