#include <doctest.h>

#include <json.hpp>

#include "ergocheck/conservation.hpp"
#include "ergocheck/errors.hpp"
#include "ergocheck/oracle.hpp"
#include "support.hpp"

using namespace ergocheck;

namespace {

std::string birth_death(int birth, int death) {
  return "0 -> S ; " + std::to_string(birth) + "\nS -> 0 ; " + std::to_string(death) + "\n";
}

double x0(std::span<const std::int64_t> x) { return static_cast<double>(x[0]); }

}  // namespace

TEST_CASE("first jump from zero is a birth") {
  auto net = parse_network(birth_death(1, 1));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto traj = gillespie_simulate(net, {0}, 5.0, seed);
    REQUIRE(traj.jumps() >= 1);
    CHECK(traj.states[1] == Counts{1});
  }
}

TEST_CASE("simulation is reproducible and moves by one reaction at a time") {
  auto net = parse_network(testsupport::read_text(testsupport::network_path("vilar.net")));
  auto a = gillespie_simulate(net, {0, 0, 0, 0, 0, 1, 0, 1, 0}, 50.0, 9);
  auto b = gillespie_simulate(net, {0, 0, 0, 0, 0, 1, 0, 1, 0}, 50.0, 9);
  CHECK(a.times == b.times);
  CHECK(a.states == b.states);
  std::vector<Counts> shifts;
  for (const auto& r : net.reactions()) shifts.push_back(r.displacement());
  for (std::size_t j = 0; j < a.states.size(); ++j) {
    const auto& x = a.states[j];
    CHECK(x[5] + x[6] == 1);
    CHECK(x[7] + x[8] == 1);
    if (j == 0) continue;
    CHECK(a.times[j] > a.times[j - 1]);
    Counts step(9);
    for (std::size_t i = 0; i < 9; ++i) step[i] = x[i] - a.states[j - 1][i];
    CHECK(std::find(shifts.begin(), shifts.end(), step) != shifts.end());
  }
}

TEST_CASE("absorbing start gives a single-state path") {
  auto net = parse_network("A -> 0 ; 1");
  auto traj = gillespie_simulate(net, {0}, 10.0, 1);
  CHECK(traj.jumps() == 0);
  CHECK(time_average(traj, [](auto) { return 1.0; }) == 1.0);
  CHECK(time_average(traj, x0) == 0.0);
}

TEST_CASE("propensity overflow is reported") {
  auto net = parse_network("0 -> A ; 1e301");
  CHECK_THROWS_AS(gillespie_simulate(net, {0}, 1.0, 1), PropensityOverflow);
}

TEST_CASE("time average matches the Poisson mean") {
  auto net = parse_network(birth_death(1, 1));
  auto traj = gillespie_simulate(net, {0}, 20000.0, 3);
  CHECK(time_average(traj, [](auto) { return 1.0; }) == doctest::Approx(1.0));
  auto bm = batch_means(traj, x0);
  CHECK(bm.batches.size() == 20);
  CHECK(std::abs(bm.mean - 1.0) <= 3 * bm.standard_error);
  CHECK(bm.mean == doctest::Approx(time_average(traj, x0)));
}

TEST_CASE("truncated CME against Poisson") {
  for (auto [birth, death, box] : {std::tuple{1, 1, 50}, std::tuple{2, 1, 80}, std::tuple{1, 3, 50}}) {
    auto net = parse_network(birth_death(birth, death));
    auto cs = unconserved_structure(1);
    auto est = truncated_cme_stationary(net, cs, {box});
    REQUIRE(est.exact.has_value());
    const double lambda = static_cast<double>(birth) / death;
    auto pmf = testsupport::poisson_pmf(lambda, static_cast<std::size_t>(box));
    double tv = 0, tail = 1;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      tv += std::abs(est.probabilities[i] - pmf[i]);
      tail -= pmf[i];
    }
    tv = 0.5 * (tv + std::max(tail, 0.0));
    CHECK(tv < 1e-8);
    CHECK(est.mean(0) == doctest::Approx(lambda).epsilon(1e-6));
    CHECK(std::abs(est.deficit) < 1e-12);
    CHECK_FALSE(est.truncation_too_small);
    CHECK(est.residual < 1e-12);
  }
}

TEST_CASE("exact and floating solves agree") {
  auto net = parse_network("0 -> S ; 3\nS -> 0 ; 1\n2*S -> S ; 1/10\n");
  auto cs = unconserved_structure(1);
  TruncationOptions exact, floating;
  floating.exact_limit = 0;
  auto a = truncated_cme_stationary(net, cs, {40}, exact);
  auto b = truncated_cme_stationary(net, cs, {40}, floating);
  REQUIRE(a.exact.has_value());
  CHECK_FALSE(b.exact.has_value());
  for (std::size_t i = 0; i < a.probabilities.size(); ++i)
    CHECK(a.probabilities[i] == doctest::Approx(b.probabilities[i]).epsilon(1e-9).scale(1e-12));
}

TEST_CASE("one-state space is a point mass") {
  auto net = parse_network("species: G H\nG -> H ; 1\nH -> G ; 1");
  auto [ordered, cs] = reorder_conserved_last(net, find_conservation_relations(stoichiometry_matrix(net)));
  cs = with_totals(cs, {0});
  auto est = truncated_cme_stationary(ordered, cs, {});
  REQUIRE(est.support.size() == 1);
  CHECK(est.probabilities[0] == 1.0);
}

TEST_CASE("small boxes are flagged") {
  auto net = parse_network(birth_death(5, 1));
  auto est = truncated_cme_stationary(net, unconserved_structure(1), {3});
  CHECK(est.truncation_too_small);
  CHECK(est.boundary_mass > 1e-6);
}

TEST_CASE("irreducibility probe on truncations") {
  auto bd = parse_network(birth_death(1, 1));
  CHECK(empirical_irreducibility_probe(bd, unconserved_structure(1), {30}).strongly_connected);
  auto pb = parse_network("0 -> S ; 1");
  CHECK_FALSE(empirical_irreducibility_probe(pb, unconserved_structure(1), {30}).strongly_connected);

  auto vilar = parse_network(testsupport::read_text(testsupport::network_path("vilar.net")));
  auto [ordered, cs] = reorder_conserved_last(vilar, find_conservation_relations(stoichiometry_matrix(vilar)));
  cs = with_totals(cs, {1, 1});
  auto probe = empirical_irreducibility_probe(ordered, cs, Counts(5, 6));
  CHECK(probe.states == 7 * 7 * 7 * 7 * 7 * 4);
  CHECK(probe.interior_states > 0);
  CHECK(probe.strongly_connected);
  CHECK_THROWS_AS(empirical_irreducibility_probe(ordered, cs, Counts(5, 6), 1000), StateSpaceTooLarge);
}

TEST_CASE("time averages from different starting states agree") {
  auto net = parse_network(testsupport::read_text(testsupport::network_path("vilar.net")));
  auto f = [](std::span<const std::int64_t> x) { return static_cast<double>(x[6]); };
  auto a = batch_means(gillespie_simulate(net, {0, 0, 0, 0, 0, 1, 0, 1, 0}, 20000.0, 1), f);
  auto b = batch_means(gillespie_simulate(net, {5, 5, 5, 5, 5, 0, 1, 0, 1}, 20000.0, 2), f);
  CHECK(std::abs(a.mean - b.mean) <= 3 * std::hypot(a.standard_error, b.standard_error));
}

TEST_CASE("exports") {
  auto net = parse_network(birth_death(1, 1));
  auto traj = gillespie_simulate(net, {0}, 1.0, 4);
  auto csv = trajectory_csv(traj, net.species());
  CHECK(csv.rfind("t,S\n0,0\n", 0) == 0);
  auto est = truncated_cme_stationary(net, unconserved_structure(1), {10});
  auto j = nlohmann::json::parse(stationary_json(est, net.species()));
  CHECK(j["method"] == "TRUNCATED_CME");
  CHECK(j["states"].size() == 11);
  CHECK(j["states"][0]["exact"].is_string());
}
