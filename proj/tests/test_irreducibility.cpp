#include <doctest.h>

#include "ergocheck/conservation.hpp"
#include "ergocheck/irreducibility.hpp"
#include "support.hpp"

using namespace ergocheck;

namespace {

struct Prepared {
  ReactionNetwork net;
  ConservedStructure cs;
};

Prepared prepare(const std::string& text, std::vector<std::int64_t> totals = {}) {
  auto net = parse_network(text);
  auto [ordered, cs] = reorder_conserved_last(net, find_conservation_relations(stoichiometry_matrix(net)));
  if (cs.has_conservation()) cs = with_totals(cs, totals);
  return {ordered, cs};
}

std::string vilar_text() { return testsupport::read_text(testsupport::network_path("vilar.net")); }

std::string without_lines(const std::string& text, std::vector<std::size_t> reactions) {
  std::istringstream in(text);
  std::string line, out;
  std::size_t k = 0;
  while (std::getline(in, line)) {
    const bool is_reaction = line.find("->") != std::string::npos && line.rfind('#', 0) != 0;
    if (is_reaction && std::find(reactions.begin(), reactions.end(), ++k) != reactions.end()) continue;
    out += line + "\n";
  }
  return out;
}

const std::string kActivator =
    "species: S1 S2 S6 S7\n"
    "S6 + S2 -> S7 ; 1\nS7 -> S6 + S2 ; 1\nS7 -> S7 + S1 ; 1\nS6 -> S6 + S1 ; 1\n"
    "S1 -> 0 ; 1\nS1 -> S1 + S2 ; 1\nS2 -> 0 ; 1\n";

}  // namespace

TEST_CASE("fireable reactions") {
  auto v = prepare(vilar_text(), {1, 1});
  auto s = structure_of(v.net);
  // S7 present, S9 present: e = (0,1,0,1).
  auto fired = fireable_reactions(s, v.cs, {}, Counts{0, 1, 0, 1});
  CHECK(std::find(fired.begin(), fired.end(), 1) != fired.end());
  CHECK(std::find(fired.begin(), fired.end(), 0) == fired.end());

  auto bd = prepare("0 -> S ; 1\nS -> 0 ; 1");
  CHECK(fireable_reactions(structure_of(bd.net), bd.cs, {}, Counts{}) == std::vector<std::size_t>{0});
  CHECK(fireable_reactions(structure_of(bd.net), bd.cs, {0}, Counts{}) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("activator pair: one closed class, all of E or only (1,0)") {
  auto a = prepare(kActivator, {1});
  REQUIRE(a.cs.conserved_states == std::vector<Counts>{{0, 1}, {1, 0}});
  auto s = structure_of(a.net);
  auto with2 = conserved_class_analysis(s, a.cs, {0, 1});
  // Catalytic reactions leave the gene state alone and give self-loops.
  CHECK(with2.transitions == Adjacency{{0, 1}, {0, 1}});
  CHECK(with2.classes == std::vector<std::vector<std::size_t>>{{0, 1}});
  CHECK(with2.eta() == 1);
  auto without2 = conserved_class_analysis(s, a.cs, {0});
  CHECK(without2.transitions == Adjacency{{0, 1}, {1}});
  CHECK(without2.eta() == 1);
  CHECK(without2.closed_classes() == std::vector<std::vector<std::size_t>>{{1}});

  // The same on the full product space.
  auto v = prepare(vilar_text(), {1, 1});
  auto vs = structure_of(v.net);
  for (std::uint32_t mask = 0; mask < 32; ++mask) {
    SpeciesSet available;
    for (std::size_t i = 0; i < 5; ++i)
      if (mask & (1u << i)) available.push_back(i);
    auto an = conserved_class_analysis(vs, v.cs, available);
    CAPTURE(mask);
    CHECK(an.eta() == 1);
    if (mask & 2u) CHECK(an.closed_classes() == std::vector<std::vector<std::size_t>>{{0, 1, 2, 3}});
    else CHECK(an.closed_classes() == std::vector<std::vector<std::size_t>>{{3}});
  }
}

TEST_CASE("single conserved state") {
  auto p = prepare("species: A G\nG -> G + A ; 1\nA -> 0 ; 1\n", {1});
  REQUIRE(p.cs.conserved_states.size() == 1);
  auto an = conserved_class_analysis(structure_of(p.net), p.cs, {});
  CHECK(an.eta() == 1);
  CHECK(an.classes.size() == 1);
}

TEST_CASE("levels without conservation") {
  auto bd = level_decomposition(structure_of(parse_network("0 -> S ; 1\nS -> 0 ; 1")));
  CHECK(bd.levels == std::vector<SpeciesSet>{{0}});
  CHECK(bd.exhaustive);
  auto pb = structure_of(parse_network("0 -> S ; 1"));
  CHECK(level_decomposition(pb).exhaustive);
  auto pbi = level_decomposition(inverse_structure(pb));
  CHECK(pbi.levels.empty());
  CHECK_FALSE(pbi.exhaustive);
  auto ab = level_decomposition(structure_of(parse_network("species: A B\n0 -> A ; 1\nA + B -> 2*B ; 1")));
  CHECK(ab.levels == std::vector<SpeciesSet>{{0}});
  CHECK_FALSE(ab.exhaustive);
  CHECK(ab.uncovered == SpeciesSet{1});
}

TEST_CASE("levels of the oscillator, forward and inverse") {
  auto v = prepare(vilar_text(), {1, 1});
  auto s = structure_of(v.net);
  auto fwd = level_decomposition_conserved(s, v.cs);
  CHECK(fwd.levels == std::vector<SpeciesSet>{{0, 2}, {1, 3}, {4}});
  CHECK(fwd.exhaustive);
  auto inv = level_decomposition_conserved(inverse_structure(s), v.cs);
  CHECK(inv.levels == std::vector<SpeciesSet>{{0, 1, 2, 3}, {4}});
  CHECK(inv.exhaustive);
  auto h = fwd.cumulative();
  for (std::size_t l = 1; l < h.size(); ++l)
    CHECK(std::includes(h[l].begin(), h[l].end(), h[l - 1].begin(), h[l - 1].end()));
}

TEST_CASE("oscillator without reactions 6 and 11 has an empty first level") {
  auto v = prepare(without_lines(vilar_text(), {6, 11}), {1, 1});
  auto fwd = level_decomposition_conserved(structure_of(v.net), v.cs);
  CHECK(fwd.levels.empty());
  CHECK_FALSE(fwd.exhaustive);
  CHECK(fwd.uncovered == SpeciesSet{0, 1, 2, 3, 4});
}

TEST_CASE("irreducibility verdicts") {
  auto bd = prepare("0 -> S ; 1\nS -> 0 ; 1");
  auto vb = check_irreducibility(bd.net, bd.cs);
  CHECK(vb.status == IrreducibilityStatus::Proven);
  CHECK(vb.failed_condition == IrreducibilityCondition::None);

  auto v = prepare(vilar_text(), {1, 1});
  auto vv = check_irreducibility(v.net, v.cs);
  CHECK(vv.status == IrreducibilityStatus::Proven);
  CHECK(vv.rank == 5);
  REQUIRE(vv.hnf.has_value());
  CHECK(lattice_spans_full(*vv.hnf, 5));
  REQUIRE(vv.lfp.has_value());
  CHECK(vv.lfp->feasible());
  // The positive flux balances the reduced stoichiometry exactly.
  auto reduced = reduced_stoichiometry(structure_of(v.net), 5);
  auto flux = multiply(to_rational(reduced), vv.lfp->witness);
  for (const auto& x : flux) CHECK(x == 0);
  for (const auto& x : vv.lfp->witness) CHECK(x >= 1);

  auto pb = prepare("0 -> S ; 1");
  auto vp = check_irreducibility(pb.net, pb.cs);
  CHECK(vp.status == IrreducibilityStatus::NecessaryConditionFailed);
  CHECK(vp.failed_condition == IrreducibilityCondition::Lfp);

  auto lat = prepare("0 -> 2*S ; 1\n2*S -> 0 ; 1");
  auto vl = check_irreducibility(lat.net, lat.cs);
  CHECK(vl.status == IrreducibilityStatus::NecessaryConditionFailed);
  CHECK(vl.failed_condition == IrreducibilityCondition::Lattice);

  // Catalytic production only: B is never made from scratch.
  auto cat = prepare("species: A B\n0 -> A ; 1\nA -> 0 ; 1\nB -> 0 ; 1\nB -> 2*B ; 1\nA + B -> A ; 1");
  auto vc = check_irreducibility(cat.net, cat.cs);
  CHECK(vc.status == IrreducibilityStatus::Inconclusive);
  CHECK(vc.failed_condition == IrreducibilityCondition::ForwardExhaustive);

  // 2 G + 3 H is conserved, and no state has total 1.
  auto empty = prepare("species: A G H\n3*G -> 2*H ; 1\n2*H -> 3*G ; 1\n0 -> A ; 1\nA -> 0 ; 1\n", {1});
  REQUIRE(empty.cs.conserved_states.empty());
  auto ve = check_irreducibility(empty.net, empty.cs);
  CHECK(ve.status == IrreducibilityStatus::NecessaryConditionFailed);
  CHECK(ve.failed_condition == IrreducibilityCondition::EmptyConservedSpace);

  // A gene that is switched off for good: two classes at full availability.
  auto stuck = prepare("species: A G H\nG -> H ; 1\nG -> G + A ; 1\nA -> 0 ; 1\n0 -> A ; 1\n", {1});
  auto vs = check_irreducibility(stuck.net, stuck.cs);
  CHECK(vs.status == IrreducibilityStatus::NecessaryConditionFailed);
  CHECK(vs.failed_condition == IrreducibilityCondition::Eta);
}

TEST_CASE("boolean powering agrees with BFS on random digraphs") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  std::uniform_real_distribution<double> coin(0, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = size(rng);
    const double density = coin(rng) * 0.4;
    Adjacency adj(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && coin(rng) < density) adj[i].push_back(j);
    auto omega = reachability_by_powering(adj);
    auto oracle = testsupport::bfs_reachability(adj);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(static_cast<bool>(omega(i, j)) == oracle[i][j]);
    CHECK(classes_from_reachability(omega) == strongly_connected_components(adj));
  }
}
