#include <doctest.h>

#include "ergocheck/conservation.hpp"
#include "ergocheck/drift.hpp"
#include "ergocheck/errors.hpp"
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

DriftSystem system_of(const Prepared& p) { return build_drift_system(classify_reactions(p.net, p.cs), p.net, p.cs); }

Prepared vilar() { return prepare(testsupport::read_text(testsupport::network_path("vilar.net")), {1, 1}); }

const RationalVector kReferenceWitness{2, 1, 2, 1, 2, Rational(-1, 2), Rational(1, 2), Rational(-1, 2), Rational(1, 2)};

}  // namespace

TEST_CASE("reaction classification") {
  auto v = vilar();
  auto rc = classify_reactions(v.net, v.cs);
  CHECK(rc.unary_unconserved == std::vector<std::size_t>{6, 7, 8, 11, 12, 13, 15});
  CHECK(rc.binary == std::vector<std::size_t>{0, 2, 14});
  CHECK(rc.remainder == std::vector<std::size_t>{1, 3, 4, 5, 9, 10});

  auto bd = prepare("0 -> S ; 1\nS -> 0 ; 1");
  auto rb = classify_reactions(bd.net, bd.cs);
  CHECK(rb.unary_unconserved == std::vector<std::size_t>{1});
  CHECK(rb.binary.empty());
  CHECK(rb.remainder == std::vector<std::size_t>{0});

  auto third = prepare("species: A B\n3*A -> B ; 1\nB -> 0 ; 1\n0 -> A ; 1");
  try {
    classify_reactions(third.net, third.cs);
    FAIL("expected UnsupportedReactionOrder");
  } catch (const UnsupportedReactionOrder& e) {
    CHECK(e.reaction() == 0);
  }
}

TEST_CASE("classification partitions the reactions of random networks") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    auto net = testsupport::random_network(rng, 3, 6, 2);
    auto cs = unconserved_structure(3);
    auto rc = classify_reactions(net, cs);
    std::vector<int> seen(net.reaction_count(), 0);
    for (auto k : rc.unary_unconserved) ++seen[k];
    for (auto k : rc.binary) ++seen[k];
    for (auto k : rc.remainder) ++seen[k];
    for (auto c : seen) CHECK(c == 1);
  }
}

TEST_CASE("drift matrices") {
  auto bd = prepare("0 -> S ; 1\nS -> 0 ; 1");
  auto ds = system_of(bd);
  CHECK(ds.drift == RationalMatrix::from_rows({{-1}}));
  CHECK(ds.bound_block == RationalMatrix::from_rows({{-1}}));
  CHECK(ds.binary_stoichiometry.cols() == 0);

  auto chain = prepare("species: A B\nA -> B ; 1\nB -> 0 ; 1\n0 -> A ; 1");
  CHECK(system_of(chain).drift == RationalMatrix::from_rows({{-1, 1}, {0, -1}}));

  auto v = vilar();
  auto vs = system_of(v);
  CHECK(vs.drift.rows() == 5);
  CHECK(vs.drift.cols() == 9);
  CHECK(vs.bound_block.rows() == 5);
  CHECK(vs.binary_stoichiometry.cols() == 3);
  CHECK(multiply(vs.drift, kReferenceWitness) == RationalVector(5, -1));
  CHECK(multiply(to_rational(vs.binary_stoichiometry).transpose(), kReferenceWitness) == RationalVector(3, 0));
}

TEST_CASE("rates scale the drift matrix") {
  auto p = prepare("0 -> S ; 2\nS -> 0 ; 7/3");
  CHECK(system_of(p).drift == RationalMatrix::from_rows({{Rational(-7, 3)}}));
}

TEST_CASE("reference witness is accepted and positivised with alpha one") {
  auto v = vilar();
  auto ds = system_of(v);
  CHECK_FALSE(witness_violation(ds, kReferenceWitness).has_value());
  auto cert = positivize(ds, kReferenceWitness);
  CHECK(cert.alphas == RationalVector{1, 1});
  CHECK(cert.v == RationalVector{2, 1, 2, 1, 2, Rational(1, 2), Rational(3, 2), Rational(1, 2), Rational(3, 2)});
  CHECK(cert.drift_margin == RationalVector(5, -1));
  CHECK(verify_certificate(cert, ds));
}

TEST_CASE("bad witnesses are rejected with the violated block named") {
  auto v = vilar();
  auto ds = system_of(v);
  auto zero = RationalVector(9, 0);
  auto why = witness_violation(ds, zero);
  REQUIRE(why.has_value());
  CHECK(why->find("B-block") != std::string::npos);
  CHECK_THROWS_AS(positivize(ds, zero), WitnessRejected);

  auto flipped = kReferenceWitness;
  flipped[1] = -1;
  CHECK(witness_violation(ds, flipped).has_value());
  auto cert = positivize(ds, kReferenceWitness);
  cert.v[1] = -1;
  CHECK_FALSE(verify_certificate(cert, ds));

  CHECK_THROWS_AS(positivize(ds, RationalVector(3, 1)), WitnessRejected);
}

TEST_CASE("solver certificates") {
  auto bd = prepare("0 -> S ; 1\nS -> 0 ; 1");
  auto ds = system_of(bd);
  auto cert = check_negative_drift(ds);
  REQUIRE(cert.has_value());
  CHECK(cert->v == RationalVector{1});
  CHECK(verify_certificate(*cert, ds));

  auto v = vilar();
  auto vs = system_of(v);
  auto vc = check_negative_drift(vs);
  REQUIRE(vc.has_value());
  CHECK(verify_certificate(*vc, vs));
  for (const auto& x : vc->v) CHECK(x > 0);

  auto pb = prepare("0 -> S ; 1");
  CHECK_FALSE(check_negative_drift(system_of(pb)).has_value());
}

TEST_CASE("certificates form a cone") {
  auto v = vilar();
  auto ds = system_of(v);
  auto cert = positivize(ds, kReferenceWitness);
  for (const Rational& c : {Rational(2), Rational(3), Rational(7, 2)}) {
    auto s = scaled(cert, c);
    CHECK(verify_certificate(s, ds));
    for (std::size_t k : classify_reactions(v.net, v.cs).binary) {
      Rational change = 0;
      auto shift = v.net.reaction(k).displacement();
      for (std::size_t i = 0; i < shift.size(); ++i) change += s.v[i] * shift[i];
      CHECK(change == 0);
    }
  }
}
