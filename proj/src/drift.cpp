#include "ergocheck/drift.hpp"

#include "ergocheck/errors.hpp"

namespace ergocheck {

ReactionClassification classify_reactions(const ReactionNetwork& net, const ConservedStructure& cs) {
  if (net.species_count() != cs.species_count())
    throw DimensionMismatch("network and conserved structure disagree on species count");
  ReactionClassification rc;
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    const auto& r = net.reaction(k);
    const auto order = r.order();
    if (order >= 3) throw UnsupportedReactionOrder(k);
    if (order == 2) {
      rc.binary.push_back(k);
      continue;
    }
    if (order == 1) {
      std::size_t i = 0;
      while (r.reactants[i] == 0) ++i;
      if (i < cs.unconserved_count) {
        rc.unary_unconserved.push_back(k);
        rc.unary_species.push_back(i);
        continue;
      }
    }
    rc.remainder.push_back(k);
  }
  return rc;
}

DriftSystem build_drift_system(const ReactionClassification& rc, const ReactionNetwork& net,
                               const ConservedStructure& cs) {
  const std::size_t d = net.species_count(), du = cs.unconserved_count;
  DriftSystem ds;
  ds.drift = RationalMatrix(du, d);
  for (std::size_t u = 0; u < rc.unary_unconserved.size(); ++u) {
    const auto& r = net.reaction(rc.unary_unconserved[u]);
    const std::size_t i = rc.unary_species[u];
    for (std::size_t j = 0; j < d; ++j) {
      const auto shift = r.products[j] - r.reactants[j];
      if (shift != 0) ds.drift(i, j) += r.rate * shift;
    }
  }
  ds.binary_stoichiometry = IntegerMatrix(d, rc.binary.size());
  for (std::size_t q = 0; q < rc.binary.size(); ++q) {
    const auto& r = net.reaction(rc.binary[q]);
    for (std::size_t j = 0; j < d; ++j) ds.binary_stoichiometry(j, q) = r.products[j] - r.reactants[j];
  }
  // One row per unconserved species. The stacked right-hand side below has
  // 2*d_u entries, so B itself has d_u rows, not 2*d_u.
  ds.bound_block = RationalMatrix(du, d);
  for (std::size_t i = 0; i < du; ++i) ds.bound_block(i, i) = -1;

  ds.problem.a = RationalMatrix(2 * du, d);
  for (std::size_t i = 0; i < du; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      ds.problem.a(i, j) = ds.drift(i, j);
      ds.problem.a(du + i, j) = ds.bound_block(i, j);
    }
  ds.problem.b.assign(2 * du, Rational(-1));
  ds.problem.a_eq = to_rational(ds.binary_stoichiometry.transpose());
  ds.problem.b_eq.assign(rc.binary.size(), Rational(0));
  ds.gammas = cs.gammas;
  return ds;
}

std::optional<std::string> witness_violation(const DriftSystem& ds, const RationalVector& w) {
  const std::size_t d = ds.drift.cols(), du = ds.drift.rows();
  if (w.size() != d)
    return "witness has " + std::to_string(w.size()) + " entries, expected " + std::to_string(d);
  auto bound = multiply(ds.bound_block, w);
  for (std::size_t i = 0; i < du; ++i)
    if (bound[i] > -1)
      return "B-block row " + std::to_string(i + 1) + ": entry " + std::to_string(i + 1) + " is " +
             to_string(w[i]) + ", needs >= 1";
  auto drift = multiply(ds.drift, w);
  for (std::size_t i = 0; i < du; ++i)
    if (drift[i] > -1) return "A-block row " + std::to_string(i + 1) + ": " + to_string(drift[i]) + " > -1";
  auto flux = multiply(to_rational(ds.binary_stoichiometry.transpose()), w);
  for (std::size_t q = 0; q < flux.size(); ++q)
    if (flux[q] != 0) return "M_q column " + std::to_string(q + 1) + ": " + to_string(flux[q]) + " != 0";
  return std::nullopt;
}

LyapunovCertificate positivize(const DriftSystem& ds, const RationalVector& w) {
  if (auto bad = witness_violation(ds, w)) throw WitnessRejected(*bad);
  LyapunovCertificate cert;
  cert.w = w;
  cert.v = w;
  for (const auto& gamma : ds.gammas) {
    // gamma lies in the kernel of both the drift matrix and M_q^T, so any
    // alpha keeps those constraints; only positivity on supp(gamma) matters.
    Rational alpha = 1;
    auto positive = [&] {
      for (std::size_t i = 0; i < gamma.size(); ++i)
        if (gamma[i] != 0 && w[i] + alpha * gamma[i] <= 0) return false;
      return true;
    };
    while (!positive()) alpha *= 2;
    for (std::size_t i = 0; i < gamma.size(); ++i)
      if (gamma[i] != 0) cert.v[i] += alpha * gamma[i];
    cert.alphas.push_back(alpha);
  }
  cert.drift_margin = multiply(ds.drift, w);
  return cert;
}

std::optional<LyapunovCertificate> check_negative_drift(const DriftSystem& ds) {
  auto outcome = solve_lfp(ds.problem);
  if (!outcome.feasible()) return std::nullopt;
  return positivize(ds, outcome.witness);
}

bool verify_certificate(const LyapunovCertificate& cert, const DriftSystem& ds) {
  const std::size_t d = ds.drift.cols();
  if (cert.w.size() != d || cert.v.size() != d || cert.alphas.size() != ds.gammas.size()) return false;
  if (witness_violation(ds, cert.w)) return false;
  RationalVector expected = cert.w;
  for (std::size_t r = 0; r < ds.gammas.size(); ++r) {
    if (cert.alphas[r] <= 0) return false;
    for (std::size_t i = 0; i < d; ++i)
      if (ds.gammas[r][i] != 0) expected[i] += cert.alphas[r] * ds.gammas[r][i];
  }
  if (expected != cert.v) return false;
  for (const auto& x : cert.v)
    if (x <= 0) return false;
  for (const auto& x : multiply(ds.drift, cert.v))
    if (x >= 0) return false;
  for (const auto& x : multiply(to_rational(ds.binary_stoichiometry.transpose()), cert.v))
    if (x != 0) return false;
  return cert.drift_margin == multiply(ds.drift, cert.w);
}

LyapunovCertificate scaled(const LyapunovCertificate& cert, const Rational& factor) {
  auto scale = [&](RationalVector x) {
    for (auto& e : x) e *= factor;
    return x;
  };
  return {scale(cert.w), scale(cert.v), scale(cert.alphas), scale(cert.drift_margin)};
}

}  // namespace ergocheck
