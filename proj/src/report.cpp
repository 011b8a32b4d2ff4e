#include "ergocheck/report.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <map>
#include <json.hpp>
#include <sstream>

#include "ergocheck/errors.hpp"
#include "ergocheck/oracle.hpp"

namespace ergocheck {

using Json = nlohmann::ordered_json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ProvenErgodic: return "PROVEN_ERGODIC";
    case Verdict::IrreducibilityDisproven: return "IRREDUCIBILITY_DISPROVEN";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    case Verdict::Unsupported: return "UNSUPPORTED";
  }
  return "INCONCLUSIVE";
}

Verdict verdict_from_string(const std::string& s) {
  for (auto v : {Verdict::ProvenErgodic, Verdict::IrreducibilityDisproven, Verdict::Inconclusive,
                 Verdict::Unsupported})
    if (to_string(v) == s) return v;
  throw InputError("unknown verdict '" + s + "'");
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::ProvenErgodic: return 0;
    case Verdict::Inconclusive: return 1;
    case Verdict::IrreducibilityDisproven: return 2;
    case Verdict::Unsupported: return 4;
  }
  return 1;
}

std::string to_string(DriftStatus s) {
  switch (s) {
    case DriftStatus::Feasible: return "FEASIBLE";
    case DriftStatus::Infeasible: return "INFEASIBLE";
    case DriftStatus::NotRun: return "NOT_RUN";
    case DriftStatus::Unsupported: return "UNSUPPORTED";
  }
  return "NOT_RUN";
}

DriftStatus drift_status_from_string(const std::string& s) {
  for (auto d : {DriftStatus::Feasible, DriftStatus::Infeasible, DriftStatus::NotRun, DriftStatus::Unsupported})
    if (to_string(d) == s) return d;
  throw InputError("unknown drift status '" + s + "'");
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < length; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

class Stopwatch {
 public:
  double lap_ms() {
    auto now = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

double round_ms(double ms) { return std::round(ms * 1000.0) / 1000.0; }

std::string condition_reason(const IrreducibilityVerdict& v) {
  return to_string(v.failed_condition) + ": " + v.diagnostic;
}

DriftReport run_drift(const ReactionNetwork& net, const ConservedStructure& cs,
                      const std::optional<RationalVector>& witness) {
  DriftReport dr;
  ReactionClassification rc;
  try {
    rc = classify_reactions(net, cs);
  } catch (const UnsupportedReactionOrder& e) {
    dr.status = DriftStatus::Unsupported;
    dr.diagnostic = e.what();
    return dr;
  }
  dr.classification = rc;
  const auto ds = build_drift_system(rc, net, cs);
  std::optional<LyapunovCertificate> cert;
  if (witness) {
    dr.witness_supplied = true;
    cert = positivize(ds, *witness);
  } else {
    cert = check_negative_drift(ds);
  }
  if (!cert) {
    dr.status = DriftStatus::Infeasible;
    dr.diagnostic = "no linear function has negative drift under the unary reactions while "
                    "staying constant under the binary ones";
    return dr;
  }
  dr.status = DriftStatus::Feasible;
  dr.verified = verify_certificate(*cert, ds);
  dr.certificate = std::move(cert);
  return dr;
}

OracleSummary run_oracle(const ReactionNetwork& net, const ConservedStructure& cs, const AnalyzeOptions& options) {
  OracleSummary out;
  const std::size_t d = net.species_count();
  if (options.oracle == OracleMode::Ssa) {
    Counts x0(cs.unconserved_count, 0);
    const auto& e = cs.conserved_states.front();
    x0.insert(x0.end(), e.begin(), e.end());
    auto traj = gillespie_simulate(net, x0, options.ssa_end_time, options.seed);
    out.method = to_string(StationaryMethod::TimeAverage);
    out.seed = options.seed;
    out.end_time = options.ssa_end_time;
    out.jumps = traj.jumps();
    for (std::size_t i = 0; i < d; ++i) {
      auto bm = batch_means(traj, [i](std::span<const std::int64_t> x) { return static_cast<double>(x[i]); });
      out.means.push_back(bm.mean);
      out.standard_errors.push_back(bm.standard_error);
    }
  } else {
    Counts upper(cs.unconserved_count, options.cme_box);
    TruncationOptions topt;
    topt.max_states = std::min<std::size_t>(options.max_states, topt.max_states);
    auto est = truncated_cme_stationary(net, cs, upper, topt);
    out.method = to_string(StationaryMethod::TruncatedCme);
    out.states = est.support.size();
    out.boundary_mass = est.boundary_mass;
    out.truncation_too_small = est.truncation_too_small;
    out.residual = est.residual;
    for (std::size_t i = 0; i < d; ++i) out.means.push_back(est.mean(i));
    out.probe_strongly_connected = empirical_irreducibility_probe(net, cs, upper, topt.max_states).strongly_connected;
  }
  return out;
}

}  // namespace

ErgodicityReport analyze_text(std::string_view text, const AnalyzeOptions& options) {
  Stopwatch clock;
  ErgodicityReport rep;
  rep.input_sha256 = sha256_hex(text);

  const auto net = parse_network(text);
  rep.timings_ms.emplace_back("parse", round_ms(clock.lap_ms()));
  rep.network.species = net.species();
  rep.network.reaction_count = net.reaction_count();
  rep.network.identity_reactions = net.identity_reactions();
  rep.network.order.resize(net.species_count());
  for (std::size_t i = 0; i < net.species_count(); ++i) rep.network.order[i] = i;
  rep.network.unconserved_count = net.species_count();

  std::vector<Counts> gammas;
  try {
    gammas = find_conservation_relations(stoichiometry_matrix(net));
  } catch (const OverlappingConservation& e) {
    rep.verdict = Verdict::Unsupported;
    rep.reason = std::string("overlapping conservation relations: ") + e.what();
    rep.conservation = unconserved_structure(net.species_count());
    rep.conservation.conserved_states.clear();
    return rep;
  }
  auto [ordered, cs] = reorder_conserved_last(net, gammas);
  rep.network.order = cs.order;
  rep.network.unconserved_count = cs.unconserved_count;
  rep.network.conserved_count = cs.conserved_count;

  if (cs.has_conservation()) {
    if (!options.conserved_totals) {
      std::string list;
      for (const auto& g : gammas) {
        std::string term;
        for (std::size_t i = 0; i < g.size(); ++i)
          if (g[i] != 0)
            term += (term.empty() ? "" : " + ") + (g[i] == 1 ? "" : std::to_string(g[i]) + "*") + net.species()[i];
        list += "\n  " + term;
      }
      throw InputError("network has " + std::to_string(gammas.size()) +
                       " conservation relation(s); supply one total per relation with --conserved-totals:" + list);
    }
    if (options.conserved_totals->size() != gammas.size())
      throw InputError("expected " + std::to_string(gammas.size()) + " conserved totals, got " +
                       std::to_string(options.conserved_totals->size()));
    try {
      cs = with_totals(std::move(cs), *options.conserved_totals, options.max_states);
    } catch (const StateSpaceTooLarge& e) {
      cs.totals = *options.conserved_totals;
      rep.conservation = cs;
      rep.verdict = Verdict::Unsupported;
      rep.reason = e.what();
      return rep;
    }
  }
  rep.network.conserved_state_count = cs.conserved_states.size();
  rep.conservation = cs;
  rep.timings_ms.emplace_back("conservation", round_ms(clock.lap_ms()));

  std::optional<RationalVector> witness;
  if (options.witness) {
    if (options.witness->size() != net.species_count())
      throw WitnessRejected("witness has " + std::to_string(options.witness->size()) + " entries, expected " +
                            std::to_string(net.species_count()));
    witness.emplace(net.species_count());
    for (std::size_t i = 0; i < net.species_count(); ++i) (*witness)[i] = (*options.witness)[cs.order[i]];
  }

  double irreducibility_ms = 0, drift_ms = 0;
  auto irreducibility_task = [&] {
    Stopwatch sw;
    auto v = check_irreducibility(ordered, cs);
    irreducibility_ms = sw.lap_ms();
    return v;
  };
  auto drift_task = [&] {
    Stopwatch sw;
    auto d = run_drift(ordered, cs, witness);
    drift_ms = sw.lap_ms();
    return d;
  };
  if (options.concurrent) {
    auto drift_future = std::async(std::launch::async, drift_task);
    rep.irreducibility = irreducibility_task();
    rep.drift = drift_future.get();
  } else {
    rep.irreducibility = irreducibility_task();
    rep.drift = drift_task();
  }
  clock.lap_ms();
  rep.timings_ms.emplace_back("irreducibility", round_ms(irreducibility_ms));
  rep.timings_ms.emplace_back("drift", round_ms(drift_ms));

  const auto& irr = *rep.irreducibility;
  if (rep.drift.status == DriftStatus::Unsupported) {
    rep.verdict = Verdict::Unsupported;
    rep.reason = "reaction order above two: " + rep.drift.diagnostic;
  } else if (irr.status == IrreducibilityStatus::NecessaryConditionFailed) {
    rep.verdict = Verdict::IrreducibilityDisproven;
    rep.reason = "necessary irreducibility condition failed: " + condition_reason(irr);
  } else if (irr.status == IrreducibilityStatus::Inconclusive) {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = "sufficient irreducibility condition failed: " + condition_reason(irr);
  } else if (rep.drift.status != DriftStatus::Feasible) {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = "negative drift condition failed: " + rep.drift.diagnostic;
  } else if (!rep.drift.verified) {
    rep.verdict = Verdict::Inconclusive;
    rep.reason = "Lyapunov certificate failed exact re-verification";
  } else {
    rep.verdict = Verdict::ProvenErgodic;
    rep.reason = "state space irreducible and linear Lyapunov certificate verified";
  }

  if (options.oracle != OracleMode::Off && !cs.conserved_states.empty()) {
    try {
      rep.oracle = run_oracle(ordered, cs, options);
    } catch (const Error& e) {
      OracleSummary failed;
      failed.method = options.oracle == OracleMode::Ssa ? "TIME_AVERAGE" : "TRUNCATED_CME";
      rep.oracle = failed;
      rep.reason += std::string("; oracle failed: ") + e.what();
    }
    rep.timings_ms.emplace_back("oracle", round_ms(clock.lap_ms()));
  }
  return rep;
}

ErgodicityReport analyze(const std::string& path, const AnalyzeOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return analyze_text(buffer.str(), options);
}

ErgodicityReport verify(const std::string& path, const RationalVector& witness, AnalyzeOptions options) {
  options.witness = witness;
  return analyze(path, options);
}

namespace {

Rational json_rational(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>()), 10));
  if (j.is_number()) return parse_rational(j.dump());
  throw InputError("witness entries must be numbers or \"p/q\" strings");
}

}  // namespace

RationalVector parse_witness_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw InputError(std::string("witness is not valid JSON: ") + e.what());
  }
  if (j.is_object()) {
    if (j.contains("witness")) j = j["witness"];
    else if (j.contains("w")) j = j["w"];
    else throw InputError("witness object needs a \"witness\" or \"w\" array");
  }
  if (!j.is_array()) throw InputError("witness must be a JSON array");
  RationalVector out;
  try {
    for (const auto& e : j) out.push_back(json_rational(e));
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON rendering

namespace {

Json rationals(const RationalVector& v) { return to_strings(v); }

Json one_based(const std::vector<std::size_t>& v) {
  Json a = Json::array();
  for (auto x : v) a.push_back(x + 1);
  return a;
}

std::vector<std::size_t> from_one_based(const Json& j) {
  std::vector<std::size_t> out;
  for (const auto& x : j) out.push_back(x.get<std::size_t>() - 1);
  return out;
}

class Names {
 public:
  explicit Names(const NetworkSummary& n) : net_(n) {
    for (std::size_t i = 0; i < n.order.size(); ++i) position_.emplace(n.reordered_name(i), i);
  }
  Json of(const SpeciesSet& s) const {
    Json a = Json::array();
    for (auto i : s) a.push_back(net_.reordered_name(i));
    return a;
  }
  SpeciesSet parse(const Json& j) const {
    SpeciesSet out;
    for (const auto& n : j) {
      auto it = position_.find(n.get<std::string>());
      if (it == position_.end()) throw InputError("report names unknown species '" + n.get<std::string>() + "'");
      out.push_back(it->second);
    }
    return out;
  }
  // Conserved-last vector to input order.
  template <class T>
  std::vector<T> to_input(const std::vector<T>& v) const {
    std::vector<T> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[net_.order[i]] = v[i];
    return out;
  }
  template <class T>
  std::vector<T> from_input(const std::vector<T>& v) const {
    std::vector<T> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v.at(net_.order[i]);
    return out;
  }

 private:
  const NetworkSummary& net_;
  std::map<std::string, std::size_t> position_;
};

Json analysis_json(const ConservedClassAnalysis& a, const Names& names) {
  Json j;
  j["available"] = names.of(a.available);
  j["transitions"] = a.transitions;
  j["classes"] = a.classes;
  Json closed = Json::array();
  for (bool c : a.closed) closed.push_back(c);
  j["closed"] = closed;
  j["eta"] = a.eta();
  return j;
}

ConservedClassAnalysis analysis_from_json(const Json& j, const Names& names) {
  ConservedClassAnalysis a;
  a.available = names.parse(j.at("available"));
  a.transitions = j.at("transitions").get<Adjacency>();
  a.classes = j.at("classes").get<std::vector<std::vector<std::size_t>>>();
  for (const auto& c : j.at("closed")) a.closed.push_back(c.get<bool>());
  return a;
}

Json levels_json(const LevelDecomposition& l, const Names& names) {
  Json j;
  Json levels = Json::array();
  for (const auto& g : l.levels) levels.push_back(names.of(g));
  j["levels"] = levels;
  j["exhaustive"] = l.exhaustive;
  j["uncovered"] = names.of(l.uncovered);
  Json analyses = Json::array();
  for (const auto& a : l.class_analyses) analyses.push_back(analysis_json(a, names));
  j["class_analyses"] = analyses;
  return j;
}

LevelDecomposition levels_from_json(const Json& j, const Names& names) {
  LevelDecomposition l;
  for (const auto& g : j.at("levels")) l.levels.push_back(names.parse(g));
  l.exhaustive = j.at("exhaustive").get<bool>();
  l.uncovered = names.parse(j.at("uncovered"));
  for (const auto& a : j.at("class_analyses")) l.class_analyses.push_back(analysis_from_json(a, names));
  return l;
}

template <class T, class F>
Json optional_json(const std::optional<T>& v, F&& render) {
  return v ? render(*v) : Json(nullptr);
}

Json irreducibility_json(const IrreducibilityVerdict& v, const Names& names, bool conserved) {
  Json j;
  j["status"] = to_string(v.status);
  j["failed_condition"] = to_string(v.failed_condition);
  j["diagnostic"] = v.diagnostic;
  j["rank"] = v.rank;
  j["required_rank"] = v.required_rank;
  j["hnf"] = optional_json(v.hnf, [](const HnfResult& h) {
    Json hj;
    hj["rank"] = h.rank();
    hj["pivot_rows"] = one_based(h.pivot_rows);
    Json values = Json::array();
    for (const auto& p : h.pivot_values()) values.push_back(to_string(p));
    hj["pivot_values"] = values;
    return hj;
  });
  j["positive_flux"] = optional_json(v.lfp, [conserved](const LfpOutcome& o) {
    Json lj;
    lj["stoichiometry"] = conserved ? "reduced" : "full";
    lj["status"] = to_string(o.status);
    lj["witness"] = o.feasible() ? rationals(o.witness) : Json(nullptr);
    return lj;
  });
  j["full_availability"] = optional_json(v.full_availability, [&](const ConservedClassAnalysis& a) {
    return analysis_json(a, names);
  });
  j["forward_levels"] = optional_json(v.forward, [&](const LevelDecomposition& l) { return levels_json(l, names); });
  j["inverse_levels"] = optional_json(v.inverse, [&](const LevelDecomposition& l) { return levels_json(l, names); });
  return j;
}

IrreducibilityVerdict irreducibility_from_json(const Json& j, const Names& names) {
  IrreducibilityVerdict v;
  v.status = irreducibility_status_from_string(j.at("status").get<std::string>());
  v.failed_condition = irreducibility_condition_from_string(j.at("failed_condition").get<std::string>());
  v.diagnostic = j.at("diagnostic").get<std::string>();
  v.rank = j.at("rank").get<std::size_t>();
  v.required_rank = j.at("required_rank").get<std::size_t>();
  if (const auto& h = j.at("hnf"); !h.is_null()) {
    // Only the pivot profile is serialised; rebuild a matrix carrying it.
    HnfResult r;
    r.pivot_rows = from_one_based(h.at("pivot_rows"));
    std::size_t rows = v.required_rank;
    for (auto p : r.pivot_rows) rows = std::max(rows, p + 1);
    r.hnf = IntegerMatrix(rows, r.pivot_rows.size());
    const auto& values = h.at("pivot_values");
    for (std::size_t c = 0; c < r.pivot_rows.size(); ++c)
      r.hnf(r.pivot_rows[c], c) = Integer(values.at(c).get<std::string>(), 10);
    v.hnf = std::move(r);
  }
  if (const auto& l = j.at("positive_flux"); !l.is_null()) {
    LfpOutcome o;
    o.status = l.at("status").get<std::string>() == "Feasible" ? LfpStatus::Feasible : LfpStatus::Infeasible;
    if (o.feasible()) o.witness = parse_rationals(l.at("witness").get<std::vector<std::string>>());
    v.lfp = std::move(o);
  }
  if (const auto& a = j.at("full_availability"); !a.is_null()) v.full_availability = analysis_from_json(a, names);
  if (const auto& l = j.at("forward_levels"); !l.is_null()) v.forward = levels_from_json(l, names);
  if (const auto& l = j.at("inverse_levels"); !l.is_null()) v.inverse = levels_from_json(l, names);
  return v;
}

Json drift_json(const DriftReport& d, const Names& names) {
  Json j;
  j["status"] = to_string(d.status);
  j["diagnostic"] = d.diagnostic;
  j["witness_source"] = d.witness_supplied ? "supplied" : "solver";
  j["classification"] = optional_json(d.classification, [](const ReactionClassification& rc) {
    Json cj;
    cj["unary_unconserved"] = one_based(rc.unary_unconserved);
    cj["binary"] = one_based(rc.binary);
    cj["remainder"] = one_based(rc.remainder);
    return cj;
  });
  j["certificate"] = optional_json(d.certificate, [&](const LyapunovCertificate& c) {
    Json cj;
    cj["w"] = rationals(names.to_input(c.w));
    cj["v"] = rationals(names.to_input(c.v));
    cj["alphas"] = rationals(c.alphas);
    cj["drift_margin"] = rationals(c.drift_margin);
    return cj;
  });
  j["verified"] = d.verified;
  return j;
}

DriftReport drift_from_json(const Json& j, const Names& names) {
  DriftReport d;
  d.status = drift_status_from_string(j.at("status").get<std::string>());
  d.diagnostic = j.at("diagnostic").get<std::string>();
  d.witness_supplied = j.at("witness_source").get<std::string>() == "supplied";
  if (const auto& c = j.at("classification"); !c.is_null()) {
    ReactionClassification rc;
    rc.unary_unconserved = from_one_based(c.at("unary_unconserved"));
    rc.binary = from_one_based(c.at("binary"));
    rc.remainder = from_one_based(c.at("remainder"));
    d.classification = std::move(rc);
  }
  if (const auto& c = j.at("certificate"); !c.is_null()) {
    auto vec = [&](const char* key) { return parse_rationals(c.at(key).get<std::vector<std::string>>()); };
    d.certificate = LyapunovCertificate{names.from_input(vec("w")), names.from_input(vec("v")), vec("alphas"),
                                        vec("drift_margin")};
  }
  d.verified = j.at("verified").get<bool>();
  return d;
}

Json oracle_json(const OracleSummary& o) {
  Json j;
  j["method"] = o.method;
  j["means"] = o.means;
  j["standard_errors"] = o.standard_errors;
  j["seed"] = o.seed;
  j["end_time"] = o.end_time;
  j["jumps"] = o.jumps;
  j["states"] = o.states;
  j["boundary_mass"] = o.boundary_mass;
  j["truncation_too_small"] = o.truncation_too_small;
  j["residual"] = o.residual;
  j["probe_strongly_connected"] = o.probe_strongly_connected ? Json(*o.probe_strongly_connected) : Json(nullptr);
  return j;
}

OracleSummary oracle_from_json(const Json& j) {
  OracleSummary o;
  o.method = j.at("method").get<std::string>();
  o.means = j.at("means").get<std::vector<double>>();
  o.standard_errors = j.at("standard_errors").get<std::vector<double>>();
  o.seed = j.at("seed").get<std::uint64_t>();
  o.end_time = j.at("end_time").get<double>();
  o.jumps = j.at("jumps").get<std::size_t>();
  o.states = j.at("states").get<std::size_t>();
  o.boundary_mass = j.at("boundary_mass").get<double>();
  o.truncation_too_small = j.at("truncation_too_small").get<bool>();
  o.residual = j.at("residual").get<double>();
  if (!j.at("probe_strongly_connected").is_null()) o.probe_strongly_connected = j["probe_strongly_connected"].get<bool>();
  return o;
}

std::string render_json(const ErgodicityReport& r) {
  const Names names(r.network);
  const auto& cs = r.conservation;
  Json j;
  j["schema"] = "ergocheck-report/1";
  j["tool"] = {{"name", "ergocheck"}, {"version", r.tool_version}};
  j["input_sha256"] = r.input_sha256;
  j["verdict"] = to_string(r.verdict);
  j["reason"] = r.reason;

  Json net;
  net["species"] = r.network.species;
  net["conserved_last_order"] = one_based(r.network.order);
  net["species_count"] = r.network.species.size();
  net["reaction_count"] = r.network.reaction_count;
  net["unconserved_count"] = r.network.unconserved_count;
  net["conserved_count"] = r.network.conserved_count;
  net["conserved_state_count"] = r.network.conserved_state_count;
  net["identity_reactions"] = one_based(r.network.identity_reactions);
  j["network"] = net;

  Json cons;
  Json relations = Json::array();
  for (std::size_t q = 0; q < cs.gammas.size(); ++q) {
    Json rel;
    rel["gamma"] = names.to_input(cs.gammas[q]);
    rel["total"] = q < cs.totals.size() ? Json(cs.totals[q]) : Json(nullptr);
    relations.push_back(rel);
  }
  cons["relations"] = relations;
  SpeciesSet conserved;
  for (std::size_t i = cs.unconserved_count; i < cs.species_count(); ++i) conserved.push_back(i);
  cons["conserved_species"] = names.of(conserved);
  cons["states"] = cs.conserved_states;
  j["conservation"] = cons;

  j["irreducibility"] = optional_json(r.irreducibility, [&](const IrreducibilityVerdict& v) {
    return irreducibility_json(v, names, cs.has_conservation());
  });
  j["drift"] = drift_json(r.drift, names);
  j["oracle"] = optional_json(r.oracle, oracle_json);
  if (r.include_timings) {
    Json t = Json::object();
    for (const auto& [stage, ms] : r.timings_ms) t[stage] = ms;
    j["timings_ms"] = t;
  }
  return j.dump(2) + "\n";
}

}  // namespace

ErgodicityReport parse_report_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw InputError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    ErgodicityReport r;
    r.tool_version = j.at("tool").at("version").get<std::string>();
    r.input_sha256 = j.at("input_sha256").get<std::string>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    r.reason = j.at("reason").get<std::string>();

    const auto& net = j.at("network");
    r.network.species = net.at("species").get<std::vector<std::string>>();
    r.network.order = from_one_based(net.at("conserved_last_order"));
    r.network.reaction_count = net.at("reaction_count").get<std::size_t>();
    r.network.unconserved_count = net.at("unconserved_count").get<std::size_t>();
    r.network.conserved_count = net.at("conserved_count").get<std::size_t>();
    r.network.conserved_state_count = net.at("conserved_state_count").get<std::size_t>();
    r.network.identity_reactions = from_one_based(net.at("identity_reactions"));
    const Names names(r.network);

    auto& cs = r.conservation;
    cs.unconserved_count = r.network.unconserved_count;
    cs.conserved_count = r.network.conserved_count;
    cs.order = r.network.order;
    for (const auto& rel : j.at("conservation").at("relations")) {
      cs.gammas.push_back(names.from_input(rel.at("gamma").get<Counts>()));
      if (!rel.at("total").is_null()) cs.totals.push_back(rel["total"].get<std::int64_t>());
    }
    cs.conserved_states = j.at("conservation").at("states").get<std::vector<Counts>>();

    if (const auto& v = j.at("irreducibility"); !v.is_null()) r.irreducibility = irreducibility_from_json(v, names);
    r.drift = drift_from_json(j.at("drift"), names);
    if (const auto& o = j.at("oracle"); !o.is_null()) r.oracle = oracle_from_json(o);
    r.include_timings = j.contains("timings_ms");
    if (r.include_timings)
      for (const auto& [stage, ms] : j["timings_ms"].items()) r.timings_ms.emplace_back(stage, ms.get<double>());
    return r;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Human rendering

namespace {

std::string set_text(const SpeciesSet& s, const NetworkSummary& net) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + net.reordered_name(s[i]);
  return out + "}";
}

std::string levels_line(const LevelDecomposition& l, const NetworkSummary& net) {
  std::string out;
  for (std::size_t g = 0; g < l.levels.size(); ++g)
    out += (g ? " " : "") + ("G" + std::to_string(g + 1) + "=" + set_text(l.levels[g], net));
  if (l.levels.empty()) out = "(none)";
  if (!l.exhaustive) out += "  not exhaustive, uncovered " + set_text(l.uncovered, net);
  return out;
}

std::string reactions_text(const std::vector<std::size_t>& ks) {
  if (ks.empty()) return "(none)";
  std::string out;
  for (std::size_t i = 0; i < ks.size(); ++i) out += (i ? " " : "") + std::to_string(ks[i] + 1);
  return out;
}

std::string vector_text(const RationalVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + to_string(v[i]);
  return out + ")";
}

std::string render_human(const ErgodicityReport& r) {
  const auto& net = r.network;
  const auto& cs = r.conservation;
  std::ostringstream os;
  os << "ergocheck " << r.tool_version << "\n";
  os << "network: " << net.species.size() << " species, " << net.reaction_count << " reactions";
  if (net.conserved_count > 0)
    os << " (" << net.unconserved_count << " unconserved, " << net.conserved_count << " conserved, "
       << net.conserved_state_count << " conserved states)";
  os << "\n";
  if (!net.identity_reactions.empty())
    os << "warning: identity reactions never change the state: " << reactions_text(net.identity_reactions) << "\n";
  for (std::size_t q = 0; q < cs.gammas.size(); ++q) {
    std::string term;
    for (std::size_t i = 0; i < cs.gammas[q].size(); ++i) {
      const auto g = cs.gammas[q][i];
      if (g == 0) continue;
      term += (term.empty() ? "" : " + ") + (g == 1 ? "" : std::to_string(g) + "*") + net.reordered_name(i);
    }
    os << "conservation: " << term;
    if (q < cs.totals.size()) os << " = " << cs.totals[q];
    os << "\n";
  }
  os << "verdict: " << to_string(r.verdict) << "\n";
  os << "reason: " << r.reason << "\n";

  if (r.irreducibility) {
    const auto& v = *r.irreducibility;
    os << "\nirreducibility: " << to_string(v.status) << "\n";
    if (v.failed_condition != IrreducibilityCondition::None)
      os << "  failed condition: " << to_string(v.failed_condition) << " (" << v.diagnostic << ")\n";
    os << "  rank: " << v.rank << " (required " << v.required_rank << ")\n";
    if (v.hnf) {
      os << "  HNF pivots:";
      for (const auto& p : v.hnf->pivot_values()) os << ' ' << to_string(p);
      os << "\n";
    }
    if (v.lfp) {
      os << "  positive flux: " << to_string(v.lfp->status);
      if (v.lfp->feasible()) os << " " << vector_text(v.lfp->witness);
      os << "\n";
    }
    if (v.full_availability)
      os << "  conserved classes with all unconserved species available: " << v.full_availability->classes.size()
         << " (" << v.full_availability->eta() << " closed)\n";
    if (v.forward) os << "  levels: " << levels_line(*v.forward, net) << "\n";
    if (v.inverse) os << "  inverse levels: " << levels_line(*v.inverse, net) << "\n";
  }

  const auto& d = r.drift;
  os << "\ndrift: " << to_string(d.status);
  if (d.witness_supplied) os << " (supplied witness)";
  os << "\n";
  if (!d.diagnostic.empty()) os << "  " << d.diagnostic << "\n";
  if (d.classification) {
    os << "  unary, unconserved reactant: " << reactions_text(d.classification->unary_unconserved) << "\n";
    os << "  binary: " << reactions_text(d.classification->binary) << "\n";
    os << "  other: " << reactions_text(d.classification->remainder) << "\n";
  }
  if (d.certificate) {
    const Names names(net);
    const auto& c = *d.certificate;
    os << "  w = " << vector_text(names.to_input(c.w)) << "\n";
    if (!c.alphas.empty()) os << "  alphas = " << vector_text(c.alphas) << "\n";
    os << "  Lyapunov vector v = " << vector_text(names.to_input(c.v)) << "\n";
    std::string form;
    const auto v_in = names.to_input(c.v);
    for (std::size_t i = 0; i < v_in.size(); ++i)
      form += (i ? " + " : "") + to_string(v_in[i]) + "*" + net.species[i];
    os << "  V(x) = " << form << "\n";
    os << "  drift margin = " << vector_text(c.drift_margin) << "\n";
    os << "  certificate verified: " << (d.verified ? "yes" : "no") << "\n";
  }

  if (r.oracle) {
    const auto& o = *r.oracle;
    os << "\noracle: " << o.method << "\n";
    const Names names(net);
    const auto means = names.to_input(o.means);
    for (std::size_t i = 0; i < means.size(); ++i) {
      os << "  mean " << net.species[i] << " = " << means[i];
      if (!o.standard_errors.empty()) os << " +/- " << names.to_input(o.standard_errors)[i];
      os << "\n";
    }
    if (o.method == "TRUNCATED_CME") {
      os << "  states: " << o.states << ", boundary mass: " << o.boundary_mass
         << (o.truncation_too_small ? " (truncation too small)" : "") << "\n";
      if (o.probe_strongly_connected)
        os << "  truncated interior strongly connected: " << (*o.probe_strongly_connected ? "yes" : "no") << "\n";
    } else {
      os << "  seed " << o.seed << ", end time " << o.end_time << ", " << o.jumps << " jumps\n";
    }
  }

  if (r.include_timings && !r.timings_ms.empty()) {
    os << "\ntimings (ms):";
    for (const auto& [stage, ms] : r.timings_ms) os << ' ' << stage << '=' << ms;
    os << "\n";
  }
  return os.str();
}

}  // namespace

std::string render_report(const ErgodicityReport& report, ReportFormat format) {
  return format == ReportFormat::Json ? render_json(report) : render_human(report);
}

}  // namespace ergocheck
