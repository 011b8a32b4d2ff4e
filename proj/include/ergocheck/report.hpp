#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ergocheck/conservation.hpp"
#include "ergocheck/drift.hpp"
#include "ergocheck/irreducibility.hpp"
#include "ergocheck/network.hpp"

namespace ergocheck {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Verdict { ProvenErgodic, IrreducibilityDisproven, Inconclusive, Unsupported };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

// Process exit status for a finished analysis.
int exit_code(Verdict v);
inline constexpr int kInputErrorExitCode = 3;

enum class DriftStatus { Feasible, Infeasible, NotRun, Unsupported };
std::string to_string(DriftStatus s);
DriftStatus drift_status_from_string(const std::string& s);

enum class OracleMode { Off, Ssa, Cme };

struct AnalyzeOptions {
  std::optional<std::vector<std::int64_t>> conserved_totals;
  // Drift witness in the species order of the input file; skips the solve.
  std::optional<RationalVector> witness;
  OracleMode oracle = OracleMode::Off;
  std::uint64_t seed = 1;
  double ssa_end_time = 1000.0;
  std::int64_t cme_box = 20;  // per unconserved species
  std::size_t max_states = kDefaultMaxStates;
  bool concurrent = true;
};

struct NetworkSummary {
  std::vector<std::string> species;            // input order
  std::vector<std::size_t> order;              // conserved-last position i holds input species order[i]
  std::size_t reaction_count = 0;
  std::size_t unconserved_count = 0;
  std::size_t conserved_count = 0;
  std::size_t conserved_state_count = 0;
  std::vector<std::size_t> identity_reactions;  // 0-based

  std::string reordered_name(std::size_t i) const { return species.at(order.at(i)); }
};

struct DriftReport {
  DriftStatus status = DriftStatus::NotRun;
  std::string diagnostic;
  bool witness_supplied = false;
  std::optional<ReactionClassification> classification;
  std::optional<LyapunovCertificate> certificate;  // vectors in conserved-last order
  bool verified = false;
};

struct OracleSummary {
  std::string method;  // TIME_AVERAGE or TRUNCATED_CME
  std::vector<double> means;            // conserved-last order
  std::vector<double> standard_errors;  // TIME_AVERAGE only
  std::uint64_t seed = 0;
  double end_time = 0;
  std::size_t jumps = 0;
  std::size_t states = 0;
  double boundary_mass = 0;
  bool truncation_too_small = false;
  double residual = 0;
  std::optional<bool> probe_strongly_connected;
};

struct ErgodicityReport {
  std::string tool_version{kToolVersion};
  std::string input_sha256;
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  NetworkSummary network;
  ConservedStructure conservation;
  std::optional<IrreducibilityVerdict> irreducibility;
  DriftReport drift;
  std::optional<OracleSummary> oracle;
  std::vector<std::pair<std::string, double>> timings_ms;
  bool include_timings = true;
};

std::string sha256_hex(std::string_view data);

// Full pipeline on network text. Throws ParseError/InputError for bad
// input and WitnessRejected when a supplied witness fails.
ErgodicityReport analyze_text(std::string_view text, const AnalyzeOptions& options = {});
ErgodicityReport analyze(const std::string& path, const AnalyzeOptions& options = {});
ErgodicityReport verify(const std::string& path, const RationalVector& witness, AnalyzeOptions options = {});

// Accepts ["2", "1/2", 0.5, ...] or an object with a "witness" or "w" array.
RationalVector parse_witness_json(std::string_view text);

enum class ReportFormat { Human, Json };

std::string render_report(const ErgodicityReport& report, ReportFormat format);
ErgodicityReport parse_report_json(std::string_view text);

}  // namespace ergocheck
