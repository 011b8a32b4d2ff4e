#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ergocheck/errors.hpp"
#include "ergocheck/report.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ergocheck::InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::int64_t> parse_totals(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    std::int64_t value = 0;
    try {
      value = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || value < 0)
      throw ergocheck::InputError("conserved totals must be nonnegative integers, got '" + item + "'");
    out.push_back(value);
  }
  if (out.empty()) throw ergocheck::InputError("--conserved-totals needs at least one value");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ergocheck;

  CLI::App app{"Ergodicity certificates for stochastic reaction networks"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string file, totals, format = "human", witness_path, oracle = "off";
  std::uint64_t seed = 1;
  double t_end = 1000.0;
  std::int64_t box = 20;
  bool no_timings = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("file", file, "Reaction network file")->required();
    cmd->add_option("--conserved-totals", totals, "Comma separated totals, one per conservation relation");
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"human", "json"}));
    cmd->add_option("--oracle", oracle, "Numerical cross-check")->check(CLI::IsMember({"off", "ssa", "cme"}));
    cmd->add_option("--seed", seed, "Seed for the stochastic simulation");
    cmd->add_option("--t-end", t_end, "Simulated time for --oracle ssa")->check(CLI::PositiveNumber);
    cmd->add_option("--box", box, "Truncation bound per unconserved species for --oracle cme")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--no-timings", no_timings, "Omit stage timings from the report");
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "Decide ergodicity of a network");
  add_common(analyze_cmd);
  analyze_cmd->add_option("--witness", witness_path, "JSON drift witness; skips the drift solve");

  auto* verify_cmd = app.add_subcommand("verify", "Check a supplied drift witness");
  add_common(verify_cmd);
  verify_cmd->add_option("witness", witness_path, "JSON drift witness")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputErrorExitCode;
  }

  try {
    AnalyzeOptions options;
    if (!totals.empty()) options.conserved_totals = parse_totals(totals);
    if (!witness_path.empty()) options.witness = parse_witness_json(read_file(witness_path));
    options.oracle = oracle == "ssa" ? OracleMode::Ssa : oracle == "cme" ? OracleMode::Cme : OracleMode::Off;
    options.seed = seed;
    options.ssa_end_time = t_end;
    options.cme_box = box;
    options.max_states = max_states_from_env();

    auto report = analyze(file, options);
    report.include_timings = !no_timings;
    std::cout << render_report(report, format == "json" ? ReportFormat::Json : ReportFormat::Human);
    return exit_code(report.verdict);
  } catch (const WitnessRejected& e) {
    std::cerr << "witness rejected: " << e.what() << "\n";
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
  }
  return kInputErrorExitCode;
}
