// Python extension: thin wrappers over the C++ library. Exact values cross
// the boundary as fractions.Fraction (or int), reports as JSON text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "ergocheck/conservation.hpp"
#include "ergocheck/errors.hpp"
#include "ergocheck/linalg.hpp"
#include "ergocheck/lfp.hpp"
#include "ergocheck/network.hpp"
#include "ergocheck/oracle.hpp"
#include "ergocheck/report.hpp"

namespace py = pybind11;
using namespace ergocheck;

namespace {

py::object to_py(const Rational& q) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(py::int_(py::str(q.get_num().get_str())), py::int_(py::str(q.get_den().get_str())));
}

py::object to_py(const Integer& z) { return py::int_(py::str(z.get_str())); }

Rational rational_from(py::handle h) { return parse_rational(py::str(h).cast<std::string>()); }

RationalVector rational_vector(const py::sequence& seq) {
  RationalVector out;
  for (auto item : seq) out.push_back(rational_from(item));
  return out;
}

template <class T>
py::list to_py(const Matrix<T>& m) {
  py::list rows;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    py::list row;
    for (std::size_t c = 0; c < m.cols(); ++c) row.append(to_py(m(r, c)));
    rows.append(row);
  }
  return rows;
}

template <class T>
py::list to_py(const std::vector<T>& v) {
  py::list out;
  for (const auto& x : v) out.append(to_py(x));
  return out;
}

// Row lists; `cols` fixes the width when there are no rows.
template <class T>
Matrix<T> matrix_from(const py::sequence& rows, std::optional<std::size_t> cols = std::nullopt) {
  const std::size_t n = rows.size();
  std::size_t width = cols.value_or(n ? py::len(rows[0]) : 0);
  Matrix<T> m(n, width);
  for (std::size_t r = 0; r < n; ++r) {
    py::sequence row = rows[r];
    if (row.size() != width) throw DimensionMismatch("ragged matrix rows");
    for (std::size_t c = 0; c < width; ++c) {
      if constexpr (std::is_same_v<T, Rational>) m(r, c) = rational_from(row[c]);
      else m(r, c) = Integer(py::str(row[c]).cast<std::string>());
    }
  }
  return m;
}

OracleMode oracle_mode(const std::string& s) {
  if (s == "off") return OracleMode::Off;
  if (s == "ssa") return OracleMode::Ssa;
  if (s == "cme") return OracleMode::Cme;
  throw py::value_error("oracle must be 'off', 'ssa' or 'cme'");
}

AnalyzeOptions make_options(std::optional<std::vector<std::int64_t>> totals, std::optional<py::sequence> witness,
                            const std::string& oracle, std::uint64_t seed, double t_end, std::int64_t box) {
  AnalyzeOptions o;
  o.conserved_totals = std::move(totals);
  if (witness) o.witness = rational_vector(*witness);
  o.oracle = oracle_mode(oracle);
  o.seed = seed;
  o.ssa_end_time = t_end;
  o.cme_box = box;
  o.max_states = max_states_from_env();
  return o;
}

ConservedStructure structure_for(const ReactionNetwork& net, ReactionNetwork& reordered,
                                 std::optional<std::vector<std::int64_t>> totals) {
  auto gammas = find_conservation_relations(stoichiometry_matrix(net));
  auto [r, cs] = reorder_conserved_last(net, gammas);
  reordered = r;
  if (!cs.has_conservation()) return cs;
  if (!totals) throw InputError("conserved totals are required for this network");
  return with_totals(cs, *totals, max_states_from_env());
}

}  // namespace

PYBIND11_MODULE(_ergocheck, m) {
  m.doc() = "Ergodicity checks for stochastic reaction networks";
  m.attr("__version__") = std::string(kToolVersion);

  // Translators run newest first, so the base class goes in first.
  static py::exception<Error> base(m, "ErgocheckError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<WitnessRejected>(m, "WitnessRejected", base.ptr());
  py::register_exception<UnsupportedReactionOrder>(m, "UnsupportedReactionOrder", base.ptr());
  py::register_exception<StateSpaceTooLarge>(m, "StateSpaceTooLarge", base.ptr());
  py::register_exception<OverlappingConservation>(m, "OverlappingConservation", base.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::class_<ReactionNetwork>(m, "Network")
      .def_property_readonly("species", &ReactionNetwork::species)
      .def_property_readonly("reaction_count", &ReactionNetwork::reaction_count)
      .def("reaction", [](const ReactionNetwork& n, std::size_t k) { return format_reaction(n, k); })
      .def("rate", [](const ReactionNetwork& n, std::size_t k) { return to_py(n.reaction(k).rate); })
      .def("stoichiometry", [](const ReactionNetwork& n) { return to_py(stoichiometry_matrix(n)); })
      .def("serialize", &serialize_network)
      .def("__repr__", [](const ReactionNetwork& n) {
        return "<Network " + std::to_string(n.species_count()) + " species, " + std::to_string(n.reaction_count()) +
               " reactions>";
      });
  m.def("parse_network", [](const std::string& text) { return parse_network(text); }, py::arg("text"));

  py::class_<ErgodicityReport>(m, "Report")
      .def_property_readonly("verdict", [](const ErgodicityReport& r) { return to_string(r.verdict); })
      .def_property_readonly("reason", [](const ErgodicityReport& r) { return r.reason; })
      .def_property_readonly("exit_code", [](const ErgodicityReport& r) { return exit_code(r.verdict); })
      .def_property_readonly("input_sha256", [](const ErgodicityReport& r) { return r.input_sha256; })
      .def_property_readonly("lyapunov_vector",
                             [](const ErgodicityReport& r) -> py::object {
                               if (!r.drift.certificate) return py::none();
                               // Back to the input species order.
                               const auto& v = r.drift.certificate->v;
                               RationalVector ordered(v.size());
                               for (std::size_t i = 0; i < v.size(); ++i) ordered[r.network.order[i]] = v[i];
                               return to_py(ordered);
                             })
      .def("to_json", [](const ErgodicityReport& r) { return render_report(r, ReportFormat::Json); })
      .def("to_text", [](const ErgodicityReport& r) { return render_report(r, ReportFormat::Human); })
      .def("__repr__", [](const ErgodicityReport& r) { return "<Report " + to_string(r.verdict) + ">"; });

  auto add_analyze = [&](const char* name, auto fn, const char* doc) {
    m.def(name, fn, doc, py::arg("source"), py::kw_only(), py::arg("conserved_totals") = py::none(),
          py::arg("witness") = py::none(), py::arg("oracle") = "off", py::arg("seed") = 1,
          py::arg("t_end") = 1000.0, py::arg("box") = 20);
  };
  add_analyze(
      "analyze",
      [](const std::string& path, std::optional<std::vector<std::int64_t>> totals, std::optional<py::sequence> witness,
         const std::string& oracle, std::uint64_t seed, double t_end, std::int64_t box) {
        auto o = make_options(std::move(totals), std::move(witness), oracle, seed, t_end, box);
        return analyze(path, o);
      },
      "Analyse a network file.");
  add_analyze(
      "analyze_text",
      [](const std::string& text, std::optional<std::vector<std::int64_t>> totals, std::optional<py::sequence> witness,
         const std::string& oracle, std::uint64_t seed, double t_end, std::int64_t box) {
        auto o = make_options(std::move(totals), std::move(witness), oracle, seed, t_end, box);
        return analyze_text(text, o);
      },
      "Analyse network text.");
  m.def(
      "verify",
      [](const std::string& path, const py::sequence& witness, std::optional<std::vector<std::int64_t>> totals) {
        AnalyzeOptions o = make_options(std::move(totals), std::nullopt, "off", 1, 1000.0, 20);
        return verify(path, rational_vector(witness), o);
      },
      "Check a user-supplied drift witness for a network file.", py::arg("path"), py::arg("witness"), py::kw_only(),
      py::arg("conserved_totals") = py::none());

  m.def(
      "hermite_normal_form",
      [](const py::sequence& rows) {
        auto h = hermite_normal_form(matrix_from<Integer>(rows));
        return py::make_tuple(to_py(h.hnf), to_py(h.unimodular), h.pivot_rows);
      },
      "Column Hermite normal form: returns (H, U, pivot_rows) with M U = H.", py::arg("matrix"));
  m.def(
      "solve_lfp",
      [](const py::sequence& a, const py::sequence& b, std::optional<py::sequence> a_eq,
         std::optional<py::sequence> b_eq) -> py::object {
        LfpProblem p;
        p.a = matrix_from<Rational>(a);
        p.b = rational_vector(b);
        p.a_eq = a_eq ? matrix_from<Rational>(*a_eq, p.a.cols()) : RationalMatrix(0, p.a.cols());
        p.b_eq = b_eq ? rational_vector(*b_eq) : RationalVector{};
        auto out = solve_lfp(p);
        if (!out.feasible()) return py::none();
        return to_py(out.witness);
      },
      "Exact feasibility of {v : A v <= b, A_eq v = b_eq}; a witness or None.", py::arg("a"), py::arg("b"),
      py::arg("a_eq") = py::none(), py::arg("b_eq") = py::none());
  m.def(
      "conservation_relations",
      [](const ReactionNetwork& net) { return find_conservation_relations(stoichiometry_matrix(net)); },
      "Disjoint nonnegative conservation vectors of a network.", py::arg("network"));
  m.def(
      "simulate",
      [](const ReactionNetwork& net, const Counts& x0, double t_end, std::uint64_t seed) {
        Trajectory t;
        {
          py::gil_scoped_release release;
          t = gillespie_simulate(net, x0, t_end, seed);
        }
        return py::make_tuple(t.times, t.states);
      },
      "Gillespie trajectory as (jump times, states).", py::arg("network"), py::arg("x0"), py::arg("t_end"),
      py::arg("seed") = 1);
  m.def(
      "stationary_distribution",
      [](const ReactionNetwork& net, const Counts& upper, std::optional<std::vector<std::int64_t>> totals) {
        ReactionNetwork reordered = net;
        auto cs = structure_for(net, reordered, std::move(totals));
        auto est = truncated_cme_stationary(reordered, cs, upper);
        py::dict out;
        std::vector<Counts> states;
        for (const auto& s : est.support) {
          Counts original(s.size());
          for (std::size_t i = 0; i < s.size(); ++i) original[cs.order[i]] = s[i];
          states.push_back(original);
        }
        out["states"] = states;
        out["probabilities"] = est.probabilities;
        out["boundary_mass"] = est.boundary_mass;
        out["truncation_too_small"] = est.truncation_too_small;
        out["residual"] = est.residual;
        out["exact"] = est.exact ? py::object(to_py(*est.exact)) : py::object(py::none());
        return out;
      },
      "Truncated chemical master equation solution on 0 <= x_i <= upper_i for the unconserved species.",
      py::arg("network"), py::arg("upper"), py::arg("conserved_totals") = py::none());
}
