#include "subpress/app/commands.hpp"
#include "subpress/app/config.hpp"
#include "subpress/equilibrium.hpp"
#include "subpress/errors.hpp"
#include "subpress/montecarlo.hpp"
#include "subpress/periodic_opt.hpp"
#include "subpress/pressure.hpp"
#include "subpress/symbolic.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace subpress;

namespace {

using Rows = std::vector<std::vector<double>>;

MatrixSet make_set(const std::vector<Rows>& mats) {
    std::vector<Matrix> out;
    out.reserve(mats.size());
    for (const auto& m : mats) out.push_back(Matrix::from_rows(m));
    return MatrixSet(std::move(out));
}

py::dict bracket_dict(const JsrBracket& b) {
    py::dict d;
    d["lower"] = b.lower;
    d["upper"] = b.upper;
    d["gap"] = b.gap();
    d["witness"] = b.witness.word.str();
    d["period"] = b.witness.period();
    d["depth"] = b.depth_used;
    d["upper_level"] = b.upper_level;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pressure, Gibbs approximants and maximal Lyapunov exponents of matrix cocycles over subshifts.";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<NoClosure>(m, "NoClosure", m.attr("Error").ptr());
    py::register_exception<UnsupportedSft>(m, "UnsupportedSft", m.attr("Error").ptr());
    py::register_exception<GridTooShort>(m, "GridTooShort", m.attr("Error").ptr());
    py::register_exception<app::ConfigError>(m, "ConfigError", m.attr("Error").ptr());

    py::class_<SftSpec>(m, "Sft")
        .def_static("full", &SftSpec::full, py::arg("k"))
        .def_static("from_matrix", &SftSpec::from_matrix, py::arg("transitions"))
        .def_property_readonly("k", &SftSpec::k)
        .def_property_readonly("is_full", &SftSpec::is_full)
        .def("matrix", &SftSpec::matrix)
        .def("allows", &SftSpec::allows)
        .def("__repr__", [](const SftSpec& s) {
            return "<Sft k=" + std::to_string(s.k()) + (s.is_full() ? " full>" : ">");
        });

    py::class_<MatrixSet>(m, "MatrixSet")
        .def(py::init(&make_set), py::arg("matrices"))
        .def_property_readonly("dim", &MatrixSet::dim)
        .def("__len__", &MatrixSet::size)
        .def("matrices", [](const MatrixSet& ms) {
            std::vector<Rows> out;
            for (const auto& a : ms.matrices()) out.push_back(a.rows());
            return out;
        })
        .def("scaled", &MatrixSet::scaled);

    py::class_<Potential>(m, "Potential")
        .def(py::init<MatrixSet>(), py::arg("matrices"))
        .def_static("additive", [](std::vector<double> f) { return Potential(AdditivePotential{std::move(f)}); },
                    py::arg("f"))
        .def_property_readonly("kind", &Potential::kind_name)
        .def_property_readonly("k", &Potential::alphabet_size);
    py::implicitly_convertible<MatrixSet, Potential>();

    m.def("count_words", &count_words, py::arg("n"), py::arg("sft"));
    m.def(
        "enumerate_words",
        [](std::size_t n, const SftSpec& sft) {
            std::vector<std::string> out;
            for_each_word(n, sft, [&](std::span<const Symbol> w) { out.push_back(to_string(w)); });
            return out;
        },
        py::arg("n"), py::arg("sft"));
    m.def(
        "is_cyclically_admissible",
        [](const std::string& w, const SftSpec& sft) { return is_cyclically_admissible(Word::parse(w), sft); },
        py::arg("word"), py::arg("sft"));
    m.def(
        "close_word",
        [](const std::string& w, const SftSpec& sft) {
            const PeriodicOrbit o = close_word(Word::parse(w), sft);
            return py::make_tuple(o.word.str(), o.start);
        },
        py::arg("word"), py::arg("sft"), "Longest cyclically admissible subword as (word, start).");
    m.def("topological_entropy", &topological_entropy, py::arg("sft"));

    m.def(
        "log_norm", [](const std::string& w, const Potential& pot) { return log_norm(Word::parse(w), pot); },
        py::arg("word"), py::arg("potential"));
    m.def(
        "cycle_exponent",
        [](const std::string& w, const Potential& pot) { return cycle_exponent(Word::parse(w), pot); },
        py::arg("word"), py::arg("potential"));

    m.def(
        "pressure_upper",
        [](std::size_t n, std::vector<double> ts, const SftSpec& sft, const Potential& pot, std::size_t threads) {
            return pressure_upper(n, ts, sft, pot, threads);
        },
        py::arg("n"), py::arg("t"), py::arg("sft"), py::arg("potential"), py::arg("threads") = 1);
    m.def(
        "pressure_lower_periodic",
        [](std::size_t n, double t, const SftSpec& sft, const Potential& pot, std::size_t threads) {
            const PeriodicBound b = pressure_lower_periodic(n, t, sft, pot, threads);
            return py::make_tuple(b.value, b.witness.str());
        },
        py::arg("n"), py::arg("t"), py::arg("sft"), py::arg("potential"), py::arg("threads") = 1);

    m.def(
        "gibbs_weights",
        [](std::size_t n, double t, const SftSpec& sft, const Potential& pot, std::size_t threads) {
            const auto g = gibbs_weights(n, t, sft, pot, threads);
            py::dict d;
            for (std::size_t i = 0; i < g.size(); ++i) d[py::str(g.words[i].str())] = g.probabilities[i];
            py::dict out;
            out["probabilities"] = d;
            out["chi"] = lyapunov_of(g);
            out["entropy"] = entropy_of(g);
            return out;
        },
        py::arg("n"), py::arg("t"), py::arg("sft"), py::arg("potential"), py::arg("threads") = 1);
    m.def(
        "ground_state",
        [](std::size_t n, const SftSpec& sft, const Potential& pot) {
            std::vector<std::string> out;
            for (const auto& w : ground_state(n, sft, pot).words) out.push_back(w.str());
            return out;
        },
        py::arg("n"), py::arg("sft"), py::arg("potential"));

    m.def(
        "beta_upper", [](std::size_t n, const SftSpec& sft, const Potential& pot) { return beta_upper(n, sft, pot).value; },
        py::arg("n"), py::arg("sft"), py::arg("potential"));
    m.def(
        "beta_lower_periodic",
        [](std::size_t n, const SftSpec& sft, const Potential& pot) {
            const CycleCandidate c = beta_lower_periodic(n, sft, pot);
            return py::make_tuple(c.exponent, c.word.str());
        },
        py::arg("n"), py::arg("sft"), py::arg("potential"));
    m.def(
        "bracket_search",
        [](const SftSpec& sft, const Potential& pot, std::optional<std::size_t> n_exact, double beam_delta,
           std::size_t max_depth, std::size_t threads) {
            SearchConfig cfg = SearchConfig::defaults_for(sft.k());
            if (n_exact) cfg.n_exact = *n_exact;
            cfg.beam_delta = beam_delta;
            cfg.max_depth = max_depth;
            cfg.validate();
            return bracket_dict(bracket_search(cfg, sft, pot, threads));
        },
        py::arg("sft"), py::arg("potential"), py::arg("n_exact") = py::none(), py::arg("beam_delta") = 0.05,
        py::arg("max_depth") = 64, py::arg("threads") = 1);
    m.def(
        "verify_witness",
        [](const std::string& w, const SftSpec& sft, const Potential& pot) {
            return verify_witness(Word::parse(w), sft, pot);
        },
        py::arg("witness"), py::arg("sft"), py::arg("potential"));

    m.def(
        "furstenberg_estimate",
        [](const Potential& pot, const SftSpec& sft, std::vector<double> p, std::size_t n, std::size_t samples,
           std::uint64_t seed, std::size_t threads) {
            const auto e = furstenberg_estimate(pot, sft, BernoulliSpec(std::move(p)), n, samples, seed, threads);
            return py::make_tuple(e.mean, e.half_width);
        },
        py::arg("potential"), py::arg("sft"), py::arg("p"), py::arg("n") = 1000, py::arg("samples") = 1000,
        py::arg("seed") = 0, py::arg("threads") = 1, "Returns (mean, 95% half-width).");

    m.def(
        "closing_experiment",
        [](const Potential& pot, const SftSpec& sft, std::vector<double> p, std::size_t length, std::uint64_t seed) {
            const ClosingReport r = closing_experiment(pot, sft, p, length, seed);
            py::dict d;
            d["prefix_exponent"] = r.prefix_exponent;
            d["closed_exponent"] = r.closed_exponent;
            d["difference"] = r.difference;
            d["period"] = r.orbit.period();
            d["start"] = r.orbit.start;
            d["extension"] = r.extension;
            return d;
        },
        py::arg("potential"), py::arg("sft"), py::arg("p"), py::arg("length"), py::arg("seed") = 0);

    m.def(
        "run",
        [](const std::string& command, const std::string& config_json, const std::string& out_dir) {
            app::RunConfig cfg = app::parse_config(nlohmann::json::parse(config_json));
            cfg.out_dir = out_dir;
            std::ostringstream log;
            int rc = app::kExitFailure;
            if (command == "pressure") rc = app::run_pressure(cfg, log);
            else if (command == "zerotemp") rc = app::run_zerotemp(cfg, log);
            else if (command == "maxexp") rc = app::run_maxexp(cfg, log);
            else if (command == "mc") rc = app::run_mc(cfg, log);
            else if (command == "close") rc = app::run_close(cfg, log);
            else throw py::value_error("unknown command '" + command + "'");
            return rc;
        },
        py::arg("command"), py::arg("config_json"), py::arg("out_dir"),
        "Runs a subcommand on a JSON configuration string; returns the exit code.");

    m.attr("__version__") = app::tool_version();
}
