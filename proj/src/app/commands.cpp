#include "subpress/app/commands.hpp"

#include "subpress/app/output.hpp"
#include "subpress/equilibrium.hpp"
#include "subpress/errors.hpp"
#include "subpress/montecarlo.hpp"
#include "subpress/parallel.hpp"
#include "subpress/periodic_opt.hpp"
#include "subpress/pressure.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace subpress::app {

using nlohmann::json;
namespace fs = std::filesystem;

#ifndef SUBPRESS_VERSION
#define SUBPRESS_VERSION "0.0.0"
#endif

const char* tool_version() { return SUBPRESS_VERSION; }

namespace {

using Clock = std::chrono::steady_clock;

json metadata(const RunConfig& cfg, const char* command, Clock::time_point start) {
    const std::chrono::duration<double> wall = Clock::now() - start;
    return json{{"tool", kToolName},
                {"version", tool_version()},
                {"command", command},
                {"config_hash", config_hash(cfg)},
                {"wall_time_s", wall.count()},
                {"threads", resolve_threads(cfg.threads)},
                {"config", to_json(cfg)}};
}

json real(double v) {
    if (std::isfinite(v)) return v;
    return format_real(v);
}

std::vector<double> proposal_or_uniform(const std::vector<double>& p, std::size_t k) {
    if (!p.empty()) return p;
    return std::vector<double>(k, 1.0 / static_cast<double>(k));
}

int guarded(std::ostream& log, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        log << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        log << "invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace

int run_pressure(const RunConfig& cfg, std::ostream& log) {
    return guarded(log, [&] {
        const auto start = Clock::now();
        const SftSpec sft = cfg.sft();
        const Potential pot = cfg.make_potential();
        const std::vector<double> grid = cfg.t_grid.values();
        const PressureCurve curve = pressure_curve(cfg.levels, grid, sft, pot, cfg.threads);

        std::ostringstream csv;
        csv << "t,n,upper,lower,witness";
        if (cfg.experimental) csv << ",periodic_sum";
        csv << '\n';
        for (const auto& b : curve.brackets) {
            csv << format_real(b.t) << ',' << b.n << ',' << format_real(b.upper) << ',' << format_real(b.lower) << ','
                << b.witness.str();
            if (cfg.experimental) csv << ',' << format_real(pressure_periodic_sum(b.n, b.t, sft, pot, cfg.threads));
            csv << '\n';
        }
        std::ostringstream best;
        best << "t,n,upper,lower,witness\n";
        for (const auto& p : curve.points)
            best << format_real(p.t) << ',' << p.n_upper << ',' << format_real(p.upper) << ',' << format_real(p.lower)
                 << ',' << p.witness.str() << '\n';

        // Convexity is checked per level on a uniform grid.
        const std::vector<double> uniform = cfg.convexity_grid.values();
        json convexity = json::object();
        double worst = 0.0;
        if (uniform.size() >= 3) {
            for (std::size_t n : cfg.levels) {
                const double v = convexity_report(uniform, pressure_upper(n, uniform, sft, pot, cfg.threads));
                convexity[std::to_string(n)] = v;
                worst = std::max(worst, v);
            }
        }

        const double h_top = topological_entropy(sft);
        const auto& p0 = curve.points.front();
        json meta = metadata(cfg, "pressure", start);
        meta["upper_certified"] = curve.upper_certified;
        meta["convexity_violation"] = worst;
        meta["convexity_violation_by_level"] = convexity;
        meta["topological_entropy"] = h_top;
        if (p0.t == 0.0)
            meta["t0_bracket_contains_htop"] = p0.lower <= h_top + 1e-9 && h_top <= p0.upper + 1e-9;
        try {
            const SlopeEstimate s = slope_at_infinity(curve);
            meta["slope_at_infinity"] = {{"ratio", s.ratio}, {"fd_slope", s.fd_slope}, {"t_max", s.t_max}};
        } catch (const GridTooShort& e) {
            meta["slope_at_infinity"] = {{"error", e.what()}};
        }
        if (cfg.experimental) meta["experimental"] = "periodic_sum column is not a certified bound";

        const fs::path dir(cfg.out_dir);
        write_atomic(dir / "pressure.csv", csv.str());
        write_atomic(dir / "pressure_curve.csv", best.str());
        write_atomic(dir / "pressure.json", meta.dump(2) + "\n");
        log << "pressure: " << curve.brackets.size() << " brackets written to " << dir.string() << '\n';
        return kExitOk;
    });
}

int run_zerotemp(const RunConfig& cfg, std::ostream& log) {
    return guarded(log, [&] {
        const auto start = Clock::now();
        const SftSpec sft = cfg.sft();
        const Potential pot = cfg.make_potential();
        std::vector<double> grid = cfg.t_grid.values();
        if (grid.front() != 0.0) grid.insert(grid.begin(), 0.0);

        std::ostringstream csv;
        csv << "t,n,chi,entropy,pressure,gap_bound\n";
        json argmax = json::object();
        json levels = json::object();
        for (std::size_t n : cfg.levels) {
            const ZeroTempDiagnostics d = zero_temp_sweep(n, grid, sft, pot, cfg.threads);
            for (const auto& r : d.rows)
                csv << format_real(r.t) << ',' << n << ',' << format_real(r.chi) << ',' << format_real(r.entropy)
                    << ',' << format_real(r.pressure) << ',' << format_real(r.gap_bound) << '\n';
            json words = json::array();
            for (const Word& w : d.argmax) words.push_back(w.str());
            argmax[std::to_string(n)] = words;
            levels[std::to_string(n)] = {{"beta_plus", d.beta_plus},
                                         {"ground_entropy", d.ground_entropy},
                                         {"max_chi_decrease", d.max_chi_decrease},
                                         {"max_entropy_increase", d.max_entropy_increase},
                                         {"max_chi_over_beta", d.max_chi_over_beta},
                                         {"gap_bound_holds", d.gap_bound_holds}};
        }
        json meta = metadata(cfg, "zerotemp", start);
        meta["levels"] = levels;

        const fs::path dir(cfg.out_dir);
        write_atomic(dir / "zerotemp.csv", csv.str());
        write_atomic(dir / "zerotemp_argmax.json", argmax.dump(2) + "\n");
        write_atomic(dir / "zerotemp.json", meta.dump(2) + "\n");
        log << "zerotemp: " << cfg.levels.size() << " levels written to " << dir.string() << '\n';
        return kExitOk;
    });
}

int run_maxexp(const RunConfig& cfg, std::ostream& log) {
    return guarded(log, [&] {
        const auto start = Clock::now();
        const SftSpec sft = cfg.sft();
        const Potential pot = cfg.make_potential();
        JsrBracket br;
        bool partial = false;
        try {
            br = bracket_search(cfg.search, sft, pot, cfg.threads);
        } catch (const BudgetExhausted& e) {
            br = e.bracket;
            partial = true;
            log << "maxexp: " << e.what() << "; writing partial bracket\n";
        }
        json result{{"lower", real(br.lower)},
                    {"upper", real(br.upper)},
                    {"gap", real(br.gap())},
                    {"witness", br.witness.word.str()},
                    {"period", br.witness.period()},
                    {"depth", br.depth_used},
                    {"upper_level", br.upper_level},
                    {"partial", partial}};
        if (pot.matrix_set() && pot.matrix_set()->dim() > 2)
            result["lower_convergence"] = "empirical (d > 2)";
        json meta = metadata(cfg, "maxexp", start);
        result["meta"] = meta;
        write_atomic(fs::path(cfg.out_dir) / "maxexp.json", result.dump(2) + "\n");
        log << fmt::format("maxexp: lower={:.17g} upper={:.17g} witness={}\n", br.lower, br.upper,
                           br.witness.word.str());
        return partial ? kExitBudget : kExitOk;
    });
}

int run_mc(const RunConfig& cfg, std::ostream& log) {
    return guarded(log, [&] {
        const auto start = Clock::now();
        const SftSpec sft = cfg.sft();
        const Potential pot = cfg.make_potential();
        const BernoulliSpec bp(proposal_or_uniform(cfg.mc.p, cfg.k));
        const ExponentEstimate est = furstenberg_estimate(pot, sft, bp, cfg.mc.n, cfg.mc.samples, cfg.seed, cfg.threads);

        std::ostringstream csv;
        csv << "delta,chi,chi_prime,gap,half_width\n";
        if (const MatrixSet* ms = pot.matrix_set()) {
            const auto target = cfg.mc.perturb == "measure" ? PerturbationTarget::Measure : PerturbationTarget::Matrices;
            for (const auto& r :
                 continuity_ladder(*ms, bp, cfg.mc.deltas, target, cfg.mc.n, cfg.mc.samples, cfg.seed, cfg.threads))
                csv << format_real(r.delta) << ',' << format_real(r.chi) << ',' << format_real(r.chi_prime) << ','
                    << format_real(r.gap) << ',' << format_real(r.half_width) << '\n';
        } else {
            csv << format_real(0.0) << ',' << format_real(est.mean) << ',' << format_real(est.mean) << ','
                << format_real(0.0) << ',' << format_real(est.half_width) << '\n';
        }

        json meta = metadata(cfg, "mc", start);
        meta["estimate"] = {{"mean", est.mean}, {"half_width", est.half_width}, {"n", est.n},
                            {"samples", est.samples}, {"seed", est.seed}};
        meta["perturbation_metric"] = cfg.mc.perturb == "measure"
                                          ? "probability vector moved by delta*(e_0 - e_1)"
                                          : "entrywise max-norm: every matrix entry moved by +-delta";
        meta["sampling"] = "paired common random numbers (same seed for both runs)";
        if (pot.matrix_set() && pot.matrix_set()->dim() > 2) meta["scope"] = "empirical (d > 2)";

        const fs::path dir(cfg.out_dir);
        write_atomic(dir / "mc.csv", csv.str());
        write_atomic(dir / "mc.json", meta.dump(2) + "\n");
        log << fmt::format("mc: chi={:.17g} +- {:.3g}\n", est.mean, est.half_width);
        return kExitOk;
    });
}

int run_close(const RunConfig& cfg, std::ostream& log) {
    return guarded(log, [&] {
        const auto start = Clock::now();
        const SftSpec sft = cfg.sft();
        const Potential pot = cfg.make_potential();
        const ClosingReport rep =
            closing_experiment(pot, sft, proposal_or_uniform(cfg.close.p, cfg.k), cfg.close.length, cfg.seed);

        std::ostringstream csv;
        csv << "n,prefix_exponent\n";
        for (std::size_t i = 0; i < rep.prefix_exponents.size(); ++i)
            csv << (i + 1) << ',' << format_real(rep.prefix_exponents[i]) << '\n';

        json result{{"prefix_exponent", rep.prefix_exponent},
                    {"closed_exponent", rep.closed_exponent},
                    {"difference", rep.difference},
                    {"period", rep.orbit.period()},
                    {"start", rep.orbit.start},
                    {"length", rep.trajectory.size()},
                    {"extension", rep.extension},
                    {"seed", cfg.seed}};
        result["meta"] = metadata(cfg, "close", start);

        const fs::path dir(cfg.out_dir);
        write_atomic(dir / "close_prefix.csv", csv.str());
        write_atomic(dir / "close.json", result.dump(2) + "\n");
        log << fmt::format("close: prefix={:.17g} closed={:.17g} period={}\n", rep.prefix_exponent,
                           rep.closed_exponent, rep.orbit.period());
        return kExitOk;
    });
}

int run_verify(const RunConfig& cfg, const VerifyRequest& req, std::ostream& out, std::ostream& log) {
    return guarded(log, [&] {
        std::string witness = req.witness;
        std::optional<double> claim = req.claim;
        if (!req.result_path.empty()) {
            std::ifstream in(req.result_path);
            if (!in) throw ConfigError({req.result_path + ": cannot open result file"});
            const json res = json::parse(in);
            if (witness.empty()) witness = res.at("witness").get<std::string>();
            if (!claim) claim = res.at("lower").get<double>();
        }
        if (witness.empty()) throw ConfigError({"verify: a witness word is required"});
        if (!claim) throw ConfigError({"verify: a claimed exponent is required"});

        const SftSpec sft = cfg.sft();
        const Potential pot = cfg.make_potential();
        const Word w = Word::parse(witness);
        const double recomputed = verify_witness(w, sft, pot);
        const double error = std::abs(recomputed - *claim);
        const bool ok = error <= req.tolerance;
        const json report{{"witness", witness},   {"claimed", *claim},         {"recomputed", recomputed},
                          {"abs_error", error},   {"tolerance", req.tolerance}, {"ok", ok}};
        out << report.dump(2) << '\n';
        return ok ? kExitOk : kExitMismatch;
    });
}

}  // namespace subpress::app
