// Command-line front end: one JSON run configuration per experiment.
//
//   subpress pressure --config run.json --out results/
//   subpress verify --config run.json --witness 01 --claim 0.48121182505960347

#include "subpress/app/commands.hpp"
#include "subpress/app/config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

struct Overrides {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::size_t> threads;
    std::optional<std::uint64_t> seed;
    bool experimental = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "Output directory (overrides output.dir)");
    cmd->add_option("--threads", o.threads, "Worker threads, 0 = all cores (overrides threads)");
    cmd->add_option("--seed", o.seed, "Random seed (overrides seed)");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace subpress::app;
    CLI::App app{"Pressure, zero-temperature limits and maximal Lyapunov exponents of matrix cocycles"};
    app.set_version_flag("--version", std::string(kToolName) + " " + tool_version());
    app.require_subcommand(1);

    Overrides o;
    VerifyRequest verify;
    std::optional<double> claim;
    auto* pressure = app.add_subcommand("pressure", "Pressure brackets over the t grid");
    auto* zerotemp = app.add_subcommand("zerotemp", "Gibbs approximants and zero-temperature diagnostics");
    auto* maxexp = app.add_subcommand("maxexp", "Bracket the maximal Lyapunov exponent");
    auto* mc = app.add_subcommand("mc", "Monte Carlo exponent of a Bernoulli measure and continuity probe");
    auto* close = app.add_subcommand("close", "Trajectory closing experiment");
    auto* ver = app.add_subcommand("verify", "Recompute a periodic witness exponent");
    for (auto* cmd : {pressure, zerotemp, maxexp, mc, close, ver}) add_common(cmd, o);
    pressure->add_flag("--experimental", o.experimental, "Also emit the uncertified periodic-sum column");
    ver->add_option("--witness", verify.witness, "Witness word, e.g. 01");
    ver->add_option("--claim", claim, "Claimed per-symbol exponent");
    ver->add_option("--result", verify.result_path, "maxexp.json supplying witness and claim");
    ver->add_option("--tol", verify.tolerance, "Absolute tolerance")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    RunConfig cfg;
    try {
        cfg = load_config(o.config);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    }
    if (o.out) cfg.out_dir = *o.out;
    if (o.threads) cfg.threads = *o.threads;
    if (o.seed) cfg.seed = *o.seed;
    if (o.experimental) cfg.experimental = true;
    verify.claim = claim;

    if (*pressure) return run_pressure(cfg, std::cerr);
    if (*zerotemp) return run_zerotemp(cfg, std::cerr);
    if (*maxexp) return run_maxexp(cfg, std::cerr);
    if (*mc) return run_mc(cfg, std::cerr);
    if (*close) return run_close(cfg, std::cerr);
    return run_verify(cfg, verify, std::cout, std::cerr);
}
