#pragma once

// Subcommand implementations. Each writes its files under cfg.out_dir
// atomically and returns a process exit code.

#include "subpress/app/config.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace subpress::app {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitBudget = 3,
    kExitMismatch = 4,
};

inline constexpr const char* kToolName = "subpress";
[[nodiscard]] const char* tool_version();

/// pressure.csv (t, n, upper, lower, witness per level), pressure_curve.csv
/// (best bracket per t) and pressure.json (metadata, convexity, slope).
int run_pressure(const RunConfig& cfg, std::ostream& log);

/// zerotemp.csv (t, n, chi, entropy, pressure, gap_bound), zerotemp_argmax.json, zerotemp.json.
int run_zerotemp(const RunConfig& cfg, std::ostream& log);

/// maxexp.json: {lower, upper, gap, witness, period, depth, ...}.
int run_maxexp(const RunConfig& cfg, std::ostream& log);

/// mc.csv (delta, chi, chi_prime, gap, half_width) and mc.json.
int run_mc(const RunConfig& cfg, std::ostream& log);

/// close.json and close_prefix.csv (n, prefix_exponent).
int run_close(const RunConfig& cfg, std::ostream& log);

struct VerifyRequest {
    std::string witness;
    std::optional<double> claim;
    std::string result_path;  // maxexp.json supplying witness and claim
    double tolerance = 1e-8;
};

/// Recomputes the witness exponent; 0 iff it reproduces the claim within tolerance, else 4.
int run_verify(const RunConfig& cfg, const VerifyRequest& req, std::ostream& out, std::ostream& log);

}  // namespace subpress::app
