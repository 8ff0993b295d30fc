#pragma once

// Run configuration: one JSON document describes an experiment. Command-line
// flags may only override the top-level `seed`, `threads` and `output.dir`.

#include "subpress/cocycle.hpp"
#include "subpress/periodic_opt.hpp"
#include "subpress/symbolic.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace subpress::app {

/// All validation problems of a document, each prefixed with its field path.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    std::vector<std::string> problems;
};

struct TGridSpec {
    double min = 0.25;
    double max = 256.0;
    std::size_t points = 11;
    std::string scale = "geometric";  // or "linear"
    bool include_zero = true;

    [[nodiscard]] std::vector<double> values() const;
    bool operator==(const TGridSpec&) const = default;
};

struct McConfig {
    std::vector<double> p;  // empty: uniform
    std::size_t n = 1000;
    std::size_t samples = 1000;
    std::vector<double> deltas{1e-1, 1e-2, 1e-3, 1e-4};
    std::string perturb = "matrices";  // or "measure"
    bool operator==(const McConfig&) const = default;
};

struct CloseConfig {
    std::vector<double> p;  // empty: uniform
    std::size_t length = 10000;
    bool operator==(const CloseConfig&) const = default;
};

struct RunConfig {
    std::size_t k = 0;
    bool full_shift = true;
    std::vector<std::vector<int>> transitions;  // empty on the full shift

    std::string potential = "matrix_norm";  // or "additive"
    std::vector<std::vector<std::vector<double>>> matrices;
    std::vector<double> additive;

    TGridSpec t_grid;
    TGridSpec convexity_grid{0.0, 10.0, 101, "linear", false};
    std::vector<std::size_t> levels{1, 2, 4, 8};
    SearchConfig search;
    McConfig mc;
    CloseConfig close;
    std::uint64_t seed = 0;
    std::size_t threads = 0;  // 0: all cores
    std::string out_dir = "out";
    bool experimental = false;

    [[nodiscard]] SftSpec sft() const;
    [[nodiscard]] Potential make_potential() const;
    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates; throws ConfigError listing every problem.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& doc);
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Canonical echo of a configuration; parse_config(to_json(c)) == c.
[[nodiscard]] nlohmann::json to_json(const RunConfig& cfg);

/// FNV-1a 64 of the canonical echo, as 16 hex digits.
[[nodiscard]] std::string config_hash(const RunConfig& cfg);

}  // namespace subpress::app
