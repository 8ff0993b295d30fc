#pragma once

// Enclosures of the maximal Lyapunov exponent
//     beta = lim (1/n) log sup_x phi_n(x)
// by exhaustive per-level norm maxima (upper, via Fekete) and periodic-orbit
// spectral radii (lower, since every periodic measure is invariant).
//
// Upper values come only from exhaustive levels. On a proper SFT every
// admissible word extends to a bi-infinite orbit (no dead symbols), so the
// per-level maximum over admissible words equals sup_x phi_n and the same
// min-over-levels bound is certified.

#include "subpress/cocycle.hpp"
#include "subpress/errors.hpp"
#include "subpress/symbolic.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace subpress {

struct CycleCandidate {
    double exponent = -std::numeric_limits<double>::infinity();
    Word word;
};

/// Best per-symbol periodic exponent over cyclically admissible words of length
/// exactly `length` (primitive necklace representatives only).
[[nodiscard]] CycleCandidate best_cycle_of_length(std::size_t length, const SftSpec& sft, const Potential& pot,
                                                  std::size_t threads = 1);

/// Incumbent update rule: a candidate replaces the incumbent only if strictly
/// better by more than 1e-12, so earlier (shorter, then lexicographically
/// smaller) witnesses win ties.
[[nodiscard]] bool improves(const CycleCandidate& candidate, const CycleCandidate& incumbent);

struct BetaUpper {
    double value = std::numeric_limits<double>::infinity();
    std::size_t level = 0;
    std::vector<double> per_level;  // max_w s(w)/n for n = 1..N
};

/// min over n <= N of max_{|w| = n} s(w)/n.
[[nodiscard]] BetaUpper beta_upper(std::size_t max_level, const SftSpec& sft, const Potential& pot,
                                   std::size_t threads = 1);

/// max over cyclically admissible |w| <= N of the per-symbol periodic exponent, with witness.
[[nodiscard]] CycleCandidate beta_lower_periodic(std::size_t max_level, const SftSpec& sft, const Potential& pot,
                                                 std::size_t threads = 1);

struct SearchConfig {
    std::size_t n_exact = 12;
    double beam_delta = 0.05;
    std::size_t max_depth = 64;
    std::size_t beam_width = 4096;
    double time_budget_s = 0.0;  // 0 disables the wall-clock budget
    std::uint64_t seed = 0;

    /// Defaults with n_exact scaled to the alphabet: floor(12 / log2 k).
    static SearchConfig defaults_for(std::size_t k);
    void validate() const;
    bool operator==(const SearchConfig&) const = default;
};

struct JsrBracket {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    PeriodicOrbit witness;
    std::size_t depth_used = 0;
    std::size_t upper_level = 0;

    [[nodiscard]] double gap() const noexcept { return upper - lower; }
};

/// The wall-clock budget ran out; `bracket` is still a sound enclosure.
class BudgetExhausted : public Error {
public:
    BudgetExhausted(const std::string& what, JsrBracket best) : Error(what), bracket(std::move(best)) {}
    JsrBracket bracket;
};

/// Exhaustive levels up to n_exact for both bounds, then a beam search that can
/// only raise the lower bound. Stops once gap <= 1e-6 or at max_depth.
[[nodiscard]] JsrBracket bracket_search(const SearchConfig& cfg, const SftSpec& sft, const Potential& pot,
                                        std::size_t threads = 1);

/// Recomputes the witness exponent from scratch.
[[nodiscard]] double verify_witness(const Word& witness, const SftSpec& sft, const Potential& pot);

struct ClosingReport {
    Word trajectory;
    std::vector<double> prefix_exponents;  // s(w_1..w_m)/m for m = 1..len
    double prefix_exponent = 0.0;
    PeriodicOrbit orbit;
    double closed_exponent = 0.0;
    double difference = 0.0;  // closed - prefix
    std::size_t extension = 0;  // symbols appended after NoClosure
};

/// Samples an admissible trajectory (proposal p restricted to allowed successors),
/// closes it into a periodic orbit and compares the two exponents.
[[nodiscard]] ClosingReport closing_experiment(const Potential& pot, const SftSpec& sft,
                                               const std::vector<double>& p, std::size_t length,
                                               std::uint64_t seed);

}  // namespace subpress
