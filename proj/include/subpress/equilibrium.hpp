#pragma once

// Finite-level Gibbs approximants p_w ∝ exp(t s(w)) on the admissible words of
// length n, and their zero-temperature (t -> infinity) diagnostics.
//
// These cylinder distributions stand in for equilibrium states; they are not
// shift-invariant measures. What is checked about them are exact finite-level
// identities:
//   entropy_n(t) + t chi_n(t) = pressure_upper(n, t)
//   d/dt pressure_upper(n, t) = chi_n(t)
//   d/dt chi_n(t) = Var(s)/n >= 0,  d/dt entropy_n(t) = -t Var(s)/n <= 0
// and the behavior as n grows is reported as trend data only.

#include "subpress/cocycle.hpp"
#include "subpress/symbolic.hpp"

#include <limits>
#include <span>
#include <vector>

namespace subpress {

struct GibbsApproximant {
    std::size_t n = 0;
    double t = 0.0;  // +infinity for ground states
    std::vector<Word> words;
    std::vector<double> log_norms;      // s(w)
    std::vector<double> log_probs;      // log p_w (finite)
    std::vector<double> probabilities;  // exp(log p_w); may underflow to 0 at large t

    [[nodiscard]] std::size_t size() const noexcept { return words.size(); }
    /// Probability of w, 0 when w is not in the support.
    [[nodiscard]] double probability(const Word& w) const;
    /// Total probability of a set of words.
    [[nodiscard]] double mass(std::span<const Word> set) const;
};

/// Gibbs weights at level n and inverse temperature t (any finite t).
[[nodiscard]] GibbsApproximant gibbs_weights(std::size_t n, double t, const SftSpec& sft, const Potential& pot,
                                             std::size_t threads = 1);

/// chi_n = sum_w p_w s(w) / n.
[[nodiscard]] double lyapunov_of(const GibbsApproximant& g);

/// -(1/n) sum_w p_w log p_w, per symbol.
[[nodiscard]] double entropy_of(const GibbsApproximant& g);

/// Third cumulant of s under g, divided by n: the third t-derivative of pressure_upper.
[[nodiscard]] double third_derivative_of(const GibbsApproximant& g);

/// Uniform distribution on {w : s(w)/n >= beta_plus(n) - 1e-9 n}; the t = infinity limit.
[[nodiscard]] GibbsApproximant ground_state(std::size_t n, const SftSpec& sft, const Potential& pot,
                                            std::size_t threads = 1);

struct ZeroTempRow {
    double t = 0.0;
    double chi = 0.0;
    double entropy = 0.0;
    double pressure = 0.0;
    /// beta_plus - chi (the zero-temperature gap) and its bound entropy/t (inf at t = 0).
    double chi_gap = 0.0;
    double gap_bound = std::numeric_limits<double>::infinity();
};

struct ZeroTempDiagnostics {
    std::size_t n = 0;
    std::vector<ZeroTempRow> rows;
    double beta_plus = 0.0;        // max_w s(w)/n
    double ground_entropy = 0.0;   // (1/n) log |argmax set|
    std::vector<Word> argmax;
    double log_k = 0.0;

    // Checks recorded while sweeping.
    double max_chi_decrease = 0.0;      // worst chi(t_i) - chi(t_{i+1}) > 0
    double max_entropy_increase = 0.0;  // worst entropy(t_{i+1}) - entropy(t_i) > 0
    double max_chi_over_beta = 0.0;     // worst chi - beta_plus > 0
    bool gap_bound_holds = true;        // chi_gap <= entropy/t <= log k / t at every t > 0
};

/// Gibbs diagnostics over an increasing grid starting at 0.
[[nodiscard]] ZeroTempDiagnostics zero_temp_sweep(std::size_t n, std::span<const double> t_grid, const SftSpec& sft,
                                                  const Potential& pot, std::size_t threads = 1);

/// Total-variation distance between two approximants at the same level.
[[nodiscard]] double total_variation(const GibbsApproximant& a, const GibbsApproximant& b);

}  // namespace subpress
