#pragma once

// Brackets for the topological pressure P(t * Phi) of a cocycle potential.
//
// Upper value at level n:  (1/n) log sum_{|w| = n} exp(t s(w)),
// the exact cylinder form of the separated-set definition. On the full shift
// it is an upper bound for every n (Fekete); on a proper SFT it is reported
// as an estimate only.
//
// Lower value: t times the best periodic-orbit exponent of period <= n; a
// periodic measure has zero entropy, so the variational principle makes this
// a lower bound for P(t * Phi).

#include "subpress/cocycle.hpp"
#include "subpress/symbolic.hpp"

#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace subpress {

/// Streaming log-sum-exp state: values are stored relative to `max`.
struct LogSumExp {
    long double max = -std::numeric_limits<long double>::infinity();
    long double sum = 0.0L;

    /// Two-pass accumulation over a block: running max, then shifted pairwise sum.
    static LogSumExp of(std::span<const double> exponents);
    static LogSumExp of(std::span<const long double> exponents);
    [[nodiscard]] static LogSumExp merge(const LogSumExp& a, const LogSumExp& b);
    [[nodiscard]] double log_total() const;
    [[nodiscard]] long double log_total_extended() const;
};

/// (1/n) log sum_w exp(t s(w)) over admissible words of length n.
/// Any finite t is accepted; t < 0 is outside the physical range but is
/// useful for finite differences around t = 0.
[[nodiscard]] double pressure_upper(std::size_t n, double t, const SftSpec& sft, const Potential& pot,
                                    std::size_t threads = 1);

/// pressure_upper before the final rounding to double. t * s(w) and the
/// log-sum-exp are carried in long double, so differences in t (finite-difference
/// derivatives) are not swamped by the double rounding of each value.
[[nodiscard]] long double pressure_upper_extended(std::size_t n, double t, const SftSpec& sft, const Potential& pot,
                                                  std::size_t threads = 1);
[[nodiscard]] std::vector<long double> pressure_upper_extended(std::size_t n, std::span<const double> ts,
                                                               const SftSpec& sft, const Potential& pot,
                                                               std::size_t threads = 1);

/// pressure_upper for many t with a single traversal of the level.
[[nodiscard]] std::vector<double> pressure_upper(std::size_t n, std::span<const double> ts, const SftSpec& sft,
                                                 const Potential& pot, std::size_t threads = 1);

struct PeriodicBound {
    double value = -std::numeric_limits<double>::infinity();
    Word witness;
};

/// max over cyclically admissible |w| <= n of t * (per-symbol periodic exponent), with witness.
[[nodiscard]] PeriodicBound pressure_lower_periodic(std::size_t n, double t, const SftSpec& sft,
                                                    const Potential& pot, std::size_t threads = 1);

/// (1/n) log sum over cyclically admissible |w| = n of rho(A_w)^t. Not a
/// certified bound for general matrix sets; exposed for experiments only.
[[nodiscard]] double pressure_periodic_sum(std::size_t n, double t, const SftSpec& sft, const Potential& pot,
                                           std::size_t threads = 1);

struct PressureBracket {
    std::size_t n = 0;
    double t = 0.0;
    double upper = 0.0;
    double lower = 0.0;
    Word witness;
};

struct PressurePoint {
    double t = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    std::size_t n_upper = 0;  // level attaining `upper`
    std::size_t n_lower = 0;  // level attaining `lower`
    Word witness;
};

struct PressureCurve {
    std::vector<double> t_grid;
    std::vector<PressurePoint> points;
    /// Every (n, t) bracket that went into the curve, level-major.
    std::vector<PressureBracket> brackets;
    /// True on the full shift, where the upper values are certified.
    bool upper_certified = false;
};

/// Brackets at every (n, t), plus per-t best upper (min over n) and best lower (max over n).
[[nodiscard]] PressureCurve pressure_curve(std::span<const std::size_t> levels, std::span<const double> t_grid,
                                           const SftSpec& sft, const Potential& pot, std::size_t threads = 1);

struct SlopeEstimate {
    double ratio = 0.0;     // upper(t_max) / t_max
    double fd_slope = 0.0;  // slope of the last grid segment
    double t_max = 0.0;
};

/// Asymptotic slope P'(inf) from a curve whose grid reaches t >= 100; throws GridTooShort.
[[nodiscard]] SlopeEstimate slope_at_infinity(const PressureCurve& curve);

/// Largest second-difference violation -(P(t+h) - 2P(t) + P(t-h)) on a uniform grid (>= 3 points).
[[nodiscard]] double convexity_report(std::span<const double> t_grid, std::span<const double> values);
/// Worst violation over the fixed-level upper curves of `curve`.
[[nodiscard]] double convexity_report(const PressureCurve& curve);

/// Default grid: 0 followed by the geometric ladder 0.25, 0.5, ..., 256.
[[nodiscard]] std::vector<double> default_t_grid();

}  // namespace subpress
