#pragma once

// Lyapunov exponents of Bernoulli measures on the full shift,
//     chi(mu) = lim (1/n) E log ||A_{w_{n-1}} ... A_{w_0}||,
// estimated by sampling i.i.d. words, plus a paired-sample continuity probe.

#include "subpress/cocycle.hpp"
#include "subpress/symbolic.hpp"

#include <cstdint>
#include <vector>

namespace subpress {

/// Strictly positive probability vector over the k symbols.
class BernoulliSpec {
public:
    explicit BernoulliSpec(std::vector<double> p);
    static BernoulliSpec uniform(std::size_t k);

    [[nodiscard]] const std::vector<double>& p() const noexcept { return p_; }
    [[nodiscard]] std::size_t size() const noexcept { return p_.size(); }
    bool operator==(const BernoulliSpec&) const = default;

private:
    std::vector<double> p_;
};

struct ExponentEstimate {
    double mean = 0.0;
    double half_width = 0.0;  // 1.96 * sample std / sqrt(samples)
    std::size_t n = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

/// Mean of s(w)/n over `samples` i.i.d. words of length n. Sample i draws from
/// the substream derive_seed(seed, i), so the result does not depend on `threads`.
/// Throws UnsupportedSft unless `sft` is the full shift.
[[nodiscard]] ExponentEstimate furstenberg_estimate(const Potential& pot, const SftSpec& sft,
                                                    const BernoulliSpec& bp, std::size_t n, std::size_t samples,
                                                    std::uint64_t seed, std::size_t threads = 1);

struct ProbeResult {
    ExponentEstimate base;
    ExponentEstimate perturbed;
    double difference = 0.0;  // |base.mean - perturbed.mean|
};

/// Paired estimates with common random numbers: both runs consume the same uniforms.
[[nodiscard]] ProbeResult continuity_probe(const Potential& pot, const Potential& pot_prime, const SftSpec& sft,
                                           const BernoulliSpec& bp, const BernoulliSpec& bp_prime, std::size_t n,
                                           std::size_t samples, std::uint64_t seed, std::size_t threads = 1);

/// Every entry moved by +-delta (signs from `seed`): max-norm distance exactly delta.
[[nodiscard]] MatrixSet perturb_entries(const MatrixSet& ms, double delta, std::uint64_t seed);

/// p + delta (e_0 - e_1); requires k >= 2 and the result to stay strictly positive.
[[nodiscard]] BernoulliSpec perturb_measure(const BernoulliSpec& bp, double delta);

enum class PerturbationTarget { Matrices, Measure };

struct LadderRow {
    double delta = 0.0;
    double chi = 0.0;
    double chi_prime = 0.0;
    double gap = 0.0;
    double half_width = 0.0;  // larger of the two half-widths
};

/// Continuity probe over a ladder of perturbation sizes.
[[nodiscard]] std::vector<LadderRow> continuity_ladder(const MatrixSet& ms, const BernoulliSpec& bp,
                                                       const std::vector<double>& deltas, PerturbationTarget target,
                                                       std::size_t n, std::size_t samples, std::uint64_t seed,
                                                       std::size_t threads = 1);

}  // namespace subpress
