#include "subpress/montecarlo.hpp"

#include "subpress/errors.hpp"
#include "subpress/parallel.hpp"
#include "subpress/random.hpp"

#include <cmath>
#include <stdexcept>

namespace subpress {

BernoulliSpec::BernoulliSpec(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw std::invalid_argument("probability vector must not be empty");
    double total = 0.0;
    for (double v : p_) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("probabilities must be strictly positive");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("probabilities must sum to 1");
}

BernoulliSpec BernoulliSpec::uniform(std::size_t k) {
    return BernoulliSpec(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

namespace {

void check_inputs(const Potential& pot, const SftSpec& sft, const BernoulliSpec& bp, std::size_t n,
                  std::size_t samples) {
    if (!sft.is_full()) throw UnsupportedSft("Bernoulli measures are only invariant on the full shift");
    if (pot.alphabet_size() != sft.k() || bp.size() != sft.k())
        throw std::invalid_argument("alphabet sizes of potential, subshift and measure differ");
    if (!pot.has_cycle_exponent()) throw std::invalid_argument("table potentials cannot be sampled along words");
    if (n < 100) throw std::invalid_argument("product length n must be >= 100");
    if (samples < 100) throw std::invalid_argument("sample count must be >= 100");
}

// One trajectory exponent, computed with a single renormalized running product.
double sample_exponent(const Potential& pot, const BernoulliSpec& bp, std::size_t n, std::uint64_t stream_seed) {
    std::mt19937_64 rng(stream_seed);
    const auto& p = bp.p();
    if (const MatrixSet* ms = pot.matrix_set()) {
        ScaledMatrix running(Matrix::identity(ms->dim()));
        for (std::size_t i = 0; i < n; ++i) running.left_multiply((*ms)[sample_index(p, 1.0, uniform01(rng))]);
        return running.log_norm() / static_cast<double>(n);
    }
    const auto& f = std::get<AdditivePotential>(pot.kind()).f;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += f[sample_index(p, 1.0, uniform01(rng))];
    return sum / static_cast<double>(n);
}

}  // namespace

ExponentEstimate furstenberg_estimate(const Potential& pot, const SftSpec& sft, const BernoulliSpec& bp,
                                      std::size_t n, std::size_t samples, std::uint64_t seed, std::size_t threads) {
    check_inputs(pot, sft, bp, n, samples);
    std::vector<double> values(samples);
    parallel_for(samples, threads,
                 [&](std::size_t i) { values[i] = sample_exponent(pot, bp, n, derive_seed(seed, i)); });

    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(samples);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(samples - 1));

    ExponentEstimate est;
    est.mean = mean;
    est.half_width = 1.96 * sd / std::sqrt(static_cast<double>(samples));
    est.n = n;
    est.samples = samples;
    est.seed = seed;
    return est;
}

ProbeResult continuity_probe(const Potential& pot, const Potential& pot_prime, const SftSpec& sft,
                             const BernoulliSpec& bp, const BernoulliSpec& bp_prime, std::size_t n,
                             std::size_t samples, std::uint64_t seed, std::size_t threads) {
    ProbeResult r;
    r.base = furstenberg_estimate(pot, sft, bp, n, samples, seed, threads);
    r.perturbed = furstenberg_estimate(pot_prime, sft, bp_prime, n, samples, seed, threads);
    r.difference = std::abs(r.base.mean - r.perturbed.mean);
    return r;
}

MatrixSet perturb_entries(const MatrixSet& ms, double delta, std::uint64_t seed) {
    std::mt19937_64 rng(derive_seed(seed, 0x5eed));
    std::vector<Matrix> out;
    for (const Matrix& m : ms.matrices()) {
        Matrix q = m;
        for (std::size_t r = 0; r < q.dim(); ++r)
            for (std::size_t c = 0; c < q.dim(); ++c) q(r, c) += (rng() & 1U) ? delta : -delta;
        out.push_back(std::move(q));
    }
    return MatrixSet(std::move(out));
}

BernoulliSpec perturb_measure(const BernoulliSpec& bp, double delta) {
    if (bp.size() < 2) throw std::invalid_argument("measure perturbation needs k >= 2");
    std::vector<double> p = bp.p();
    p[0] += delta;
    p[1] -= delta;
    return BernoulliSpec(std::move(p));
}

std::vector<LadderRow> continuity_ladder(const MatrixSet& ms, const BernoulliSpec& bp,
                                         const std::vector<double>& deltas, PerturbationTarget target,
                                         std::size_t n, std::size_t samples, std::uint64_t seed,
                                         std::size_t threads) {
    const SftSpec sft = SftSpec::full(ms.size());
    const Potential base(ms);
    std::vector<LadderRow> rows;
    for (double delta : deltas) {
        const bool matrices = target == PerturbationTarget::Matrices;
        const Potential moved = matrices ? Potential(perturb_entries(ms, delta, seed)) : base;
        const BernoulliSpec bp_prime = matrices ? bp : perturb_measure(bp, delta);
        const ProbeResult r = continuity_probe(base, moved, sft, bp, bp_prime, n, samples, seed, threads);
        rows.push_back(LadderRow{delta, r.base.mean, r.perturbed.mean, r.difference,
                                 std::max(r.base.half_width, r.perturbed.half_width)});
    }
    return rows;
}

}  // namespace subpress
