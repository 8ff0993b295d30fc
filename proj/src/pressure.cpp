#include "subpress/pressure.hpp"

#include "subpress/errors.hpp"
#include "subpress/parallel.hpp"
#include "subpress/periodic_opt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subpress {

namespace {

template <class Real>
LogSumExp lse_of(std::span<const Real> exponents) {
    LogSumExp acc;
    long double m = -std::numeric_limits<long double>::infinity();
    for (Real v : exponents) m = std::max(m, static_cast<long double>(v));
    acc.max = m;
    if (!std::isfinite(m)) return acc;
    std::vector<long double> shifted(exponents.size());
    for (std::size_t i = 0; i < exponents.size(); ++i) shifted[i] = std::exp(static_cast<long double>(exponents[i]) - m);
    acc.sum = pairwise_sum(std::span<const long double>(shifted));
    return acc;
}

}  // namespace

LogSumExp LogSumExp::of(std::span<const double> exponents) { return lse_of(exponents); }
LogSumExp LogSumExp::of(std::span<const long double> exponents) { return lse_of(exponents); }

LogSumExp LogSumExp::merge(const LogSumExp& a, const LogSumExp& b) {
    if (!std::isfinite(a.max)) return b;
    if (!std::isfinite(b.max)) return a;
    LogSumExp out;
    out.max = std::max(a.max, b.max);
    out.sum = a.sum * std::exp(a.max - out.max) + b.sum * std::exp(b.max - out.max);
    return out;
}

long double LogSumExp::log_total_extended() const { return max + std::log(sum); }

double LogSumExp::log_total() const { return static_cast<double>(log_total_extended()); }

std::vector<long double> pressure_upper_extended(std::size_t n, std::span<const double> ts, const SftSpec& sft,
                                                const Potential& pot, std::size_t threads) {
    if (n == 0) throw std::invalid_argument("level n must be >= 1");
    for (double t : ts)
        if (!std::isfinite(t)) throw std::invalid_argument("inverse temperature must be finite");
    using Accs = std::vector<LogSumExp>;
    const Accs empty(ts.size());
    const Accs total = reduce_level(
        n, sft, pot, threads, false, empty,
        [&](const LevelChunk& chunk) {
            Accs out(ts.size());
            std::vector<long double> scaled(chunk.size());
            for (std::size_t j = 0; j < ts.size(); ++j) {
                const long double t = ts[j];
                for (std::size_t i = 0; i < chunk.size(); ++i) scaled[i] = t * chunk.values[i];
                out[j] = LogSumExp::of(std::span<const long double>(scaled));
            }
            return out;
        },
        [](const Accs& a, const Accs& b) {
            Accs out(a.size());
            for (std::size_t j = 0; j < a.size(); ++j) out[j] = LogSumExp::merge(a[j], b[j]);
            return out;
        });
    std::vector<long double> result(ts.size());
    for (std::size_t j = 0; j < ts.size(); ++j) result[j] = total[j].log_total_extended() / static_cast<long double>(n);
    return result;
}

long double pressure_upper_extended(std::size_t n, double t, const SftSpec& sft, const Potential& pot,
                                    std::size_t threads) {
    const double ts[] = {t};
    return pressure_upper_extended(n, ts, sft, pot, threads).front();
}

std::vector<double> pressure_upper(std::size_t n, std::span<const double> ts, const SftSpec& sft,
                                   const Potential& pot, std::size_t threads) {
    const auto ext = pressure_upper_extended(n, ts, sft, pot, threads);
    return std::vector<double>(ext.begin(), ext.end());
}

double pressure_upper(std::size_t n, double t, const SftSpec& sft, const Potential& pot, std::size_t threads) {
    return static_cast<double>(pressure_upper_extended(n, t, sft, pot, threads));
}

PeriodicBound pressure_lower_periodic(std::size_t n, double t, const SftSpec& sft, const Potential& pot,
                                      std::size_t threads) {
    if (t < 0.0) throw std::invalid_argument("periodic lower bound needs t >= 0");
    const CycleCandidate best = beta_lower_periodic(n, sft, pot, threads);
    return PeriodicBound{t * best.exponent, best.word};
}

double pressure_periodic_sum(std::size_t n, double t, const SftSpec& sft, const Potential& pot,
                             std::size_t threads) {
    if (n == 0) throw std::invalid_argument("level n must be >= 1");
    if (!pot.has_cycle_exponent()) throw std::invalid_argument("periodic sums need a matrix or additive potential");
    const auto prefixes = level_prefixes(n, sft);
    std::vector<LogSumExp> partial(prefixes.size());
    parallel_for(prefixes.size(), threads, [&](std::size_t i) {
        std::vector<double> exponents;
        traverse_words(n, sft, pot, prefixes[i].symbols(), [&](const PotentialCursor& c) {
            const auto w = c.word();
            if (sft.allows(w.back(), w.front())) exponents.push_back(t * c.cycle_value() * static_cast<double>(n));
        });
        partial[i] = LogSumExp::of(exponents);
    });
    const LogSumExp total = tree_reduce(std::move(partial), LogSumExp{}, LogSumExp::merge);
    return total.log_total() / static_cast<double>(n);
}

PressureCurve pressure_curve(std::span<const std::size_t> levels, std::span<const double> t_grid,
                             const SftSpec& sft, const Potential& pot, std::size_t threads) {
    if (levels.empty()) throw std::invalid_argument("at least one level is required");
    if (t_grid.empty()) throw std::invalid_argument("t grid must not be empty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < 0.0) throw std::invalid_argument("t grid must be >= 0");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("t grid must be increasing");
    }

    PressureCurve curve;
    curve.t_grid.assign(t_grid.begin(), t_grid.end());
    curve.upper_certified = sft.is_full();
    curve.points.resize(t_grid.size());
    for (std::size_t j = 0; j < t_grid.size(); ++j) curve.points[j].t = t_grid[j];

    // Lower bounds grow with the level, so the largest level's search covers all smaller ones.
    const bool periodic = pot.has_cycle_exponent();
    CycleCandidate cycle_best;
    std::size_t previous_level = 0;
    std::vector<std::size_t> sorted(levels.begin(), levels.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.front() == 0) throw std::invalid_argument("levels must be >= 1");

    for (std::size_t n : sorted) {
        const std::vector<double> upper = pressure_upper(n, t_grid, sft, pot, threads);
        if (periodic) {
            for (std::size_t len = previous_level + 1; len <= n; ++len) {
                CycleCandidate c = best_cycle_of_length(len, sft, pot, threads);
                if (improves(c, cycle_best)) cycle_best = std::move(c);
            }
            previous_level = std::max(previous_level, n);
        }
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
            const double t = t_grid[j];
            PressureBracket b;
            b.n = n;
            b.t = t;
            b.upper = upper[j];
            b.lower = periodic ? t * cycle_best.exponent : -std::numeric_limits<double>::infinity();
            b.witness = cycle_best.word;
            PressurePoint& p = curve.points[j];
            if (b.upper < p.upper) {
                p.upper = b.upper;
                p.n_upper = n;
            }
            if (b.lower > p.lower) {
                p.lower = b.lower;
                p.n_lower = n;
                p.witness = b.witness;
            }
            curve.brackets.push_back(std::move(b));
        }
    }
    return curve;
}

SlopeEstimate slope_at_infinity(const PressureCurve& curve) {
    if (curve.points.size() < 2) throw GridTooShort("slope at infinity needs at least two grid points");
    const auto& last = curve.points.back();
    const auto& prev = curve.points[curve.points.size() - 2];
    if (last.t < 100.0) throw GridTooShort("slope at infinity needs t_max >= 100");
    SlopeEstimate s;
    s.t_max = last.t;
    s.ratio = last.upper / last.t;
    s.fd_slope = (last.upper - prev.upper) / (last.t - prev.t);
    return s;
}

double convexity_report(std::span<const double> t_grid, std::span<const double> values) {
    if (t_grid.size() < 3 || values.size() != t_grid.size())
        throw std::invalid_argument("convexity report needs >= 3 matching grid points");
    const double h = t_grid[1] - t_grid[0];
    for (std::size_t i = 1; i + 1 < t_grid.size(); ++i)
        if (std::abs((t_grid[i + 1] - t_grid[i]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw std::invalid_argument("convexity report needs a uniform grid");
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < values.size(); ++i)
        worst = std::max(worst, -(values[i + 1] - 2.0 * values[i] + values[i - 1]));
    return worst;
}

double convexity_report(const PressureCurve& curve) {
    // Convexity holds per level; the min over levels need not be convex.
    const std::size_t m = curve.t_grid.size();
    double worst = 0.0;
    for (std::size_t start = 0; start + m <= curve.brackets.size(); start += m) {
        std::vector<double> upper(m);
        for (std::size_t j = 0; j < m; ++j) upper[j] = curve.brackets[start + j].upper;
        worst = std::max(worst, convexity_report(curve.t_grid, upper));
    }
    return worst;
}

std::vector<double> default_t_grid() {
    std::vector<double> grid{0.0};
    for (double t = 0.25; t <= 256.0; t *= 2.0) grid.push_back(t);
    return grid;
}

}  // namespace subpress
