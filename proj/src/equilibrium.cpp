#include "subpress/equilibrium.hpp"

#include "subpress/parallel.hpp"
#include "subpress/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subpress {

namespace {

struct LevelTable {
    std::size_t n = 0;
    std::vector<Word> words;
    std::vector<double> values;
};

LevelTable collect_level(std::size_t n, const SftSpec& sft, const Potential& pot, std::size_t threads) {
    if (n == 0) throw std::invalid_argument("level n must be >= 1");
    if (sft.k() != pot.alphabet_size())
        throw std::invalid_argument("alphabet size of the subshift and the potential differ");
    const auto prefixes = level_prefixes(n, sft);
    std::vector<LevelChunk> chunks(prefixes.size());
    parallel_for(prefixes.size(), threads,
                 [&](std::size_t i) { chunks[i] = evaluate_chunk(n, sft, pot, prefixes[i].symbols(), true); });
    LevelTable table;
    table.n = n;
    for (const auto& chunk : chunks) {
        for (std::size_t i = 0; i < chunk.size(); ++i) {
            const auto w = chunk.word(i);
            table.words.emplace_back(std::vector<Symbol>(w.begin(), w.end()));
            table.values.push_back(chunk.values[i]);
        }
    }
    return table;
}

GibbsApproximant gibbs_from_table(const LevelTable& table, double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("inverse temperature must be finite");
    GibbsApproximant g;
    g.n = table.n;
    g.t = t;
    g.words = table.words;
    g.log_norms = table.values;
    std::vector<double> exponents(table.values.size());
    for (std::size_t i = 0; i < exponents.size(); ++i) exponents[i] = t * table.values[i];
    const double log_z = LogSumExp::of(exponents).log_total();
    g.log_probs.resize(exponents.size());
    g.probabilities.resize(exponents.size());
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        g.log_probs[i] = exponents[i] - log_z;
        g.probabilities[i] = std::exp(g.log_probs[i]);
    }
    return g;
}

double beta_plus_of(const LevelTable& table) {
    return *std::max_element(table.values.begin(), table.values.end()) / static_cast<double>(table.n);
}

GibbsApproximant ground_from_table(const LevelTable& table) {
    const double n = static_cast<double>(table.n);
    const double best = beta_plus_of(table);
    const double tie_tol = 1e-9 * n;
    GibbsApproximant g;
    g.n = table.n;
    g.t = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < table.values.size(); ++i) {
        if (table.values[i] / n >= best - tie_tol) {
            g.words.push_back(table.words[i]);
            g.log_norms.push_back(table.values[i]);
        }
    }
    const double m = static_cast<double>(g.words.size());
    g.log_probs.assign(g.words.size(), -std::log(m));
    g.probabilities.assign(g.words.size(), 1.0 / m);
    return g;
}

}  // namespace

double GibbsApproximant::probability(const Word& w) const {
    const auto it = std::lower_bound(words.begin(), words.end(), w);
    if (it == words.end() || *it != w) return 0.0;
    return probabilities[static_cast<std::size_t>(it - words.begin())];
}

double GibbsApproximant::mass(std::span<const Word> set) const {
    double m = 0.0;
    for (const Word& w : set) m += probability(w);
    return m;
}

GibbsApproximant gibbs_weights(std::size_t n, double t, const SftSpec& sft, const Potential& pot,
                               std::size_t threads) {
    return gibbs_from_table(collect_level(n, sft, pot, threads), t);
}

double lyapunov_of(const GibbsApproximant& g) {
    std::vector<double> terms(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) terms[i] = g.probabilities[i] * g.log_norms[i];
    return pairwise_sum(std::span<const double>(terms)) / static_cast<double>(g.n);
}

double entropy_of(const GibbsApproximant& g) {
    std::vector<double> terms(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) terms[i] = -g.probabilities[i] * g.log_probs[i];
    return pairwise_sum(std::span<const double>(terms)) / static_cast<double>(g.n);
}

double third_derivative_of(const GibbsApproximant& g) {
    const double mean = lyapunov_of(g) * static_cast<double>(g.n);
    std::vector<double> terms(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double c = g.log_norms[i] - mean;
        terms[i] = g.probabilities[i] * c * c * c;
    }
    return pairwise_sum(std::span<const double>(terms)) / static_cast<double>(g.n);
}

GibbsApproximant ground_state(std::size_t n, const SftSpec& sft, const Potential& pot, std::size_t threads) {
    return ground_from_table(collect_level(n, sft, pot, threads));
}

ZeroTempDiagnostics zero_temp_sweep(std::size_t n, std::span<const double> t_grid, const SftSpec& sft,
                                    const Potential& pot, std::size_t threads) {
    if (t_grid.empty() || t_grid.front() != 0.0) throw std::invalid_argument("t grid must start at 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("t grid must be increasing");

    const LevelTable table = collect_level(n, sft, pot, threads);
    const std::vector<double> pressures = pressure_upper(n, t_grid, sft, pot, threads);
    const GibbsApproximant ground = ground_from_table(table);

    ZeroTempDiagnostics out;
    out.n = n;
    out.beta_plus = beta_plus_of(table);
    out.argmax = ground.words;
    out.ground_entropy = std::log(static_cast<double>(ground.size())) / static_cast<double>(n);
    out.log_k = std::log(static_cast<double>(sft.k()));

    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        const GibbsApproximant g = gibbs_from_table(table, t);
        ZeroTempRow row;
        row.t = t;
        row.chi = lyapunov_of(g);
        row.entropy = entropy_of(g);
        row.pressure = pressures[i];
        row.chi_gap = out.beta_plus - row.chi;
        if (t > 0.0) {
            row.gap_bound = row.entropy / t;
            if (row.chi_gap > row.gap_bound + 1e-12 || row.gap_bound > out.log_k / t + 1e-12)
                out.gap_bound_holds = false;
        }
        out.max_chi_over_beta = std::max(out.max_chi_over_beta, row.chi - out.beta_plus);
        if (!out.rows.empty()) {
            out.max_chi_decrease = std::max(out.max_chi_decrease, out.rows.back().chi - row.chi);
            out.max_entropy_increase = std::max(out.max_entropy_increase, row.entropy - out.rows.back().entropy);
        }
        out.rows.push_back(row);
    }
    return out;
}

double total_variation(const GibbsApproximant& a, const GibbsApproximant& b) {
    if (a.n != b.n) throw std::invalid_argument("total variation needs approximants at the same level");
    double acc = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j >= b.size() || (i < a.size() && a.words[i] < b.words[j])) {
            acc += a.probabilities[i++];
        } else if (i >= a.size() || b.words[j] < a.words[i]) {
            acc += b.probabilities[j++];
        } else {
            acc += std::abs(a.probabilities[i++] - b.probabilities[j++]);
        }
    }
    return 0.5 * acc;
}

}  // namespace subpress
