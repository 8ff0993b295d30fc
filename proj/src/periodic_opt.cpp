#include "subpress/periodic_opt.hpp"

#include "subpress/parallel.hpp"
#include "subpress/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace subpress {

bool improves(const CycleCandidate& candidate, const CycleCandidate& incumbent) {
    if (!std::isfinite(candidate.exponent)) return false;
    if (!std::isfinite(incumbent.exponent)) return true;
    return candidate.exponent > incumbent.exponent + 1e-12;
}

namespace {

void require_cycle_potential(const Potential& pot) {
    if (!pot.has_cycle_exponent())
        throw std::invalid_argument("periodic-orbit bounds need a matrix or additive potential");
}

void require_matching_alphabet(const SftSpec& sft, const Potential& pot) {
    if (sft.k() != pot.alphabet_size())
        throw std::invalid_argument("alphabet size of the subshift and the potential differ");
}

/// Least rotation of w, reduced to its primitive root.
Word canonical_cycle(std::span<const Symbol> w) {
    const std::size_t n = w.size();
    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            const Symbol a = w[(r + i) % n];
            const Symbol b = w[(best + i) % n];
            if (a != b) {
                if (a < b) best = r;
                break;
            }
        }
    }
    std::vector<Symbol> rotated(n);
    for (std::size_t i = 0; i < n; ++i) rotated[i] = w[(best + i) % n];
    for (std::size_t p = 1; p < n; ++p) {
        if (n % p != 0) continue;
        bool periodic = true;
        for (std::size_t i = p; i < n && periodic; ++i) periodic = rotated[i] == rotated[i - p];
        if (periodic) {
            rotated.resize(p);
            break;
        }
    }
    return Word(std::move(rotated));
}

double level_max(std::size_t n, const SftSpec& sft, const Potential& pot, std::size_t threads) {
    return reduce_level(
        n, sft, pot, threads, false, -std::numeric_limits<double>::infinity(),
        [](const LevelChunk& chunk) {
            double m = -std::numeric_limits<double>::infinity();
            for (double v : chunk.values) m = std::max(m, v);
            return m;
        },
        [](double a, double b) { return std::max(a, b); });
}

}  // namespace

CycleCandidate best_cycle_of_length(std::size_t length, const SftSpec& sft, const Potential& pot,
                                    std::size_t threads) {
    if (length == 0) throw std::invalid_argument("cycle length must be >= 1");
    require_cycle_potential(pot);
    require_matching_alphabet(sft, pot);
    const auto prefixes = level_prefixes(length, sft);
    std::vector<CycleCandidate> partial(prefixes.size());
    parallel_for(prefixes.size(), threads, [&](std::size_t i) {
        CycleCandidate best;
        traverse_words(length, sft, pot, prefixes[i].symbols(), [&](const PotentialCursor& c) {
            const auto w = c.word();
            if (!sft.allows(w.back(), w.front()) || !is_primitive_necklace(w)) return;
            CycleCandidate cand{c.cycle_value(), Word(std::vector<Symbol>(w.begin(), w.end()))};
            if (improves(cand, best)) best = std::move(cand);
        });
        partial[i] = std::move(best);
    });
    return tree_reduce(std::move(partial), CycleCandidate{},
                       [](const CycleCandidate& a, const CycleCandidate& b) { return improves(b, a) ? b : a; });
}

BetaUpper beta_upper(std::size_t max_level, const SftSpec& sft, const Potential& pot, std::size_t threads) {
    if (max_level == 0) throw std::invalid_argument("N must be >= 1");
    require_matching_alphabet(sft, pot);
    BetaUpper out;
    for (std::size_t n = 1; n <= max_level; ++n) {
        const double v = level_max(n, sft, pot, threads) / static_cast<double>(n);
        out.per_level.push_back(v);
        if (v < out.value) {
            out.value = v;
            out.level = n;
        }
    }
    return out;
}

CycleCandidate beta_lower_periodic(std::size_t max_level, const SftSpec& sft, const Potential& pot,
                                   std::size_t threads) {
    if (max_level == 0) throw std::invalid_argument("N must be >= 1");
    CycleCandidate best;
    for (std::size_t len = 1; len <= max_level; ++len) {
        CycleCandidate c = best_cycle_of_length(len, sft, pot, threads);
        if (improves(c, best)) best = std::move(c);
    }
    return best;
}

SearchConfig SearchConfig::defaults_for(std::size_t k) {
    SearchConfig cfg;
    if (k > 2) cfg.n_exact = std::max<std::size_t>(1, static_cast<std::size_t>(12.0 / std::log2(static_cast<double>(k))));
    return cfg;
}

void SearchConfig::validate() const {
    if (n_exact == 0) throw std::invalid_argument("search.n_exact must be >= 1");
    if (n_exact > max_depth) throw std::invalid_argument("search.n_exact must not exceed search.max_depth");
    if (!(beam_delta >= 0.0)) throw std::invalid_argument("search.beam_delta must be >= 0");
    if (beam_width == 0) throw std::invalid_argument("search.beam_width must be >= 1");
    if (!(time_budget_s >= 0.0)) throw std::invalid_argument("search.time_budget_s must be >= 0");
}

double verify_witness(const Word& witness, const SftSpec& sft, const Potential& pot) {
    if (witness.empty()) throw std::invalid_argument("empty witness");
    if (!is_cyclically_admissible(witness, sft))
        throw std::invalid_argument("witness '" + witness.str() + "' is not cyclically admissible");
    return cycle_exponent(witness, pot);
}

namespace {

struct BeamNode {
    std::vector<Symbol> word;
    ScaledMatrix product;
    double sum = 0.0;
    double score = 0.0;
};

class Stopwatch {
public:
    explicit Stopwatch(double budget_s) : budget_(budget_s), start_(std::chrono::steady_clock::now()) {}
    [[nodiscard]] bool exhausted() const {
        if (budget_ <= 0.0) return false;
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
        return elapsed.count() > budget_;
    }

private:
    double budget_;
    std::chrono::steady_clock::time_point start_;
};

JsrBracket finalize(JsrBracket br, const CycleCandidate& best, const SftSpec& sft, const Potential& pot) {
    if (best.word.empty()) return br;
    const double check = verify_witness(best.word, sft, pot);
    // Keep the smaller of the two evaluations so the lower bound never drifts up.
    br.lower = std::min(best.exponent, check);
    br.witness = PeriodicOrbit{best.word, 0};
    return br;
}

}  // namespace

JsrBracket bracket_search(const SearchConfig& cfg, const SftSpec& sft, const Potential& pot, std::size_t threads) {
    cfg.validate();
    require_cycle_potential(pot);
    require_matching_alphabet(sft, pot);
    const Stopwatch clock(cfg.time_budget_s);
    constexpr double kGapTarget = 1e-6;

    JsrBracket br;
    CycleCandidate best;
    const std::size_t exact = std::min(cfg.n_exact, cfg.max_depth);
    for (std::size_t n = 1; n <= exact; ++n) {
        const double up = level_max(n, sft, pot, threads) / static_cast<double>(n);
        if (up < br.upper) {
            br.upper = up;
            br.upper_level = n;
        }
        CycleCandidate c = best_cycle_of_length(n, sft, pot, threads);
        if (improves(c, best)) best = std::move(c);
        br.lower = best.exponent;
        br.depth_used = n;
        if (br.gap() <= kGapTarget) return finalize(br, best, sft, pot);
        if (clock.exhausted())
            throw BudgetExhausted("time budget exhausted during exhaustive levels", finalize(br, best, sft, pot));
    }
    if (exact >= cfg.max_depth) return finalize(br, best, sft, pot);

    const MatrixSet* ms = pot.matrix_set();
    const auto* additive = std::get_if<AdditivePotential>(&pot.kind());
    auto score_of = [&](const BeamNode& node) {
        const double v = ms ? node.product.log_norm() : node.sum;
        return v / static_cast<double>(node.word.size());
    };
    auto truncate = [&](std::vector<BeamNode>& nodes) {
        const double floor = best.exponent - cfg.beam_delta;
        std::erase_if(nodes, [&](const BeamNode& n) { return n.score < floor; });
        std::stable_sort(nodes.begin(), nodes.end(),
                         [](const BeamNode& a, const BeamNode& b) { return a.score > b.score; });
        if (nodes.size() > cfg.beam_width) nodes.resize(cfg.beam_width);
        std::sort(nodes.begin(), nodes.end(), [](const BeamNode& a, const BeamNode& b) { return a.word < b.word; });
    };

    std::vector<BeamNode> frontier;
    for_each_word(exact, sft, [&](std::span<const Symbol> w) {
        BeamNode node;
        node.word.assign(w.begin(), w.end());
        if (ms) node.product = product(w, *ms);
        else
            for (Symbol s : w) node.sum += additive->f[s];
        node.score = score_of(node);
        if (node.score >= best.exponent - cfg.beam_delta) frontier.push_back(std::move(node));
    });
    truncate(frontier);

    for (std::size_t depth = exact + 1; depth <= cfg.max_depth && !frontier.empty(); ++depth) {
        std::vector<BeamNode> next;
        for (const BeamNode& node : frontier) {
            for (Symbol s : sft.successors(node.word.back())) {
                BeamNode child;
                child.word = node.word;
                child.word.push_back(s);
                if (ms) {
                    child.product = node.product;
                    child.product.left_multiply((*ms)[s]);
                } else {
                    child.sum = node.sum + additive->f[s];
                }
                child.score = score_of(child);
                next.push_back(std::move(child));
            }
        }
        // next is in lexicographic order because frontier is sorted and successors ascend.
        std::vector<double> cycle(next.size(), -std::numeric_limits<double>::infinity());
        const double incumbent = best.exponent;
        parallel_for(next.size(), threads, [&](std::size_t i) {
            const BeamNode& c = next[i];
            if (!sft.allows(c.word.back(), c.word.front())) return;
            // rho <= norm, so only words whose norm beats the incumbent can improve it.
            if (std::isfinite(incumbent) && c.score <= incumbent + 1e-12) return;
            const double len = static_cast<double>(c.word.size());
            cycle[i] = ms ? log_spectral_radius(c.product) / len : c.sum / len;
        });
        for (std::size_t i = 0; i < next.size(); ++i) {
            if (!std::isfinite(cycle[i])) continue;
            CycleCandidate cand{cycle[i], canonical_cycle(next[i].word)};
            if (improves(cand, best)) best = std::move(cand);
        }
        br.lower = best.exponent;
        br.depth_used = depth;
        if (br.gap() <= kGapTarget) break;
        if (clock.exhausted())
            throw BudgetExhausted("time budget exhausted during beam search", finalize(br, best, sft, pot));
        truncate(next);
        frontier = std::move(next);
    }
    return finalize(br, best, sft, pot);
}

ClosingReport closing_experiment(const Potential& pot, const SftSpec& sft, const std::vector<double>& p,
                                 std::size_t length, std::uint64_t seed) {
    require_cycle_potential(pot);
    require_matching_alphabet(sft, pot);
    if (length < 100) throw std::invalid_argument("trajectory length must be >= 100");
    if (p.size() != sft.k()) throw std::invalid_argument("proposal distribution must have k entries");
    double total = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("proposal weights must be >= 0");
        total += v;
    }
    if (!(total > 0.0)) throw std::invalid_argument("proposal weights must not all vanish");

    std::mt19937_64 rng(seed);
    std::vector<double> restricted(sft.k());
    auto draw_next = [&](const std::vector<Symbol>& traj) -> Symbol {
        if (traj.empty()) return static_cast<Symbol>(sample_index(p, total, uniform01(rng)));
        std::fill(restricted.begin(), restricted.end(), 0.0);
        double mass = 0.0;
        for (Symbol s : sft.successors(traj.back())) {
            restricted[s] = p[s];
            mass += p[s];
        }
        if (!(mass > 0.0)) throw std::invalid_argument("proposal gives zero mass to every allowed successor");
        return static_cast<Symbol>(sample_index(restricted, mass, uniform01(rng)));
    };

    ClosingReport report;
    std::vector<Symbol> traj;
    traj.reserve(length + sft.k());
    const MatrixSet* ms = pot.matrix_set();
    const auto* additive = std::get_if<AdditivePotential>(&pot.kind());
    ScaledMatrix running = ms ? ScaledMatrix(Matrix::identity(ms->dim())) : ScaledMatrix();
    double sum = 0.0;
    auto append = [&] {
        const Symbol s = draw_next(traj);
        traj.push_back(s);
        double value;
        if (ms) {
            running.left_multiply((*ms)[s]);
            value = running.log_norm();
        } else {
            sum += additive->f[s];
            value = sum;
        }
        report.prefix_exponents.push_back(value / static_cast<double>(traj.size()));
    };
    for (std::size_t i = 0; i < length; ++i) append();

    for (;;) {
        try {
            report.orbit = close_word(Word(traj), sft);
            break;
        } catch (const NoClosure&) {
            if (report.extension >= sft.k()) throw;
            append();
            ++report.extension;
        }
    }
    report.trajectory = Word(std::move(traj));
    report.prefix_exponent = report.prefix_exponents.back();
    report.closed_exponent = cycle_exponent(report.orbit.word, pot);
    report.difference = report.closed_exponent - report.prefix_exponent;
    return report;
}

}  // namespace subpress
