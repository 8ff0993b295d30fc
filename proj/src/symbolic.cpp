#include "subpress/symbolic.hpp"

#include "subpress/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subpress {

namespace {

char symbol_char(Symbol s) {
    return s < 10 ? static_cast<char>('0' + s) : static_cast<char>('a' + (s - 10));
}

}  // namespace

Word Word::parse(std::string_view text) {
    std::vector<Symbol> out;
    out.reserve(text.size());
    for (char c : text) {
        if (c >= '0' && c <= '9') {
            out.push_back(static_cast<Symbol>(c - '0'));
        } else if (c >= 'a' && c <= 'z') {
            out.push_back(static_cast<Symbol>(10 + (c - 'a')));
        } else {
            throw std::invalid_argument("invalid symbol character '" + std::string(1, c) + "' in word");
        }
    }
    return Word(std::move(out));
}

Word Word::subword(std::size_t begin, std::size_t end) const {
    return Word(std::vector<Symbol>(symbols_.begin() + static_cast<std::ptrdiff_t>(begin),
                                    symbols_.begin() + static_cast<std::ptrdiff_t>(end)));
}

std::string Word::str() const { return to_string(symbols_); }

std::string to_string(std::span<const Symbol> symbols) {
    std::string out;
    out.reserve(symbols.size());
    for (Symbol s : symbols) out.push_back(symbol_char(s));
    return out;
}

SftSpec::SftSpec(std::size_t k, std::vector<std::uint8_t> allowed)
    : k_(k), allowed_(std::move(allowed)), successors_(k) {
    full_ = std::all_of(allowed_.begin(), allowed_.end(), [](std::uint8_t v) { return v != 0; });
    for (std::size_t i = 0; i < k_; ++i)
        for (std::size_t j = 0; j < k_; ++j)
            if (allowed_[i * k_ + j]) successors_[i].push_back(static_cast<Symbol>(j));
}

SftSpec SftSpec::full(std::size_t k) {
    if (k == 0 || k > kMaxAlphabet)
        throw std::invalid_argument("alphabet size must be in [1, 36]");
    return SftSpec(k, std::vector<std::uint8_t>(k * k, 1));
}

SftSpec SftSpec::from_matrix(const std::vector<std::vector<int>>& transitions) {
    const std::size_t k = transitions.size();
    if (k == 0 || k > kMaxAlphabet)
        throw std::invalid_argument("alphabet size must be in [1, 36]");
    std::vector<std::uint8_t> allowed(k * k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        if (transitions[i].size() != k)
            throw std::invalid_argument("transition matrix must be square");
        for (std::size_t j = 0; j < k; ++j) {
            const int v = transitions[i][j];
            if (v != 0 && v != 1)
                throw std::invalid_argument("transition entries must be 0 or 1");
            allowed[i * k + j] = static_cast<std::uint8_t>(v);
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        bool row = false;
        bool col = false;
        for (std::size_t j = 0; j < k; ++j) {
            row = row || allowed[i * k + j];
            col = col || allowed[j * k + i];
        }
        if (!row || !col)
            throw std::invalid_argument("symbol " + std::to_string(i) +
                                        " is dead (empty transition row or column)");
    }
    return SftSpec(k, std::move(allowed));
}

bool SftSpec::is_irreducible() const {
    for (std::size_t start = 0; start < k_; ++start) {
        std::vector<std::uint8_t> seen(k_, 0);
        std::vector<Symbol> stack(successors_[start].begin(), successors_[start].end());
        while (!stack.empty()) {
            const Symbol s = stack.back();
            stack.pop_back();
            if (seen[s]) continue;
            seen[s] = 1;
            for (Symbol next : successors_[s])
                if (!seen[next]) stack.push_back(next);
        }
        if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return false;
    }
    return true;
}

std::vector<std::vector<int>> SftSpec::matrix() const {
    std::vector<std::vector<int>> out(k_, std::vector<int>(k_, 0));
    for (std::size_t i = 0; i < k_; ++i)
        for (std::size_t j = 0; j < k_; ++j) out[i][j] = allowed_[i * k_ + j];
    return out;
}

bool is_admissible(std::span<const Symbol> w, const SftSpec& sft) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] >= sft.k()) return false;
        if (i + 1 < w.size() && w[i + 1] < sft.k() && !sft.allows(w[i], w[i + 1])) return false;
    }
    return true;
}

bool is_cyclically_admissible(std::span<const Symbol> w, const SftSpec& sft) {
    if (w.empty() || !is_admissible(w, sft)) return false;
    return sft.allows(w.back(), w.front());
}

std::uint64_t count_words(std::size_t n, const SftSpec& sft) {
    if (n == 0) return 0;
    const std::size_t k = sft.k();
    std::vector<std::uint64_t> ending(k, 1);
    for (std::size_t step = 1; step < n; ++step) {
        std::vector<std::uint64_t> next(k, 0);
        for (std::size_t i = 0; i < k; ++i)
            for (Symbol j : sft.successors(static_cast<Symbol>(i))) next[j] += ending[i];
        ending = std::move(next);
    }
    std::uint64_t total = 0;
    for (auto c : ending) total += c;
    return total;
}

WordStream::WordStream(std::size_t n, const SftSpec& sft) : WordStream(n, sft, {}) {}

WordStream::WordStream(std::size_t n, const SftSpec& sft, std::span<const Symbol> prefix)
    : sft_(&sft), n_(n), fixed_(prefix.size()), word_(prefix.begin(), prefix.end()) {
    if (n == 0) throw std::invalid_argument("word length must be >= 1");
    if (prefix.size() > n) throw std::invalid_argument("prefix longer than word length");
    if (!is_admissible(prefix, sft)) throw std::invalid_argument("prefix is not admissible");
    word_.resize(n);
}

// Fills positions depth..n-1 with the lexicographically smallest admissible continuation.
bool WordStream::descend_from(std::size_t depth) {
    for (std::size_t i = depth; i < n_; ++i) {
        if (i == 0) {
            word_[0] = 0;
        } else {
            const auto succ = sft_->successors(word_[i - 1]);
            word_[i] = succ.front();
        }
    }
    return true;
}

bool WordStream::next() {
    if (done_) return false;
    if (!started_) {
        started_ = true;
        return descend_from(fixed_);
    }
    // Find the deepest free position that can be bumped to a larger successor.
    for (std::size_t pos = n_; pos-- > fixed_;) {
        if (pos == 0) {
            if (static_cast<std::size_t>(word_[0]) + 1 < sft_->k()) {
                ++word_[0];
                return descend_from(1);
            }
            continue;
        }
        const auto succ = sft_->successors(word_[pos - 1]);
        auto it = std::upper_bound(succ.begin(), succ.end(), word_[pos]);
        if (it != succ.end()) {
            word_[pos] = *it;
            return descend_from(pos + 1);
        }
    }
    done_ = true;
    return false;
}

void for_each_word(std::size_t n, const SftSpec& sft,
                   const std::function<void(std::span<const Symbol>)>& fn) {
    WordStream stream(n, sft);
    while (stream.next()) fn(stream.current());
}

PeriodicOrbit close_word(const Word& w, const SftSpec& sft) {
    const std::size_t n = w.size();
    if (n == 0) throw std::invalid_argument("cannot close an empty word");
    for (std::size_t i = 0; i < n; ++i)
        if (w[i] >= sft.k()) throw std::invalid_argument("symbol out of alphabet");

    // run_end[i]: one past the last index reachable from i through allowed transitions.
    std::vector<std::size_t> run_end(n);
    run_end[n - 1] = n;
    for (std::size_t i = n - 1; i-- > 0;)
        run_end[i] = sft.allows(w[i], w[i + 1]) ? run_end[i + 1] : i + 1;

    for (std::size_t len = n; len >= 1; --len) {
        for (std::size_t start = 0; start + len <= n; ++start) {
            if (run_end[start] < start + len) continue;
            if (sft.allows(w[start + len - 1], w[start]))
                return PeriodicOrbit{w.subword(start, start + len), start};
        }
    }
    throw NoClosure("no cyclically admissible subword in '" + w.str() + "'; extend the trajectory");
}

double topological_entropy(const SftSpec& sft) {
    // Gelfand limit in the entry-sum norm, which is a matrix norm on nonnegative matrices.
    const std::size_t k = sft.k();
    std::vector<double> m(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) m[i * k + j] = sft.allows(static_cast<Symbol>(i), static_cast<Symbol>(j));

    double per_unit_log = 0.0;  // log of accumulated scale, divided by the current power
    double power = 1.0;
    auto total = [&] {
        double s = 0.0;
        for (double v : m) s += v;
        return s;
    };
    double estimate = std::log(total());
    for (int j = 1; j <= 60; ++j) {
        std::vector<double> sq(k * k, 0.0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t l = 0; l < k; ++l) {
                const double a = m[i * k + l];
                if (a == 0.0) continue;
                for (std::size_t c = 0; c < k; ++c) sq[i * k + c] += a * m[l * k + c];
            }
        const double scale = *std::max_element(sq.begin(), sq.end());
        for (double& v : sq) v /= scale;
        m = std::move(sq);
        power *= 2.0;
        per_unit_log = per_unit_log + std::log(scale) / power;
        const double next = per_unit_log + std::log(total()) / power;
        const bool settled = std::abs(next - estimate) < 1e-15;
        estimate = next;
        if (settled) break;
    }
    return estimate;
}

bool is_primitive_necklace(std::span<const Symbol> w) {
    const std::size_t n = w.size();
    for (std::size_t r = 1; r < n; ++r) {
        // Compare rotation starting at r against w.
        for (std::size_t i = 0; i < n; ++i) {
            const Symbol a = w[(r + i) % n];
            const Symbol b = w[i];
            if (a < b) return false;
            if (a > b) break;
            if (i + 1 == n) return false;  // rotation equals w: proper power
        }
    }
    return true;
}

}  // namespace subpress
