#pragma once

// Symbolic layer: subshifts of finite type, words over a finite alphabet,
// cylinder enumeration and exact periodic closing.
//
// Pressure on a compact metric space is defined through (n, eps)-separated
// sets. On a shift space with metric d(x, y) = 2^{-min{|i| : x_i != y_i}},
// any eps < 1 makes a maximal (n, eps)-separated set consist of exactly one
// point per admissible n-cylinder, so every sum over separated sets in this
// library is an exact sum over admissible words of length n.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace subpress {

using Symbol = std::uint8_t;

inline constexpr std::size_t kMaxAlphabet = 36;

/// A finite word over {0, ..., k-1}. Symbols render as 0-9 then a-z.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}
    Word(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}

    /// Parse "0110" style strings; throws std::invalid_argument on bad characters.
    static Word parse(std::string_view text);

    [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }
    [[nodiscard]] bool empty() const noexcept { return symbols_.empty(); }
    [[nodiscard]] Symbol operator[](std::size_t i) const { return symbols_[i]; }
    [[nodiscard]] std::span<const Symbol> symbols() const noexcept { return symbols_; }
    [[nodiscard]] Word subword(std::size_t begin, std::size_t end) const;
    [[nodiscard]] std::string str() const;

    void push_back(Symbol s) { symbols_.push_back(s); }

    auto operator<=>(const Word&) const = default;
    bool operator==(const Word&) const = default;

private:
    std::vector<Symbol> symbols_;
};

std::string to_string(std::span<const Symbol> symbols);

/// Alphabet size plus a 0/1 transition relation; (i, j) = 1 lets j follow i.
class SftSpec {
public:
    /// Full shift on k symbols.
    static SftSpec full(std::size_t k);
    /// Validates the dead-symbol invariant; throws std::invalid_argument.
    static SftSpec from_matrix(const std::vector<std::vector<int>>& transitions);

    [[nodiscard]] std::size_t k() const noexcept { return k_; }
    [[nodiscard]] bool allows(Symbol from, Symbol to) const noexcept {
        return allowed_[static_cast<std::size_t>(from) * k_ + to] != 0;
    }
    [[nodiscard]] bool is_full() const noexcept { return full_; }
    /// Every (i, j) reachable through some path of allowed transitions.
    [[nodiscard]] bool is_irreducible() const;
    [[nodiscard]] std::vector<std::vector<int>> matrix() const;
    /// Symbols that may follow `from`, ascending.
    [[nodiscard]] std::span<const Symbol> successors(Symbol from) const noexcept {
        return successors_[from];
    }

    bool operator==(const SftSpec& other) const {
        return k_ == other.k_ && allowed_ == other.allowed_;
    }

private:
    SftSpec(std::size_t k, std::vector<std::uint8_t> allowed);

    std::size_t k_ = 0;
    std::vector<std::uint8_t> allowed_;
    std::vector<std::vector<Symbol>> successors_;
    bool full_ = false;
};

/// A cyclically admissible word; the induced point p has T^period(p) = p.
struct PeriodicOrbit {
    Word word;
    /// Index in the source word where the retained subword starts (0 when not derived from one).
    std::size_t start = 0;

    [[nodiscard]] std::size_t period() const noexcept { return word.size(); }
};

[[nodiscard]] bool is_admissible(std::span<const Symbol> w, const SftSpec& sft);
[[nodiscard]] bool is_cyclically_admissible(std::span<const Symbol> w, const SftSpec& sft);
inline bool is_admissible(const Word& w, const SftSpec& sft) { return is_admissible(w.symbols(), sft); }
inline bool is_cyclically_admissible(const Word& w, const SftSpec& sft) {
    return is_cyclically_admissible(w.symbols(), sft);
}

/// Number of admissible words of length n: the entry sum of transitions^(n-1).
[[nodiscard]] std::uint64_t count_words(std::size_t n, const SftSpec& sft);

/// Streams admissible words of length n in lexicographic order, one at a time.
class WordStream {
public:
    WordStream(std::size_t n, const SftSpec& sft);
    /// Same stream restricted to words extending `prefix` (which must be admissible).
    WordStream(std::size_t n, const SftSpec& sft, std::span<const Symbol> prefix);

    /// Advances to the next word; false once exhausted.
    bool next();
    [[nodiscard]] std::span<const Symbol> current() const noexcept { return word_; }

private:
    bool descend_from(std::size_t depth);

    const SftSpec* sft_;
    std::size_t n_;
    std::size_t fixed_;
    std::vector<Symbol> word_;
    bool started_ = false;
    bool done_ = false;
};

/// Calls fn(word) for every admissible word of length n in lexicographic order.
void for_each_word(std::size_t n, const SftSpec& sft,
                   const std::function<void(std::span<const Symbol>)>& fn);

/// Longest cyclically admissible subword (internal and wrap-around transitions
/// allowed), ties broken by earliest start. Throws NoClosure if none exists.
[[nodiscard]] PeriodicOrbit close_word(const Word& w, const SftSpec& sft);

/// Log of the spectral radius of the transition matrix, in nats.
[[nodiscard]] double topological_entropy(const SftSpec& sft);

/// True when w is the lexicographically least of its rotations and is not a proper power.
[[nodiscard]] bool is_primitive_necklace(std::span<const Symbol> w);

}  // namespace subpress
