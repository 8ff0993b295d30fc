#pragma once

// Deterministic map-reduce over the admissible words of one level.
//
// Words are partitioned by a fixed-length prefix that depends only on (n, k),
// never on the worker count. Each chunk is evaluated sequentially in
// lexicographic order and chunk results are merged by a pairwise tree whose
// shape depends only on the number of chunks, so results are bit-identical
// for any thread count.

#include "subpress/cocycle.hpp"
#include "subpress/symbolic.hpp"

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace subpress {

/// 0 means "all available cores".
[[nodiscard]] std::size_t resolve_threads(std::size_t requested);

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Exceptions are rethrown.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

/// Fixed pairwise reduction tree over items in index order.
template <class T, class Merge>
T tree_reduce(std::vector<T> items, T empty, Merge merge) {
    if (items.empty()) return empty;
    while (items.size() > 1) {
        std::vector<T> next;
        next.reserve((items.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < items.size(); i += 2) next.push_back(merge(items[i], items[i + 1]));
        if (items.size() % 2 == 1) next.push_back(std::move(items.back()));
        items = std::move(next);
    }
    return std::move(items.front());
}

/// Pairwise sum in index order.
long double pairwise_sum(std::span<const long double> values);
double pairwise_sum(std::span<const double> values);

/// One chunk of a level: admissible words sharing a prefix, in lexicographic order.
struct LevelChunk {
    std::size_t n = 0;
    std::vector<Symbol> symbols;  // size() * n symbols, row per word
    std::vector<double> values;   // s(w) per word

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] std::span<const Symbol> word(std::size_t i) const {
        return std::span<const Symbol>(symbols).subspan(i * n, n);
    }
};

/// Prefix length used to partition level n over k symbols.
[[nodiscard]] std::size_t chunk_prefix_length(std::size_t n, std::size_t k);

/// Admissible prefixes of the partition, in lexicographic order.
[[nodiscard]] std::vector<Word> level_prefixes(std::size_t n, const SftSpec& sft);

/// Depth-first traversal of all admissible words of length n extending `prefix`;
/// leaf(cursor) is called with the cursor positioned on each word, in lex order.
void traverse_words(std::size_t n, const SftSpec& sft, const Potential& pot, std::span<const Symbol> prefix,
                    const std::function<void(const PotentialCursor&)>& leaf);

/// Evaluates s on every word of a chunk (optionally keeping the words).
[[nodiscard]] LevelChunk evaluate_chunk(std::size_t n, const SftSpec& sft, const Potential& pot,
                                        std::span<const Symbol> prefix, bool keep_words);

/// Map each chunk with chunk_fn(const LevelChunk&) -> R and merge deterministically.
template <class R, class ChunkFn, class Merge>
R reduce_level(std::size_t n, const SftSpec& sft, const Potential& pot, std::size_t threads, bool keep_words,
               R empty, ChunkFn chunk_fn, Merge merge) {
    const auto prefixes = level_prefixes(n, sft);
    std::vector<R> partial(prefixes.size(), empty);
    parallel_for(prefixes.size(), threads, [&](std::size_t i) {
        const LevelChunk chunk = evaluate_chunk(n, sft, pot, prefixes[i].symbols(), keep_words);
        partial[i] = chunk_fn(chunk);
    });
    return tree_reduce(std::move(partial), empty, merge);
}

}  // namespace subpress
