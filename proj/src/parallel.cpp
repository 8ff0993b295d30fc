#include "subpress/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace subpress {

std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(resolve_threads(threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

namespace {

template <class T>
T pairwise_sum_impl(std::span<const T> v) {
    if (v.size() <= 8) {
        T s = 0;
        for (T x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum_impl(v.first(half)) + pairwise_sum_impl(v.subspan(half));
}

}  // namespace

long double pairwise_sum(std::span<const long double> values) { return pairwise_sum_impl(values); }
double pairwise_sum(std::span<const double> values) { return pairwise_sum_impl(values); }

std::size_t chunk_prefix_length(std::size_t n, std::size_t k) {
    // Aim for at least 256 chunks once the level is large enough.
    std::size_t p = 0;
    std::size_t chunks = 1;
    while (p < n && chunks < 256) {
        chunks *= std::max<std::size_t>(k, 2);
        ++p;
    }
    return p;
}

std::vector<Word> level_prefixes(std::size_t n, const SftSpec& sft) {
    const std::size_t p = chunk_prefix_length(n, sft.k());
    std::vector<Word> out;
    if (p == 0) {
        out.emplace_back();
        return out;
    }
    for_each_word(p, sft, [&](std::span<const Symbol> w) { out.emplace_back(std::vector<Symbol>(w.begin(), w.end())); });
    return out;
}

void traverse_words(std::size_t n, const SftSpec& sft, const Potential& pot, std::span<const Symbol> prefix,
                    const std::function<void(const PotentialCursor&)>& leaf) {
    PotentialCursor cursor(pot);
    for (Symbol s : prefix) cursor.push(s);
    if (cursor.depth() == n) {
        leaf(cursor);
        return;
    }
    // Explicit stack of successor positions; lexicographic order.
    std::vector<std::size_t> next_index;
    auto candidates = [&](std::size_t depth) -> std::span<const Symbol> {
        static thread_local std::vector<Symbol> all;
        if (depth == 0) {
            all.resize(sft.k());
            for (std::size_t i = 0; i < sft.k(); ++i) all[i] = static_cast<Symbol>(i);
            return all;
        }
        return sft.successors(cursor.word()[depth - 1]);
    };
    const std::size_t base = cursor.depth();
    next_index.push_back(0);
    while (!next_index.empty()) {
        const std::size_t depth = base + next_index.size() - 1;
        const auto cand = candidates(depth);
        std::size_t& idx = next_index.back();
        if (idx >= cand.size()) {
            next_index.pop_back();
            if (!next_index.empty()) cursor.pop();
            continue;
        }
        cursor.push(cand[idx]);
        ++idx;
        if (cursor.depth() == n) {
            leaf(cursor);
            cursor.pop();
        } else {
            next_index.push_back(0);
        }
    }
}

LevelChunk evaluate_chunk(std::size_t n, const SftSpec& sft, const Potential& pot, std::span<const Symbol> prefix,
                          bool keep_words) {
    LevelChunk chunk;
    chunk.n = keep_words ? n : 0;
    traverse_words(n, sft, pot, prefix, [&](const PotentialCursor& c) {
        chunk.values.push_back(c.value());
        if (keep_words) chunk.symbols.insert(chunk.symbols.end(), c.word().begin(), c.word().end());
    });
    return chunk;
}

}  // namespace subpress
