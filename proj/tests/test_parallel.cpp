#include "oracles.hpp"

#include "subpress/equilibrium.hpp"
#include "subpress/parallel.hpp"
#include "subpress/periodic_opt.hpp"
#include "subpress/pressure.hpp"

#include <doctest.h>

#include <atomic>
#include <random>

using namespace subpress;

namespace {

MatrixSet some_set() {
    std::mt19937_64 rng(12);
    return MatrixSet({Matrix::from_rows(oracle::random_invertible_2x2(rng)),
                      Matrix::from_rows(oracle::random_invertible_2x2(rng))});
}

}  // namespace

TEST_CASE("parallel_for visits every index once and rethrows") {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw std::runtime_error("x"); }),
                    std::runtime_error);
    CHECK(resolve_threads(0) >= 1);
    CHECK(resolve_threads(5) == 5);
}

TEST_CASE("level prefixes depend only on (n, k) and cover the level") {
    const auto golden = SftSpec::from_matrix({{1, 1}, {1, 0}});
    for (std::size_t n : {1, 5, 14}) {
        const auto pre = level_prefixes(n, golden);
        std::size_t total = 0;
        for (const auto& p : pre) total += evaluate_chunk(n, golden, some_set(), p.symbols(), false).size();
        CHECK(total == count_words(n, golden));
    }
    CHECK(chunk_prefix_length(20, 2) == chunk_prefix_length(20, 2));
    CHECK(chunk_prefix_length(1, 2) <= 1);
}

TEST_CASE("results are bit-identical across thread counts") {
    const MatrixSet ms = some_set();
    const auto golden = SftSpec::from_matrix({{1, 1}, {1, 0}});
    for (const SftSpec& sft : {SftSpec::full(2), golden}) {
        const double p1 = pressure_upper(14, 1.7, sft, ms, 1);
        const auto b1 = beta_upper(12, sft, ms, 1);
        const auto l1 = beta_lower_periodic(12, sft, ms, 1);
        const auto g1 = gibbs_weights(10, 3.0, sft, ms, 1);
        for (std::size_t th : {2, 3, 8}) {
            CHECK(pressure_upper(14, 1.7, sft, ms, th) == p1);
            CHECK(beta_upper(12, sft, ms, th).per_level == b1.per_level);
            const auto l = beta_lower_periodic(12, sft, ms, th);
            CHECK(l.exponent == l1.exponent);
            CHECK(l.word == l1.word);
            CHECK(gibbs_weights(10, 3.0, sft, ms, th).log_probs == g1.log_probs);
        }
    }
}

TEST_CASE("pairwise sums") {
    std::vector<double> v(1001, 0.1);
    CHECK(pairwise_sum(v) == doctest::Approx(100.1).epsilon(1e-15));
    CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
    const std::vector<int> items{1, 2, 3, 4, 5};
    CHECK(tree_reduce(items, 0, [](int a, int b) { return a + b; }) == 15);
}
