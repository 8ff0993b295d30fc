#include "oracles.hpp"

#include "subpress/periodic_opt.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

using namespace subpress;

namespace {

MatrixSet shear() { return MatrixSet({Matrix::from_rows({{1, 1}, {0, 1}}), Matrix::from_rows({{1, 0}, {1, 1}})}); }
MatrixSet diag_pair() {
    return MatrixSet({Matrix::from_rows({{2, 0}, {0, 1}}), Matrix::from_rows({{1, 0}, {0, 3}})});
}
Matrix rotation(double a) { return Matrix::from_rows({{std::cos(a), -std::sin(a)}, {std::sin(a), std::cos(a)}}); }

std::vector<MatrixSet> random_sets(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::vector<MatrixSet> out;
    for (std::size_t i = 0; i < count; ++i)
        out.emplace_back(std::vector<Matrix>{Matrix::from_rows(oracle::random_invertible_2x2(rng)),
                                             Matrix::from_rows(oracle::random_invertible_2x2(rng))});
    return out;
}

const double kLogPhi = std::log(std::numbers::phi);

}  // namespace

TEST_CASE("beta_upper and beta_lower_periodic examples") {
    const MatrixSet ids({Matrix::identity(2), Matrix::identity(2)});
    CHECK(std::abs(beta_upper(1, SftSpec::full(2), ids).value) < 1e-14);
    CHECK(std::abs(beta_lower_periodic(3, SftSpec::full(2), ids).exponent) < 1e-14);

    const auto bu = beta_upper(2, SftSpec::full(2), shear());
    CHECK(std::abs(bu.value - kLogPhi) < 1e-12);
    CHECK(bu.level == 1);  // ||A_0|| = phi already attains it
    const auto bl = beta_lower_periodic(2, SftSpec::full(2), shear());
    CHECK(std::abs(bl.exponent - kLogPhi) < 1e-12);
    CHECK(bl.word.str() == "01");

    CHECK(std::abs(beta_upper(1, SftSpec::full(2), diag_pair()).value - std::log(3.0)) < 1e-14);

    const MatrixSet rot({rotation(0.3), rotation(1.1)});
    CHECK(std::abs(beta_lower_periodic(6, SftSpec::full(2), rot).exponent) < 1e-12);
}

TEST_CASE("bracket soundness across levels") {
    const SftSpec golden = SftSpec::from_matrix({{1, 1}, {1, 0}});
    for (const auto& ms : random_sets(77, 5)) {
        for (const SftSpec& sft : {SftSpec::full(2), golden}) {
            const auto up = beta_upper(12, sft, ms);
            double prev_lower = -INFINITY;
            for (std::size_t n = 1; n <= 12; ++n) {
                const auto lo = beta_lower_periodic(n, sft, ms);
                CHECK(lo.exponent >= prev_lower);  // non-decreasing
                prev_lower = lo.exponent;
                for (double u : up.per_level) CHECK(lo.exponent <= u + 1e-9);
                CHECK(std::abs(verify_witness(lo.word, sft, ms) - lo.exponent) < 1e-10);
            }
            // Upper along doubling levels is non-increasing (Fekete on the per-level maxima).
            const auto& pl = up.per_level;
            CHECK(pl[1] <= pl[0] + 1e-12);
            CHECK(pl[3] <= pl[1] + 1e-12);
            CHECK(pl[7] <= pl[3] + 1e-12);
        }
    }
}

TEST_CASE("best_cycle_of_length against brute force over primitive cyclic words") {
    auto primitive = [](const std::string& w) {
        for (std::size_t p = 1; p < w.size(); ++p)
            if (w.size() % p == 0 && w.substr(p) + w.substr(0, p) == w) return false;
        return true;
    };
    for (const auto& ms : random_sets(88, 4)) {
        std::vector<oracle::Rows> rows;
        for (const auto& m : ms.matrices()) rows.push_back(m.rows());
        for (std::size_t n = 1; n <= 8; ++n) {
            long double best = -INFINITY;
            for (const auto& w : oracle::all_words(n, oracle::full(2)))
                if (primitive(w)) best = std::max(best, std::log(oracle::rho_2x2(oracle::naive_product(w, rows))) / n);
            CHECK(std::abs(best_cycle_of_length(n, SftSpec::full(2), ms).exponent - static_cast<double>(best)) < 1e-10);
        }
    }
}

TEST_CASE("bracket_search examples") {
    const auto cfg = SearchConfig::defaults_for(2);
    const auto s = bracket_search(cfg, SftSpec::full(2), shear());
    CHECK(s.gap() <= 1e-9);
    CHECK(s.depth_used == 2);
    CHECK(s.witness.word.str() == "01");
    CHECK(std::abs(s.lower - kLogPhi) < 1e-10);

    const auto d = bracket_search(cfg, SftSpec::full(2), diag_pair());
    CHECK(std::abs(d.lower - std::log(3.0)) < 1e-12);
    CHECK(std::abs(d.upper - std::log(3.0)) < 1e-12);
    CHECK(d.depth_used == 1);

    // 2R(theta) with theta an irrational multiple of pi: rho = 2 on the fixed point.
    const MatrixSet sr({rotation(std::numbers::sqrt2 * std::numbers::pi) * Matrix::from_rows({{2, 0}, {0, 2}}),
                        Matrix::identity(2)});
    const auto r = bracket_search(cfg, SftSpec::full(2), sr);
    CHECK(r.gap() <= 1e-9);
    CHECK(r.depth_used == 1);
    CHECK(std::abs(r.upper - std::log(2.0)) < 1e-12);
}

TEST_CASE("bracket_search: beam phase raises only the lower bound") {
    SearchConfig cfg = SearchConfig::defaults_for(2);
    cfg.n_exact = 6;
    cfg.max_depth = 16;
    for (const auto& ms : random_sets(99, 4)) {
        const auto b = bracket_search(cfg, SftSpec::full(2), ms);
        CHECK(b.lower <= b.upper + 1e-9);
        CHECK(b.upper == beta_upper(6, SftSpec::full(2), ms).value);
        CHECK(b.lower >= beta_lower_periodic(6, SftSpec::full(2), ms).exponent);
        CHECK(std::abs(verify_witness(b.witness.word, SftSpec::full(2), ms) - b.lower) < 1e-10);
        CHECK(b.depth_used <= cfg.max_depth);
    }
}

TEST_CASE("scale equivariance of the bracket and the closing experiment") {
    SearchConfig cfg = SearchConfig::defaults_for(2);
    cfg.n_exact = 8;
    cfg.max_depth = 12;
    for (const auto& ms : random_sets(111, 3)) {
        for (double c : {0.25, 5.0}) {
            const auto a = bracket_search(cfg, SftSpec::full(2), ms);
            const auto b = bracket_search(cfg, SftSpec::full(2), ms.scaled(c));
            CHECK(std::abs(b.lower - a.lower - std::log(c)) < 1e-10);
            CHECK(std::abs(b.upper - a.upper - std::log(c)) < 1e-10);
            CHECK(a.witness.word == b.witness.word);

            const auto ca = closing_experiment(ms, SftSpec::full(2), {0.5, 0.5}, 500, 3);
            const auto cb = closing_experiment(ms.scaled(c), SftSpec::full(2), {0.5, 0.5}, 500, 3);
            CHECK(std::abs(cb.prefix_exponent - ca.prefix_exponent - std::log(c)) < 1e-10);
            CHECK(std::abs(cb.closed_exponent - ca.closed_exponent - std::log(c)) < 1e-10);
        }
    }
}

TEST_CASE("SearchConfig validation and defaults") {
    CHECK(SearchConfig::defaults_for(2).n_exact == 12);
    CHECK(SearchConfig::defaults_for(4).n_exact == 6);
    CHECK(SearchConfig::defaults_for(3).n_exact == 7);
    SearchConfig bad;
    bad.n_exact = 70;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = SearchConfig{};
    bad.beam_delta = -1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("budget exhaustion keeps a sound bracket") {
    SearchConfig cfg = SearchConfig::defaults_for(2);
    cfg.time_budget_s = 1e-9;
    const auto ms = random_sets(5, 1).front();
    try {
        (void)bracket_search(cfg, SftSpec::full(2), ms);
        FAIL("expected BudgetExhausted");
    } catch (const BudgetExhausted& e) {
        CHECK(e.bracket.lower <= e.bracket.upper + 1e-9);
    }
}

TEST_CASE("closing_experiment examples") {
    const MatrixSet ids({Matrix::identity(2), Matrix::identity(2)});
    const auto a = closing_experiment(ids, SftSpec::full(2), {0.5, 0.5}, 200, 1);
    CHECK(std::abs(a.prefix_exponent) < 1e-14);
    CHECK(std::abs(a.closed_exponent) < 1e-14);

    const MatrixSet single({Matrix::from_rows({{2, 0}, {0, 1}})});
    const auto b = closing_experiment(single, SftSpec::full(1), {1.0}, 300, 1);
    for (double e : b.prefix_exponents) CHECK(std::abs(e - std::log(2.0)) < 1e-14);
    CHECK(std::abs(b.closed_exponent - std::log(2.0)) < 1e-14);

    const auto golden = SftSpec::from_matrix({{1, 1}, {1, 0}});
    const auto c = closing_experiment(shear(), golden, {0.5, 0.5}, 10000, 7);
    CHECK(std::abs(c.difference) <= 0.05);
    CHECK(is_admissible(c.trajectory, golden));
    CHECK(is_cyclically_admissible(c.orbit.word, golden));
    const auto c2 = closing_experiment(shear(), golden, {0.5, 0.5}, 10000, 7);
    CHECK(c2.trajectory == c.trajectory);
    CHECK(c2.closed_exponent == c.closed_exponent);
    CHECK_THROWS_AS((void)closing_experiment(shear(), golden, {0.5, 0.5}, 50, 7), std::invalid_argument);
}
