#include "oracles.hpp"

#include "subpress/equilibrium.hpp"
#include "subpress/periodic_opt.hpp"
#include "subpress/pressure.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace subpress;

namespace {

const double kLn2 = std::numbers::ln2;

MatrixSet shear() { return MatrixSet({Matrix::from_rows({{1, 1}, {0, 1}}), Matrix::from_rows({{1, 0}, {1, 1}})}); }
MatrixSet diag_pair() {
    return MatrixSet({Matrix::from_rows({{2, 0}, {0, 1}}), Matrix::from_rows({{1, 0}, {0, 3}})});
}

std::vector<MatrixSet> random_sets(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::vector<MatrixSet> out;
    for (std::size_t i = 0; i < count; ++i)
        out.emplace_back(std::vector<Matrix>{Matrix::from_rows(oracle::random_invertible_2x2(rng)),
                                             Matrix::from_rows(oracle::random_invertible_2x2(rng))});
    return out;
}

std::vector<Word> words(std::initializer_list<const char*> ws) {
    std::vector<Word> out;
    for (const char* w : ws) out.push_back(Word::parse(w));
    return out;
}

}  // namespace

TEST_CASE("gibbs_weights examples") {
    const auto g0 = gibbs_weights(2, 0.0, SftSpec::full(2), shear());
    REQUIRE(g0.size() == 4);
    for (double p : g0.probabilities) CHECK(p == doctest::Approx(0.25));

    const Potential add(AdditivePotential{{0.0, kLn2}});
    const auto g1 = gibbs_weights(1, 1.0, SftSpec::full(2), add);
    CHECK(g1.probability(Word::parse("0")) == doctest::Approx(1.0 / 3));
    CHECK(g1.probability(Word::parse("1")) == doctest::Approx(2.0 / 3));
    CHECK(g1.probability(Word::parse("2")) == 0.0);

    const auto g200 = gibbs_weights(2, 200.0, SftSpec::full(2), shear());
    CHECK(g200.mass(words({"01", "10"})) >= 0.99);
}

TEST_CASE("lyapunov_of and entropy_of examples") {
    const MatrixSet ids({Matrix::identity(2), Matrix::identity(2)});
    for (double t : {0.0, 3.0}) CHECK(lyapunov_of(gibbs_weights(3, t, SftSpec::full(2), ids)) == doctest::Approx(0.0));

    const Potential add(AdditivePotential{{0.0, kLn2}});
    const auto g = gibbs_weights(1, 1.0, SftSpec::full(2), add);
    CHECK(std::abs(lyapunov_of(g) - 2.0 / 3 * kLn2) < 1e-14);
    CHECK(std::abs(entropy_of(g) - (std::log(3.0) - 2.0 / 3 * kLn2)) < 1e-14);

    const double a = std::log(1 + std::sqrt(2.0)), b = std::log((3 + std::sqrt(5.0)) / 2);
    CHECK(std::abs(lyapunov_of(gibbs_weights(2, 0.0, SftSpec::full(2), shear())) - (2 * a + 2 * b) / 8) < 1e-14);

    for (std::size_t n = 1; n <= 6; ++n) CHECK(std::abs(entropy_of(gibbs_weights(n, 0.0, SftSpec::full(2), shear())) - kLn2) < 1e-14);
    CHECK(std::abs(entropy_of(gibbs_weights(2, 200.0, SftSpec::full(2), shear())) - kLn2 / 2) < 0.02);
}

TEST_CASE("finite-level variational identity and derivative identities") {
    for (const auto& ms : random_sets(101, 4)) {
        for (std::size_t n = 1; n <= 6; ++n) {
            for (double t : {0.0, 0.5, 2.0, 10.0}) {
                const auto g = gibbs_weights(n, t, SftSpec::full(2), ms);
                const double p = pressure_upper(n, t, SftSpec::full(2), ms);
                CHECK(std::abs(entropy_of(g) + t * lyapunov_of(g) - p) < 1e-10);
                const double h = 1e-4;
                const double fd = (pressure_upper(n, t + h, SftSpec::full(2), ms) - pressure_upper(n, t - h, SftSpec::full(2), ms)) / (2 * h);
                CHECK(std::abs(fd - lyapunov_of(g)) < 1e-6);
            }
        }
    }
}

TEST_CASE("third derivative matches finite differences of chi") {
    const Potential pot(random_sets(5, 1).front());
    const double t = 1.0, h = 1e-3;
    auto chi = [&](double s) { return lyapunov_of(gibbs_weights(5, s, SftSpec::full(2), pot)); };
    const double second = (chi(t + h) - 2 * chi(t) + chi(t - h)) / (h * h);
    CHECK(third_derivative_of(gibbs_weights(5, t, SftSpec::full(2), pot)) == doctest::Approx(second).epsilon(1e-4));
}

TEST_CASE("ground_state examples") {
    const MatrixSet ids({Matrix::identity(2), Matrix::identity(2)});
    CHECK(ground_state(3, SftSpec::full(2), ids).size() == 8);

    const auto d = ground_state(3, SftSpec::full(2), diag_pair());
    REQUIRE(d.size() == 1);
    CHECK(d.words.front().str() == "111");
    CHECK(d.probabilities.front() == 1.0);

    const auto s = ground_state(2, SftSpec::full(2), shear());
    REQUIRE(s.size() == 2);
    CHECK(s.words[0].str() == "01");
    CHECK(s.words[1].str() == "10");
    CHECK(std::isinf(s.t));
}

TEST_CASE("zero_temp_sweep: additive closed form") {
    const Potential add(AdditivePotential{{0.0, kLn2}});
    std::vector<double> grid{0.0, 1.0, 2.0, 5.0, 10.0, 50.0};
    const auto z = zero_temp_sweep(1, grid, SftSpec::full(2), add);
    for (const auto& r : z.rows) {
        const double closed = std::pow(2.0, r.t) * kLn2 / (1 + std::pow(2.0, r.t));
        CHECK(std::abs(r.chi - closed) < 1e-12);
    }
    CHECK(z.rows[4].chi == doctest::Approx(0.692471).epsilon(1e-6));
    CHECK(z.rows.back().entropy < 1e-12);
    CHECK(z.beta_plus == doctest::Approx(kLn2));
    CHECK(z.gap_bound_holds);
}

TEST_CASE("zero_temp_sweep: identity set and shear pair") {
    const auto grid = default_t_grid();
    const MatrixSet ids({Matrix::identity(2), Matrix::identity(2)});
    const auto zi = zero_temp_sweep(3, grid, SftSpec::full(2), ids);
    for (const auto& r : zi.rows) {
        CHECK(std::abs(r.chi) < 1e-14);
        CHECK(std::abs(r.entropy - kLn2) < 1e-14);
    }

    std::vector<double> g2{0.0, 1.0, 10.0, 50.0, 100.0, 200.0};
    const auto z = zero_temp_sweep(2, g2, SftSpec::full(2), shear());
    CHECK(std::abs(z.rows.back().chi - std::log(std::numbers::phi)) <= 0.01);
    CHECK(std::abs(z.ground_entropy - kLn2 / 2) < 1e-12);
    CHECK(z.argmax.size() == 2);
    CHECK(z.gap_bound_holds);
    CHECK(z.max_chi_decrease <= 1e-9);
    CHECK(z.max_entropy_increase <= 1e-9);
    CHECK_THROWS_AS((void)zero_temp_sweep(2, std::vector<double>{1.0, 2.0}, SftSpec::full(2), shear()), std::invalid_argument);
}

TEST_CASE("monotonicity on random sets and proper SFTs") {
    const auto grid = default_t_grid();
    const SftSpec golden = SftSpec::from_matrix({{1, 1}, {1, 0}});
    for (const auto& ms : random_sets(303, 4)) {
        for (const SftSpec& sft : {SftSpec::full(2), golden}) {
            const auto z = zero_temp_sweep(6, grid, sft, ms);
            CHECK(z.max_chi_decrease <= 1e-9);
            CHECK(z.max_entropy_increase <= 1e-9);
            CHECK(z.max_chi_over_beta <= 1e-9);
            CHECK(z.gap_bound_holds);
        }
    }
}

TEST_CASE("Gibbs weights converge to the ground state in total variation") {
    for (const auto& ms : random_sets(404, 5)) {
        const std::size_t n = 4;
        const auto gs = ground_state(n, SftSpec::full(2), ms);
        const auto g0 = gibbs_weights(n, 0.0, SftSpec::full(2), ms);
        // Separation between the best and second-best distinct s(w)/n values.
        std::vector<double> v;
        for (double s : g0.log_norms) v.push_back(s / n);
        std::sort(v.rbegin(), v.rend());
        double gap = 0.0;
        for (double x : v)
            if (v.front() - x > 1e-9) {
                gap = v.front() - x;
                break;
            }
        if (gap == 0.0) continue;
        const double t = 200.0 * n / gap;
        CHECK(total_variation(gibbs_weights(n, t, SftSpec::full(2), ms), gs) <= 0.01);
    }
}
