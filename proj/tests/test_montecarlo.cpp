#include "oracles.hpp"

#include "subpress/errors.hpp"
#include "subpress/montecarlo.hpp"
#include "subpress/periodic_opt.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace subpress;

namespace {

MatrixSet shear() { return MatrixSet({Matrix::from_rows({{1, 1}, {0, 1}}), Matrix::from_rows({{1, 0}, {1, 1}})}); }
Matrix rotation(double a) { return Matrix::from_rows({{std::cos(a), -std::sin(a)}, {std::sin(a), std::cos(a)}}); }

}  // namespace

TEST_CASE("furstenberg_estimate examples") {
    const MatrixSet single({Matrix::from_rows({{2, 0}, {0, 1}})});
    const auto s = furstenberg_estimate(single, SftSpec::full(1), BernoulliSpec::uniform(1), 200, 100, 1);
    CHECK(std::abs(s.mean - std::log(2.0)) < 1e-13);
    CHECK(s.half_width < 1e-13);

    const MatrixSet rot({rotation(0.4), rotation(2.0)});
    const auto r = furstenberg_estimate(rot, SftSpec::full(2), BernoulliSpec::uniform(2), 1000, 200, 5);
    CHECK(std::abs(r.mean) <= 1e-9);
}

TEST_CASE("diagonal oracle on random diagonal pairs") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.2, 4.0), pu(0.1, 0.9);
    for (int rep = 0; rep < 20; ++rep) {
        const double a0 = u(rng), b0 = u(rng), a1 = u(rng), b1 = u(rng), p = pu(rng);
        const MatrixSet ms({Matrix::from_rows({{a0, 0}, {0, b0}}), Matrix::from_rows({{a1, 0}, {0, b1}})});
        const double closed = std::max(p * std::log(a0) + (1 - p) * std::log(a1), p * std::log(b0) + (1 - p) * std::log(b1));
        const auto e = furstenberg_estimate(ms, SftSpec::full(2), BernoulliSpec({p, 1 - p}), 1000, 200, 100 + rep);
        // The finite-n bias of the max over two random walks is O(1/sqrt(n)) when the drifts nearly tie.
        CHECK(std::abs(e.mean - closed) <= 3 * e.half_width + 2.0 / std::sqrt(1000.0));
    }
}

TEST_CASE("determinism across threads and reruns") {
    const auto a = furstenberg_estimate(shear(), SftSpec::full(2), BernoulliSpec::uniform(2), 200, 300, 9, 1);
    const auto b = furstenberg_estimate(shear(), SftSpec::full(2), BernoulliSpec::uniform(2), 200, 300, 9, 4);
    const auto c = furstenberg_estimate(shear(), SftSpec::full(2), BernoulliSpec::uniform(2), 200, 300, 9, 1);
    CHECK(a.mean == b.mean);
    CHECK(a.half_width == b.half_width);
    CHECK(a.mean == c.mean);
}

TEST_CASE("estimates stay below the exhaustive norm bound") {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 5; ++rep) {
        const MatrixSet ms({Matrix::from_rows(oracle::random_invertible_2x2(rng)),
                            Matrix::from_rows(oracle::random_invertible_2x2(rng))});
        const auto e = furstenberg_estimate(ms, SftSpec::full(2), BernoulliSpec::uniform(2), 200, 200, rep);
        CHECK(e.mean <= beta_upper(10, SftSpec::full(2), ms).value + 3 * e.half_width);
    }
}

TEST_CASE("continuity probe") {
    const auto bp = BernoulliSpec::uniform(2);
    const auto same = continuity_probe(shear(), shear(), SftSpec::full(2), bp, bp, 200, 200, 4);
    CHECK(same.difference == 0.0);

    const auto pm = continuity_probe(shear(), perturb_entries(shear(), 1e-3, 4), SftSpec::full(2), bp, bp, 1000, 1000, 4);
    CHECK(pm.difference <= 0.01);

    const auto pb = continuity_probe(shear(), shear(), SftSpec::full(2), bp, perturb_measure(bp, 1e-3), 1000, 1000, 4);
    CHECK(pb.difference <= 0.01);
}

TEST_CASE("perturbations") {
    const MatrixSet p = perturb_entries(shear(), 0.25, 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c) CHECK(std::abs(std::abs(p[i](r, c) - shear()[i](r, c)) - 0.25) < 1e-15);
    const auto q = perturb_measure(BernoulliSpec::uniform(2), 0.1);
    CHECK(q.p()[0] == doctest::Approx(0.6));
    CHECK(q.p()[1] == doctest::Approx(0.4));
    CHECK_THROWS_AS((void)perturb_measure(BernoulliSpec::uniform(2), 0.5), std::invalid_argument);

    const auto ladder = continuity_ladder(shear(), BernoulliSpec::uniform(2), {1e-1, 1e-2}, PerturbationTarget::Measure, 100, 100, 1);
    REQUIRE(ladder.size() == 2);
    CHECK(ladder[0].delta == 0.1);
    CHECK(ladder[1].gap == doctest::Approx(std::abs(ladder[1].chi - ladder[1].chi_prime)));
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(BernoulliSpec({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(BernoulliSpec({1.0, 0.0}), std::invalid_argument);
    const auto golden = SftSpec::from_matrix({{1, 1}, {1, 0}});
    CHECK_THROWS_AS((void)furstenberg_estimate(shear(), golden, BernoulliSpec::uniform(2), 100, 100, 1), UnsupportedSft);
    CHECK_THROWS_AS((void)furstenberg_estimate(shear(), SftSpec::full(2), BernoulliSpec::uniform(2), 99, 100, 1),
                    std::invalid_argument);
}
