#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "otai/errors.hpp"
#include "otai/linalg.hpp"

using namespace otai;
using linalg::Matrix;

TEST_CASE("sample_gaussian is deterministic and honors mean/std") {
    const SeedSpec seed{31, {4}};
    const Matrix a = linalg::sample_gaussian(40, 50, 2.0, 3.0, seed);
    const Matrix b = linalg::sample_gaussian(40, 50, 2.0, 3.0, seed);
    CHECK(a == b);

    const double mean = a.mean();
    const double var = (a.array() - mean).square().mean();
    // 2000 entries: sd of the mean is 3/sqrt(2000) ~ 0.067.
    CHECK(mean == doctest::Approx(2.0).epsilon(0.1));
    CHECK(var == doctest::Approx(9.0).epsilon(0.1));

    // Same seed, standard parameters: the affine image of the same draws.
    const Matrix z = linalg::sample_gaussian(40, 50, 0.0, 1.0, seed);
    CHECK((a - (2.0 + 3.0 * z.array()).matrix()).norm() == 0.0);
}

TEST_CASE("sample_gaussian rejects bad arguments") {
    CHECK_THROWS_AS(linalg::sample_gaussian(0, 5, 0.0, 1.0, SeedSpec{}), ParameterError);
    CHECK_THROWS_AS(linalg::sample_gaussian(5, 0, 0.0, 1.0, SeedSpec{}), ParameterError);
    CHECK_THROWS_AS(linalg::sample_gaussian(5, 5, 0.0, 0.0, SeedSpec{}), ParameterError);
    CHECK_THROWS_AS(linalg::sample_gaussian(5, 5, 0.0, -1.0, SeedSpec{}), ParameterError);
}

TEST_CASE("add_rect_identity adds one on the main diagonal only") {
    Matrix m = Matrix::Zero(2, 4);
    m(0, 1) = 5.0;
    const Matrix out = linalg::add_rect_identity(m);
    CHECK(out(0, 0) == 1.0);
    CHECK(out(1, 1) == 1.0);
    CHECK(out(0, 1) == 5.0);
    CHECK(out(0, 2) == 0.0);
    CHECK(out(1, 3) == 0.0);

    CHECK_THROWS_AS(linalg::add_rect_identity(Matrix::Zero(4, 2)), ShapeError);
}

TEST_CASE("hconcat stitches blocks left to right") {
    Matrix a = Matrix::Constant(2, 1, 1.0);
    Matrix b = Matrix::Constant(2, 2, 2.0);
    const Matrix out = linalg::hconcat({a, b});
    REQUIRE(out.rows() == 2);
    REQUIRE(out.cols() == 3);
    CHECK(out(0, 0) == 1.0);
    CHECK(out(1, 2) == 2.0);

    CHECK_THROWS_AS(linalg::hconcat({}), ParameterError);
    CHECK_THROWS_AS(linalg::hconcat({a, Matrix::Zero(3, 1)}), ShapeError);
}

TEST_CASE("singular values match hand-solved cases") {
    // [[1,1,0],[0,1,1]]: A A^T = [[2,1],[1,2]], eigenvalues 3 and 1.
    Matrix a(2, 3);
    a << 1, 1, 0, 0, 1, 1;
    const auto sv = linalg::singular_values(a);
    REQUIRE(sv.size() == 2);
    CHECK(sv[0] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(sv[1] == doctest::Approx(1.0).epsilon(1e-12));

    // Diagonal with signs: singular values are the magnitudes, sorted.
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -4.0;
    const auto dv = linalg::singular_values(d);
    CHECK(dv[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(dv[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("condition number of hand-solved cases") {
    Matrix a(2, 3);
    a << 1, 1, 0, 0, 1, 1;
    const auto c = linalg::condition_number(a);
    CHECK_FALSE(c.rank_deficient);
    CHECK(c.value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

    // Wide identity has all singular values 1.
    Matrix eye = linalg::add_rect_identity(Matrix::Zero(3, 7));
    const auto e = linalg::condition_number(eye);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(linalg::condition_number(Matrix::Zero(4, 2)), ShapeError);
}

TEST_CASE("condition number is scale invariant") {
    const Matrix a = linalg::sample_gaussian(6, 10, 0.0, 1.0, SeedSpec{8, {0}});
    const double base = linalg::condition_number(a).value;
    for (double c : {2.0, 0.125, 1e6, -3.0}) {
        CHECK(linalg::condition_number(linalg::scale(a, c)).value ==
              doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("rank deficiency yields the infinity sentinel, not a throw") {
    const auto zero = linalg::condition_number(Matrix::Zero(3, 5));
    CHECK(zero.rank_deficient);
    CHECK(std::isinf(zero.value));

    // Repeated row: rank 1 out of 2.
    Matrix r(2, 4);
    r << 1, 2, 3, 4, 1, 2, 3, 4;
    const auto rep = linalg::condition_number(r);
    CHECK(rep.rank_deficient);
    CHECK(std::isinf(rep.value));
}

TEST_CASE("product bound cond(PQ) >= cond(P)/cond(Q) on random pairs") {
    for (int t = 0; t < 100; ++t) {
        const SeedSpec trial{606, {static_cast<std::uint64_t>(t)}};
        const Matrix p = linalg::sample_gaussian(5, 8, 0.0, 1.0, trial.child(0));
        const Matrix q = linalg::sample_gaussian(8, 12, 0.0, 1.0, trial.child(1));
        const auto cp = linalg::condition_number(p);
        const auto cq = linalg::condition_number(q);
        const auto cpq = linalg::condition_number(Matrix(p * q));
        REQUIRE_FALSE(cp.rank_deficient);
        REQUIRE_FALSE(cq.rank_deficient);
        REQUIRE_FALSE(cpq.rank_deficient);
        CHECK(cpq.value >= cp.value / cq.value - 1e-8);
    }
}

TEST_CASE("extreme singular values of tall gaussians respect expectation bounds") {
    // E[s_min] >= sqrt(N) - sqrt(n) and E[s_max] <= sqrt(N) + sqrt(n) for
    // 100 x 25; 60 trials keep this fast, margins cover the sampling noise.
    const int trials = 60;
    double min_sum = 0.0, max_sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Matrix g = linalg::sample_gaussian(
            100, 25, 0.0, 1.0, SeedSpec{909, {static_cast<std::uint64_t>(t)}});
        const auto sv = linalg::singular_values(g);
        max_sum += sv.front();
        min_sum += sv.back();
    }
    const double mean_min = min_sum / trials;
    const double mean_max = max_sum / trials;
    CHECK(mean_min > 5.0 - 0.5);
    CHECK(mean_min < mean_max);
    CHECK(mean_max < 15.0 + 0.5);
}
