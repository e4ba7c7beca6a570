#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "otai/chi_square.hpp"
#include "otai/errors.hpp"

using namespace otai;
using analysis::chi2_cdf;
using analysis::chi2_sf;
using analysis::regularized_gamma_p;
using analysis::regularized_gamma_q;

namespace {

// Composite Simpson rule, n even.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Chi-square density with d degrees of freedom.
double chi2_pdf(int d, double x) {
    const double a = 0.5 * d;
    return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) - std::lgamma(a));
}

} // namespace

TEST_CASE("two degrees of freedom is the exponential distribution") {
    // F(x) = 1 - exp(-x/2) exactly.
    CHECK(std::fabs(chi2_cdf(2, 2.0) - (1.0 - std::exp(-1.0))) < 1e-10);
    CHECK(std::fabs(chi2_cdf(2, 4.0) - (1.0 - std::exp(-2.0))) < 1e-10);
    CHECK(std::fabs(chi2_cdf(2, 0.5) - (1.0 - std::exp(-0.25))) < 1e-12);
    CHECK(std::fabs(chi2_sf(2, 7.0) - std::exp(-3.5)) < 1e-12);
}

TEST_CASE("one degree of freedom matches direct quadrature") {
    // Substituting x = u^2 removes the endpoint singularity:
    // F(1) = 2/sqrt(2 pi) * int_0^1 exp(-u^2/2) du.
    const double quad =
        simpson([](double u) { return std::exp(-0.5 * u * u); }, 0.0, 1.0, 2000) * 2.0 /
        std::sqrt(2.0 * std::acos(-1.0));
    CHECK(std::fabs(chi2_cdf(1, 1.0) - quad) < 1e-8);
}

TEST_CASE("integer-degree cases match quadrature of the density") {
    // Substituting x = u^2 turns the density into a smooth
    // polynomial-times-gaussian integrand for every integer d.
    for (const auto& [d, x] : {std::pair<int, double>{5, 3.7}, {3, 0.5}, {10, 10.0}, {7, 2.2}}) {
        const double quad = simpson(
            [d = d](double u) { return chi2_pdf(d, u * u) * 2.0 * u; }, 0.0, std::sqrt(x), 4000);
        CHECK(chi2_cdf(d, x) == doctest::Approx(quad).epsilon(1e-9));
    }
}

TEST_CASE("reference values to twelve digits") {
    // High-precision regularized incomplete gamma references.
    CHECK(chi2_cdf(1, 1.0) == doctest::Approx(0.6826894921370859).epsilon(1e-12));
    CHECK(chi2_cdf(5, 3.7) == doctest::Approx(0.4066360382181923).epsilon(1e-12));
    CHECK(chi2_cdf(100, 120.0) == doctest::Approx(0.91559331890630817).epsilon(1e-12));
    CHECK(chi2_sf(100, 200.0) == doctest::Approx(1.1784500720979422e-8).epsilon(1e-10));
    CHECK(chi2_sf(100, 150.0) == doctest::Approx(0.00090393204235400909).epsilon(1e-10));
    // Deep tail stays meaningful instead of cancelling to zero.
    CHECK(chi2_sf(50, 200.0) == doctest::Approx(7.8576107246547436e-20).epsilon(1e-10));
}

TEST_CASE("cdf and sf are complementary and monotone") {
    for (int d : {1, 2, 3, 10, 100}) {
        CHECK(chi2_cdf(d, 0.0) == 0.0);
        CHECK(chi2_sf(d, 0.0) == 1.0);
        double prev = -1.0;
        for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 80.0}) {
            const double f = chi2_cdf(d, x);
            CHECK(f > prev);
            CHECK(f + chi2_sf(d, x) == doctest::Approx(1.0).epsilon(1e-12));
            prev = f;
        }
    }
    // At fixed x more degrees of freedom push mass to the right.
    CHECK(chi2_cdf(4, 3.0) < chi2_cdf(2, 3.0));
    CHECK(chi2_cdf(20, 3.0) < chi2_cdf(4, 3.0));
}

TEST_CASE("upper tail obeys the exponential concentration bound") {
    // P(chi2_d >= d*r) <= exp(-beta*d) with mu = (r-1)/4, beta = min(mu, mu^2).
    for (int d : {1, 2, 5, 10, 50, 100}) {
        for (double r : {1.1, 1.5, 2.0, 3.0, 5.0}) {
            const double mu = (r - 1.0) / 4.0;
            const double beta = std::min(mu, mu * mu);
            CHECK(chi2_sf(d, d * r) <= std::exp(-beta * d) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("invalid arguments throw") {
    CHECK_THROWS_AS(chi2_cdf(0, 1.0), ParameterError);
    CHECK_THROWS_AS(chi2_cdf(-3, 1.0), ParameterError);
    CHECK_THROWS_AS(chi2_cdf(2, -0.5), ParameterError);
    CHECK_THROWS_AS(chi2_cdf(2, std::nan("")), ParameterError);
    CHECK_THROWS_AS(chi2_sf(0, 1.0), ParameterError);
    CHECK_THROWS_AS(regularized_gamma_p(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(regularized_gamma_p(-1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(regularized_gamma_p(1.0, -1.0), ParameterError);
    CHECK_THROWS_AS(regularized_gamma_q(0.0, 1.0), ParameterError);
}
