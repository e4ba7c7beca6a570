#include "otai/chi_square.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "otai/errors.hpp"

namespace otai::analysis {

namespace {

constexpr double kTermination = 1e-12;
constexpr int kMaxIterations = 10000;

// Lower series: P(a,x) = e^{-x} x^a / Gamma(a) * sum_n x^n / (a(a+1)...(a+n)).
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 0; n < kMaxIterations; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kTermination) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw ComputationError("regularized_gamma_p: series did not converge (a=" +
                           std::to_string(a) + ", x=" + std::to_string(x) + ")");
}

// Upper continued fraction, modified Lentz: Q(a,x) = e^{-x} x^a / Gamma(a) * CF.
double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kTermination;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kTermination) {
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw ComputationError("regularized_gamma_p: continued fraction did not converge (a=" +
                           std::to_string(a) + ", x=" + std::to_string(x) + ")");
}

} // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || !std::isfinite(a) || !std::isfinite(x)) {
        throw ParameterError("regularized_gamma_p: need a > 0 and x >= 0 finite");
    }
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || !std::isfinite(a) || !std::isfinite(x)) {
        throw ParameterError("regularized_gamma_q: need a > 0 and x >= 0 finite");
    }
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_cdf(int d, double x) {
    if (d < 1) {
        throw ParameterError("chi2_cdf: degrees of freedom must be >= 1, got " +
                             std::to_string(d));
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw ParameterError("chi2_cdf: x must be finite and >= 0");
    }
    return regularized_gamma_p(0.5 * static_cast<double>(d), 0.5 * x);
}

double chi2_sf(int d, double x) {
    if (d < 1) {
        throw ParameterError("chi2_sf: degrees of freedom must be >= 1, got " + std::to_string(d));
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw ParameterError("chi2_sf: x must be finite and >= 0");
    }
    return regularized_gamma_q(0.5 * static_cast<double>(d), 0.5 * x);
}

} // namespace otai::analysis
