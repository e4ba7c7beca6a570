#include "otai/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "otai/chi_square.hpp"
#include "otai/parallel.hpp"

namespace otai::experiments {

void SweepSpec::validate() const {
    std::vector<std::string> problems;
    if (d < 1) problems.push_back("d must be >= 1");
    if (s < 1) problems.push_back("s must be >= 1");
    if (trials < 1) problems.push_back("trials must be >= 1");
    if (M_grid.empty()) problems.push_back("M_grid must be non-empty");
    for (std::size_t i = 0; i < M_grid.size(); ++i) {
        if (M_grid[i] < 1 || (i > 0 && M_grid[i] <= M_grid[i - 1])) {
            problems.push_back("M_grid must be strictly increasing positive integers");
            break;
        }
    }
    if (!problems.empty()) {
        std::string msg = "invalid SweepSpec:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw ParameterError(msg);
    }
}

std::vector<SweepRow> run_fig1(const SweepSpec& spec) {
    spec.validate();
    const SecurityReport report = analysis::check_tbc(spec.d, spec.s, spec.M_grid, spec.trials,
                                                      spec.master_seed, spec.threads,
                                                      spec.fading);
    std::vector<SweepRow> rows;
    rows.reserve(report.rows.size());
    for (const auto& r : report.rows) {
        rows.push_back({r.M, r.legit.mean, r.legit.stderr_, r.eaves.mean, r.eaves.stderr_,
                        r.diff_mean, r.diff_stderr});
    }
    return rows;
}

SolvabilityReport run_solvability_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<std::pair<int, analysis::CondEstimate>> estimates;
    estimates.reserve(spec.M_grid.size());
    for (int M : spec.M_grid) {
        const SystemParams params = SystemParams::uniform(spec.d, spec.s, M);
        estimates.emplace_back(M, analysis::estimate_expected_cond(spec.model, params,
                                                                   spec.fading, spec.trials,
                                                                   spec.master_seed,
                                                                   spec.threads));
    }
    const auto bound = [&](int M) {
        return spec.model == ModelKind::SharedA
                   ? analysis::solvability_bound_shared(spec.d, spec.s)
                   : analysis::solvability_bound_per_user(spec.d, spec.s, M);
    };
    return analysis::check_inverse_solvable(spec.model, estimates, bound);
}

ConcentrationRow run_concentration(const SystemParams& params, const GradientSet& grads,
                                   double epsilon, int transmissions,
                                   std::uint64_t master_seed, DofMode dof, int threads) {
    params.validate();
    if (!(epsilon > 0.0)) throw ParameterError("run_concentration: need epsilon > 0");
    if (transmissions < 1) throw ParameterError("run_concentration: need transmissions >= 1");
    const double z = analysis::z_value(grads, params.M, params.sigma_gamma);
    if (!(z > 0.0)) {
        throw DomainError("run_concentration: z = 0 (zero gradients and zero noise) is "
                          "degenerate");
    }
    const linalg::Vector target = models::mean_target(grads, params.M).head(params.s);

    // Exceedance count is an integer sum, so chunked parallel execution
    // cannot change the result.
    std::atomic<long long> count{0};
    parallel_for(static_cast<std::size_t>(transmissions), threads, [&](std::size_t t) {
        const SeedSpec trial{master_seed, {static_cast<std::uint64_t>(t)}};
        const auto op = models::build_per_user(params, trial);
        const linalg::Vector y = models::transmit(op, grads, params.sigma_gamma,
                                                  models::noise_stream(trial, params.M));
        const double stat = (y - target).squaredNorm() / static_cast<double>(params.d);
        if (stat >= epsilon) count.fetch_add(1, std::memory_order_relaxed);
    });

    const int dof_value = dof == DofMode::PaperD ? params.d : params.s;
    ConcentrationRow row;
    row.M = params.M;
    row.z = z;
    row.epsilon = epsilon;
    row.empirical = static_cast<double>(count.load()) / static_cast<double>(transmissions);
    row.exact = analysis::chi2_sf(dof_value, static_cast<double>(params.d) * epsilon / z);
    if (epsilon > z) {
        const double mu = (epsilon / z - 1.0) / 4.0;
        const double beta = std::min(mu, mu * mu);
        row.bound = std::exp(-beta * static_cast<double>(dof_value));
    } else {
        row.bound = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

std::string format_float(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

namespace {

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    return out;
}

} // namespace

void write_fig1_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    auto out = open_csv(path);
    out << "M,legit_mean,legit_stderr,eaves_mean,eaves_stderr\n";
    for (const auto& r : rows) {
        out << r.M << ',' << format_float(r.legit_mean) << ',' << format_float(r.legit_stderr)
            << ',' << format_float(r.eaves_mean) << ',' << format_float(r.eaves_stderr) << '\n';
    }
    if (!out) throw IoError("failed while writing " + path);
}

void write_solvability_csv(const std::string& path, const SolvabilityReport& report) {
    auto out = open_csv(path);
    out << "M,mean,stderr,bound,satisfied\n";
    for (const auto& r : report.rows) {
        out << r.M << ',' << format_float(r.estimate.mean) << ','
            << format_float(r.estimate.stderr_) << ',' << format_float(r.bound) << ','
            << (r.satisfied ? 1 : 0) << '\n';
    }
    if (!out) throw IoError("failed while writing " + path);
}

void write_security_csv(const std::string& path, const SecurityReport& report) {
    auto out = open_csv(path);
    out << "M,legit_mean,legit_stderr,eaves_mean,eaves_stderr,secure\n";
    for (const auto& r : report.rows) {
        out << r.M << ',' << format_float(r.legit.mean) << ',' << format_float(r.legit.stderr_)
            << ',' << format_float(r.eaves.mean) << ',' << format_float(r.eaves.stderr_) << ','
            << (r.secure ? 1 : 0) << '\n';
    }
    if (!out) throw IoError("failed while writing " + path);
}

void write_concentration_csv(const std::string& path,
                             const std::vector<ConcentrationRow>& rows) {
    auto out = open_csv(path);
    out << "M,z,epsilon,empirical,exact,bound\n";
    for (const auto& r : rows) {
        out << r.M << ',' << format_float(r.z) << ',' << format_float(r.epsilon) << ','
            << format_float(r.empirical) << ',' << format_float(r.exact) << ','
            << format_float(r.bound) << '\n';
    }
    if (!out) throw IoError("failed while writing " + path);
}

void write_estimate_csv(const std::string& path, ModelKind kind,
                        const analysis::CondEstimate& estimate, int M) {
    auto out = open_csv(path);
    out << "model,M,trials,mean,stderr,infinite_count\n";
    out << models::to_string(kind) << ',' << M << ',' << estimate.trials << ','
        << format_float(estimate.mean) << ',' << format_float(estimate.stderr_) << ','
        << estimate.infinite_count << '\n';
    if (!out) throw IoError("failed while writing " + path);
}

} // namespace otai::experiments
