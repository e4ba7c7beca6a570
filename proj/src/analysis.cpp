#include "otai/analysis.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "otai/parallel.hpp"

namespace otai::analysis {

namespace {

double sample_stderr(const std::vector<double>& xs, double mean) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return sd / std::sqrt(static_cast<double>(n));
}

CondEstimate summarize_values(const std::vector<double>& finite, int trials, int infinite,
                              std::uint64_t master_seed) {
    if (finite.empty()) {
        throw EstimationError("all " + std::to_string(trials) +
                              " draws were rank-deficient; no estimate possible");
    }
    double sum = 0.0;
    for (double x : finite) sum += x;
    CondEstimate e;
    e.mean = sum / static_cast<double>(finite.size());
    e.stderr_ = sample_stderr(finite, e.mean);
    e.trials = trials;
    e.infinite_count = infinite;
    e.master_seed = master_seed;
    return e;
}

using OperatorBuilder = std::function<linalg::Matrix(const SeedSpec&)>;

/// Runs `trials` independent draws of `build`, cond's each, summarizes.
CondEstimate run_trials(const OperatorBuilder& build, int trials, std::uint64_t master_seed,
                        int threads) {
    if (trials < 2) {
        throw ParameterError("estimate needs trials >= 2, got " + std::to_string(trials));
    }
    std::vector<linalg::CondNumber> draws(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        const SeedSpec trial{master_seed, {static_cast<std::uint64_t>(t)}};
        draws[t] = linalg::condition_number(build(trial));
    });
    return summarize_conds(draws, master_seed);
}

OperatorBuilder make_builder(ModelKind kind, const SystemParams& params, FadingKind fading) {
    switch (kind) {
        case ModelKind::SharedA:
            return [params](const SeedSpec& trial) {
                return models::build_shared(params, trial).matrix;
            };
        case ModelKind::PerUserB:
            return [params](const SeedSpec& trial) {
                return models::build_per_user(params, trial).matrix;
            };
        case ModelKind::EavesSharedA:
            return [params, fading](const SeedSpec& trial) {
                const FadingSet f = fading == FadingKind::Gaussian
                                        ? models::sample_gaussian_fading(params, trial)
                                        : FadingSet::identity(params.M, params.s);
                return models::build_eaves_shared(params, f, trial).matrix;
            };
        case ModelKind::EavesPerUserB:
            return [params, fading](const SeedSpec& trial) {
                const FadingSet f = fading == FadingKind::Gaussian
                                        ? models::sample_gaussian_fading(params, trial)
                                        : FadingSet::identity(params.M, params.s);
                return models::build_eaves_per_user(params, f, trial).matrix;
            };
    }
    throw ParameterError("unknown model kind");
}

} // namespace

CondEstimate summarize_conds(const std::vector<linalg::CondNumber>& draws,
                             std::uint64_t master_seed) {
    std::vector<double> finite;
    finite.reserve(draws.size());
    int infinite = 0;
    for (const auto& c : draws) {
        if (c.rank_deficient) {
            ++infinite;
        } else {
            finite.push_back(c.value);
        }
    }
    return summarize_values(finite, static_cast<int>(draws.size()), infinite, master_seed);
}

CondEstimate estimate_expected_cond(ModelKind kind, const SystemParams& params,
                                    FadingKind fading, int trials, std::uint64_t master_seed,
                                    int threads) {
    params.validate();
    return run_trials(make_builder(kind, params, fading), trials, master_seed, threads);
}

CondEstimate estimate_fading_cond(int s, int M, int trials, std::uint64_t master_seed,
                                  int threads) {
    if (s < 1 || M < 1) throw ParameterError("estimate_fading_cond: need s >= 1 and M >= 1");
    // Only s, M and the fading streams [trial, M+2+m] matter; d is unused.
    const SystemParams params = SystemParams::uniform(s, s, M);
    return run_trials(
        [params](const SeedSpec& trial) {
            const FadingSet f = models::sample_gaussian_fading(params, trial);
            return linalg::hconcat(f.matrices);
        },
        trials, master_seed, threads);
}

double solvability_bound_shared(int d, int s) {
    if (s < 1 || d <= s) {
        throw DomainError("shared bound needs d > s >= 1, got d=" + std::to_string(d) +
                          ", s=" + std::to_string(s));
    }
    const double sd = std::sqrt(static_cast<double>(d));
    const double ss = std::sqrt(static_cast<double>(s));
    return (sd + ss) / (sd - ss);
}

double solvability_bound_per_user(int d, int s, int M) {
    if (M < 1) throw DomainError("per-user bound needs M >= 1, got M=" + std::to_string(M));
    if (s < 1 || d < 1) {
        throw DomainError("per-user bound needs d >= 1 and s >= 1");
    }
    const double sd = std::sqrt(static_cast<double>(d));
    if (!((sd - 1.0) * (sd - 1.0) > static_cast<double>(s))) {
        throw DomainError("per-user bound needs (sqrt(d)-1)^2 > s, got d=" + std::to_string(d) +
                          ", s=" + std::to_string(s));
    }
    const double num = std::sqrt(static_cast<double>(M) * d) + std::sqrt(static_cast<double>(s)) +
                       std::sqrt(static_cast<double>(M));
    const double den = std::sqrt(static_cast<double>(M) * d) - std::sqrt(static_cast<double>(s)) -
                       std::sqrt(static_cast<double>(M));
    if (!(den > 0.0)) {
        throw DomainError("per-user bound denominator not positive at M=" + std::to_string(M));
    }
    return num / den;
}

SolvabilityReport check_inverse_solvable(
    ModelKind kind, const std::vector<std::pair<int, CondEstimate>>& estimates,
    const std::function<double(int)>& bound) {
    if (estimates.empty()) throw ParameterError("check_inverse_solvable: empty M-grid");
    SolvabilityReport report;
    report.kind = kind;
    report.all_satisfied = true;
    for (const auto& [M, est] : estimates) {
        SolvabilityRow row;
        row.M = M;
        row.estimate = est;
        row.bound = bound(M);
        row.satisfied = est.mean <= row.bound + 3.0 * est.stderr_;
        report.all_satisfied = report.all_satisfied && row.satisfied;
        report.rows.push_back(row);
    }
    return report;
}

SecurityReport check_inverse_secure(ModelKind kind,
                                    const std::vector<std::pair<int, CondEstimate>>& legit,
                                    const std::vector<std::pair<int, CondEstimate>>& eaves) {
    if (legit.size() != eaves.size() || legit.empty()) {
        throw ParameterError("check_inverse_secure: grids must be non-empty and equal length");
    }
    SecurityReport report;
    report.kind = kind;
    report.paired = false;
    report.all_secure = true;
    for (std::size_t i = 0; i < legit.size(); ++i) {
        if (legit[i].first != eaves[i].first) {
            throw ParameterError("check_inverse_secure: M-grid mismatch at index " +
                                 std::to_string(i));
        }
        SecurityRow row;
        row.M = legit[i].first;
        row.legit = legit[i].second;
        row.eaves = eaves[i].second;
        row.diff_mean = row.eaves.mean - row.legit.mean;
        row.diff_stderr = std::sqrt(row.legit.stderr_ * row.legit.stderr_ +
                                    row.eaves.stderr_ * row.eaves.stderr_);
        row.secure = row.diff_mean > 3.0 * row.diff_stderr;
        report.all_secure = report.all_secure && row.secure;
        report.rows.push_back(row);
    }
    return report;
}

bool check_vic7(const std::vector<double>& alphas, const CondEstimate& cond_a,
                const CondEstimate& cond_h) {
    if (alphas.empty()) throw ParameterError("check_vic7: empty alpha list");
    double lo = alphas.front(), hi = alphas.front();
    for (double a : alphas) {
        if (!(a > 0.0)) throw ParameterError("check_vic7: alphas must be > 0");
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    const double ratio = std::sqrt(hi) / std::sqrt(lo);
    return cond_h.mean > ratio * cond_a.mean * cond_a.mean;
}

SecurityReport run_paired_security(ModelKind kind, const SystemParams& proto,
                                   const std::vector<int>& M_grid, int trials,
                                   std::uint64_t master_seed, int threads,
                                   FadingKind fading) {
    if (M_grid.empty()) throw ParameterError("run_paired_security: empty M-grid");
    if (trials < 2) throw ParameterError("run_paired_security: need trials >= 2");
    if (kind != ModelKind::SharedA && kind != ModelKind::PerUserB) {
        throw ParameterError("run_paired_security: kind must name a legitimate model");
    }
    SecurityReport report;
    report.kind = kind;
    report.paired = true;
    report.all_secure = true;
    for (int M : M_grid) {
        const SystemParams params = proto.with_users(M);
        params.validate();
        std::vector<linalg::CondNumber> legit_draws(static_cast<std::size_t>(trials));
        std::vector<linalg::CondNumber> eaves_draws(static_cast<std::size_t>(trials));
        parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
            const SeedSpec trial{master_seed, {static_cast<std::uint64_t>(t)}};
            const auto legit = kind == ModelKind::SharedA
                                   ? models::build_shared(params, trial)
                                   : models::build_per_user(params, trial);
            const FadingSet f = fading == FadingKind::Gaussian
                                    ? models::sample_gaussian_fading(params, trial)
                                    : FadingSet::identity(params.M, params.s);
            const auto eaves = kind == ModelKind::SharedA
                                   ? models::build_eaves_shared(params, f, trial)
                                   : models::build_eaves_per_user(params, f, trial);
            legit_draws[t] = linalg::condition_number(legit.matrix);
            eaves_draws[t] = linalg::condition_number(eaves.matrix);
        });

        // Pairs with a rank-deficient side drop out of both estimates.
        std::vector<double> lvals, evals, diffs;
        int infinite = 0;
        for (int t = 0; t < trials; ++t) {
            const auto& l = legit_draws[static_cast<std::size_t>(t)];
            const auto& e = eaves_draws[static_cast<std::size_t>(t)];
            if (l.rank_deficient || e.rank_deficient) {
                ++infinite;
                continue;
            }
            lvals.push_back(l.value);
            evals.push_back(e.value);
            diffs.push_back(e.value - l.value);
        }
        SecurityRow row;
        row.M = M;
        row.legit = summarize_values(lvals, trials, infinite, master_seed);
        row.eaves = summarize_values(evals, trials, infinite, master_seed);
        double dsum = 0.0;
        for (double x : diffs) dsum += x;
        row.diff_mean = dsum / static_cast<double>(diffs.size());
        row.diff_stderr = sample_stderr(diffs, row.diff_mean);
        row.secure = row.diff_mean > 3.0 * row.diff_stderr;
        report.all_secure = report.all_secure && row.secure;
        report.rows.push_back(row);
    }
    return report;
}

SecurityReport check_tbc(int d, int s, const std::vector<int>& M_grid, int trials,
                         std::uint64_t master_seed, int threads, FadingKind fading) {
    return run_paired_security(ModelKind::PerUserB, SystemParams::uniform(d, s, 1), M_grid,
                               trials, master_seed, threads, fading);
}

double z_value(const GradientSet& grads, int M, double sigma_gamma) {
    const auto& sp = grads.sparsified();
    if (static_cast<int>(sp.size()) != M) {
        throw ShapeError("z_value: gradient set has " + std::to_string(sp.size()) +
                         " users, expected M=" + std::to_string(M));
    }
    double sum = 0.0;
    for (const auto& g : sp) sum += g.squaredNorm();
    return sum / (static_cast<double>(M) * static_cast<double>(M)) + sigma_gamma * sigma_gamma;
}

double approximation_probability(int d, double epsilon, double z) {
    if (d < 1) throw ParameterError("approximation_probability: need d >= 1");
    if (!(epsilon > 0.0)) throw ParameterError("approximation_probability: need epsilon > 0");
    if (!(z > 0.0)) {
        throw DomainError("approximation_probability: need z > 0, got " + std::to_string(z));
    }
    return chi2_sf(d, static_cast<double>(d) * epsilon / z);
}

TailBound tail_bound(int d, double epsilon, double z) {
    if (d < 1) throw ParameterError("tail_bound: need d >= 1");
    if (!(z > 0.0)) throw DomainError("tail_bound: need z > 0");
    if (!(epsilon > z)) {
        throw DomainError("tail_bound: need epsilon > z (bound vacuous otherwise), got epsilon=" +
                          std::to_string(epsilon) + ", z=" + std::to_string(z));
    }
    TailBound tb;
    tb.d = d;
    tb.epsilon = epsilon;
    tb.z = z;
    tb.mu = (epsilon / z - 1.0) / 4.0;
    tb.beta = std::min(tb.mu, tb.mu * tb.mu);
    tb.exp_bound = std::exp(-tb.beta * static_cast<double>(d));
    tb.exact_prob = approximation_probability(d, epsilon, z);
    return tb;
}

bool check_meshed_security(ModelKind kind, const SystemParams& params, int M_star, int trials,
                           std::uint64_t master_seed, int threads) {
    if (M_star < 1) throw ParameterError("check_meshed_security: need M_star >= 1");
    const CondEstimate outside = estimate_expected_cond(kind, params.with_users(M_star + 1),
                                                        FadingKind::Identity, trials,
                                                        master_seed, threads);
    for (int M = 1; M <= M_star; ++M) {
        const CondEstimate inside = estimate_expected_cond(kind, params.with_users(M),
                                                           FadingKind::Identity, trials,
                                                           master_seed, threads);
        const double margin = 3.0 * std::sqrt(inside.stderr_ * inside.stderr_ +
                                              outside.stderr_ * outside.stderr_);
        if (!(inside.mean - outside.mean > margin)) return false;
    }
    return true;
}

std::pair<double, double> fact1_bounds(int N, int n) {
    if (n < 1 || N < n) {
        throw DomainError("fact1_bounds needs N >= n >= 1 (tall orientation), got N=" +
                          std::to_string(N) + ", n=" + std::to_string(n));
    }
    const double a = std::sqrt(static_cast<double>(N));
    const double b = std::sqrt(static_cast<double>(n));
    return {a - b, a + b};
}

} // namespace otai::analysis
