#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "otai/chi_square.hpp"
#include "otai/linalg.hpp"
#include "otai/models.hpp"

namespace otai::analysis {

using models::FadingSet;
using models::GradientSet;
using models::ModelKind;
using models::SystemParams;

enum class FadingKind { Identity, Gaussian };

/// Monte-Carlo estimate of an expected condition number. Rank-deficient
/// draws are excluded from mean/stderr and counted in `infinite_count`.
struct CondEstimate {
    double mean = 0.0;
    double stderr_ = 0.0; // sample standard deviation / sqrt(finite draws)
    int trials = 0;
    int infinite_count = 0;
    std::uint64_t master_seed = 0;
};

/// One grid point of a solvability check: estimate vs. closed-form bound.
struct SolvabilityRow {
    int M = 0;
    CondEstimate estimate;
    double bound = 0.0;
    bool satisfied = false; // mean <= bound + 3*stderr
};

struct SolvabilityReport {
    ModelKind kind = ModelKind::SharedA;
    std::vector<SolvabilityRow> rows;
    bool all_satisfied = false;
};

/// One grid point of a security check. For paired estimates diff_stderr is
/// the stderr of per-trial (eaves - legit) differences, otherwise the
/// combined stderr sqrt(se_l^2 + se_e^2).
struct SecurityRow {
    int M = 0;
    CondEstimate legit;
    CondEstimate eaves;
    double diff_mean = 0.0;
    double diff_stderr = 0.0;
    bool secure = false; // diff_mean > 3*diff_stderr
};

struct SecurityReport {
    ModelKind kind = ModelKind::PerUserB;
    bool paired = false;
    std::vector<SecurityRow> rows;
    bool all_secure = false;
};

/// Inputs and outputs of the chi-square concentration bound.
struct TailBound {
    int d = 0;
    double epsilon = 0.0;
    double z = 0.0;
    double mu = 0.0;         // (epsilon/z - 1)/4
    double beta = 0.0;       // min(mu, mu^2)
    double exact_prob = 0.0; // 1 - F_chi2_d(d*epsilon/z)
    double exp_bound = 0.0;  // exp(-beta*d)
};

/// Fixed-order accumulation of per-draw condition numbers into a
/// CondEstimate. Throws EstimationError when every draw is rank-deficient.
CondEstimate summarize_conds(const std::vector<linalg::CondNumber>& draws,
                             std::uint64_t master_seed);

/// Sample mean/stderr of cond over `trials` independent operator draws.
/// Trial t uses the trial-level stream {master_seed, [t]}; for the
/// eavesdropper kinds `fading` selects identity or per-trial Gaussian
/// mismatch. Trials may run on up to `threads` workers with results
/// identical to a sequential run.
CondEstimate estimate_expected_cond(ModelKind kind, const SystemParams& params,
                                    FadingKind fading, int trials, std::uint64_t master_seed,
                                    int threads = 1);

/// Mean cond of the stacked fading matrices (H_1, ..., H_M), H_m s x s
/// standard Gaussian, drawn from the fading streams of each trial.
CondEstimate estimate_fading_cond(int s, int M, int trials, std::uint64_t master_seed,
                                  int threads = 1);

/// (sqrt(d) + sqrt(s)) / (sqrt(d) - sqrt(s)); constant in M. Requires d > s.
double solvability_bound_shared(int d, int s);

/// (sqrt(Md) + sqrt(s) + sqrt(M)) / (sqrt(Md) - sqrt(s) - sqrt(M)),
/// strictly decreasing in M. Requires (sqrt(d) - 1)^2 > s.
double solvability_bound_per_user(int d, int s, int M);

/// Per-M comparison of estimates against `bound`, satisfied at each point
/// iff mean <= bound(M) + 3*stderr.
SolvabilityReport check_inverse_solvable(ModelKind kind,
                                         const std::vector<std::pair<int, CondEstimate>>& estimates,
                                         const std::function<double(int)>& bound);

/// Per-M comparison of independently formed legitimate vs. eavesdropper
/// estimates (unpaired margins). Grids must match.
SecurityReport check_inverse_secure(ModelKind kind,
                                    const std::vector<std::pair<int, CondEstimate>>& legit,
                                    const std::vector<std::pair<int, CondEstimate>>& eaves);

/// Sufficient condition for security of the shared model:
/// E[cond(H_1,...,H_M)] > (max_m sqrt(a_m) / min_m sqrt(a_m)) * E[cond(A)]^2,
/// evaluated on sample means.
bool check_vic7(const std::vector<double>& alphas, const CondEstimate& cond_a,
                const CondEstimate& cond_h);

/// Paired legitimate-vs-eavesdropper sweep: per grid M and per trial, both
/// operators are built from the same trial stream and therefore share their
/// compression draws, so the per-trial difference isolates the fading
/// effect. `kind` names the legitimate model; `proto` supplies d, s and
/// alphas (resized per grid point).
SecurityReport run_paired_security(ModelKind kind, const SystemParams& proto,
                                   const std::vector<int>& M_grid, int trials,
                                   std::uint64_t master_seed, int threads = 1,
                                   FadingKind fading = FadingKind::Gaussian);

/// Paired Monte-Carlo check of the power-independent per-user security
/// condition: E[cond(H_m(C_m+I))] > E[cond(C_m+I)] per grid M, sharing the
/// C_m draws between both sides. Power coefficients do not enter.
SecurityReport check_tbc(int d, int s, const std::vector<int>& M_grid, int trials,
                         std::uint64_t master_seed, int threads = 1,
                         FadingKind fading = FadingKind::Gaussian);

/// z = (1/M^2) sum_m ||g_m^sp||^2 + sigma_gamma^2.
double z_value(const GradientSet& grads, int M, double sigma_gamma);

/// P(||y - E[y]||^2 / d >= epsilon) = 1 - F_chi2_d(d*epsilon/z).
double approximation_probability(int d, double epsilon, double z);

/// Exact exceedance probability plus the exponential bound exp(-beta*d).
/// Requires epsilon > z (otherwise the bound is vacuous).
TailBound tail_bound(int d, double epsilon, double z);

/// Meshed-network predicate: E[cond(_ML)] > E[cond(_(M*+1)L)] at 3-sigma
/// margin for every M in 1..M_star, for the chosen model kind.
bool check_meshed_security(ModelKind kind, const SystemParams& params, int M_star, int trials,
                           std::uint64_t master_seed, int threads = 1);

/// Expectation bounds (sqrt(N) - sqrt(n), sqrt(N) + sqrt(n)) for the
/// extreme singular values of a tall N x n standard Gaussian matrix.
std::pair<double, double> fact1_bounds(int N, int n);

} // namespace otai::analysis
