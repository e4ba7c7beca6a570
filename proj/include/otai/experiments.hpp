#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otai/analysis.hpp"

namespace otai::experiments {

using analysis::FadingKind;
using analysis::SecurityReport;
using analysis::SolvabilityReport;
using models::GradientSet;
using models::ModelKind;
using models::SystemParams;

/// Degrees of freedom used in the concentration formulas: the model's d as
/// written, or the s coordinates a transmission physically produces.
enum class DofMode { PaperD, PhysicalS };

/// Defaults follow the desk scale (d=100, s=25, trials=50) with grid
/// {1,2,4,8,16,32,64}; the full scale is d=1000, s=250 with 10 trials.
struct SweepSpec {
    int d = 100;
    int s = 25;
    std::vector<int> M_grid = {1, 2, 4, 8, 16, 32, 64};
    int trials = 50;
    std::uint64_t master_seed = 0;
    ModelKind model = ModelKind::PerUserB;
    FadingKind fading = FadingKind::Gaussian;
    int threads = 1;

    void validate() const;
};

struct SweepRow {
    int M = 0;
    double legit_mean = 0.0;
    double legit_stderr = 0.0;
    double eaves_mean = 0.0;
    double eaves_stderr = 0.0;
    double diff_mean = 0.0;   // paired eaves - legit
    double diff_stderr = 0.0; // stderr of the paired differences
};

struct ConcentrationRow {
    int M = 0;
    double z = 0.0;
    double epsilon = 0.0;
    double empirical = 0.0; // frequency of ||y - E[y]||^2/d >= epsilon
    double exact = 0.0;     // 1 - F_chi2_dof(d*epsilon/z)
    double bound = 0.0;     // exp(-beta*dof), NaN when epsilon <= z
};

/// Per-M paired estimates of cond(C_1+I, ..., C_M+I) and
/// cond(H_1(C_1+I), ..., H_M(C_M+I)); identity fading makes the two curves
/// coincide exactly.
std::vector<SweepRow> run_fig1(const SweepSpec& spec);

/// Estimates vs. the closed-form bound of spec.model over the M-grid.
SolvabilityReport run_solvability_sweep(const SweepSpec& spec);

/// Empirical exceedance frequency of ||y - E[y]||^2/d over repeated
/// per-user-model transmissions with fixed gradients, next to the exact
/// chi-square probability and (when epsilon > z) the exponential bound.
/// Transmission t draws its operator and noise from trial stream [t]; the
/// target E[y] uses the first s coordinates of the gradient mean.
ConcentrationRow run_concentration(const SystemParams& params, const GradientSet& grads,
                                   double epsilon, int transmissions,
                                   std::uint64_t master_seed, DofMode dof = DofMode::PhysicalS,
                                   int threads = 1);

/// fig1.csv: M,legit_mean,legit_stderr,eaves_mean,eaves_stderr
void write_fig1_csv(const std::string& path, const std::vector<SweepRow>& rows);

/// solvability.csv: M,mean,stderr,bound,satisfied
void write_solvability_csv(const std::string& path, const SolvabilityReport& report);

/// security.csv: M,legit_mean,legit_stderr,eaves_mean,eaves_stderr,secure
void write_security_csv(const std::string& path, const SecurityReport& report);

/// concentration.csv: M,z,epsilon,empirical,exact,bound
void write_concentration_csv(const std::string& path, const std::vector<ConcentrationRow>& rows);

/// estimate.csv: model,M,trials,mean,stderr,infinite_count
void write_estimate_csv(const std::string& path, ModelKind kind,
                        const analysis::CondEstimate& estimate, int M);

/// Formats a float with 9 significant digits (the CSV convention).
std::string format_float(double x);

} // namespace otai::experiments
