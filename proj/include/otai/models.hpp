#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "otai/linalg.hpp"
#include "otai/rng.hpp"

namespace otai::models {

using linalg::Matrix;
using linalg::Vector;

/// Dimensions and channel parameters shared by all forward models.
struct SystemParams {
    int d = 0;                  // parameter-vector length per user
    int s = 0;                  // receiver endpoints
    int M = 0;                  // active users
    std::vector<double> alphas; // per-user power scalings, length M
    double sigma_gamma = 0.0;   // channel-noise standard deviation
    double delta = 1.0;         // sparsification threshold

    /// Params with constant power scaling `alpha` across all users.
    static SystemParams uniform(int d, int s, int M, double alpha = 1.0,
                                double sigma_gamma = 0.0, double delta = 1.0);

    /// Same system resized to `M` users. Requires the current alphas to be
    /// constant, or to already list at least `M` values.
    [[nodiscard]] SystemParams with_users(int M) const;

    /// Throws ParameterError (aggregated message) unless
    /// d,s,M >= 1, s <= M*d, alphas.size() == M with all alphas > 0,
    /// sigma_gamma >= 0 and delta > 0.
    void validate() const;
};

/// Per-user gradient vectors and their sparsified images.
class GradientSet {
public:
    /// Takes ownership of M vectors of equal length d.
    explicit GradientSet(std::vector<Vector> vectors);

    /// M users, each with d i.i.d. Normal(0,1) entries; user m draws from
    /// stream seed.child(m).
    static GradientSet gaussian(int M, int d, const SeedSpec& seed);

    /// Loads one row per user from CSV. A `user,g_1..g_d` header is
    /// optional; with the header present the leading user column is
    /// dropped. All values must be finite reals.
    static GradientSet from_csv(const std::string& path);

    /// Populates the sparsified images with threshold `delta`.
    void sparsify(double delta);

    [[nodiscard]] int users() const { return static_cast<int>(vectors_.size()); }
    [[nodiscard]] int length() const { return static_cast<int>(vectors_.front().size()); }
    [[nodiscard]] const std::vector<Vector>& vectors() const { return vectors_; }
    /// Throws ParameterError if sparsify() has not been called.
    [[nodiscard]] const std::vector<Vector>& sparsified() const;
    /// Concatenation (g_1^sp, ..., g_M^sp) of length M*d.
    [[nodiscard]] Vector stacked_sparsified() const;

private:
    std::vector<Vector> vectors_;
    std::optional<std::vector<Vector>> sparsified_;
};

enum class ModelKind { SharedA, PerUserB, EavesSharedA, EavesPerUserB };

[[nodiscard]] std::string to_string(ModelKind kind);

/// Column range of one user inside the stacked operator, and the scalar
/// sqrt(alpha_m)/M that multiplies that user's compression matrix.
struct BlockMeta {
    int user = 0;
    Eigen::Index col_begin = 0;
    Eigen::Index cols = 0;
    double scale = 1.0;
};

/// A realized s x (M*d) forward operator.
struct LinearOperator {
    Matrix matrix;
    ModelKind kind = ModelKind::SharedA;
    std::vector<BlockMeta> blocks;
};

/// The M per-user s x s mismatch matrices seen by an eavesdropper.
struct FadingSet {
    std::vector<Matrix> matrices;

    static FadingSet identity(int M, int s);
};

// Seed discipline. `seed` passed to a builder is the trial-level stream
// (path typically [trial]); within a trial:
//   user m's compression matrix   seed.child(m),        m = 0..M-1
//   channel noise                 seed.child(M+1)
//   user m's fading matrix        seed.child(M+2+m)
// Legitimate and eavesdropper operators built from the same seed therefore
// share compression draws, isolating the fading effect.

/// Stream for the additive channel noise of a trial.
[[nodiscard]] SeedSpec noise_stream(const SeedSpec& trial_seed, int M);

/// Entrywise thresholding: entry i is zeroed iff |g[i]| < delta (boundary
/// values are kept). Requires delta > 0.
Vector sparsify(const Vector& g, double delta);

/// Shared-matrix model: one A ~ s x d standard Gaussian, operator
/// (1/M)(sqrt(a_1) A, ..., sqrt(a_M) A).
LinearOperator build_shared(const SystemParams& params, const SeedSpec& seed);

/// Per-user model: independent B_m with off-diagonal N(0, 1/a_m) and
/// diagonal N(1/sqrt(a_m), 1/a_m) entries, operator
/// (1/M)(sqrt(a_1) B_1, ..., sqrt(a_M) B_M). Realized as B_m =
/// (C_m + I_{s x d})/sqrt(a_m) with C_m standard Gaussian from
/// seed.child(m), so the scaled operator is exactly (C_1 + I, ..., C_M + I).
LinearOperator build_per_user(const SystemParams& params, const SeedSpec& seed);

/// Eavesdropper view of the shared model:
/// (1/M)(sqrt(a_1) H_1 A, ..., sqrt(a_M) H_M A), same A stream as
/// build_shared for equal seeds.
LinearOperator build_eaves_shared(const SystemParams& params, const FadingSet& fading,
                                  const SeedSpec& seed);

/// Eavesdropper view of the per-user model:
/// (1/M)(sqrt(a_1) H_1 B_1, ..., sqrt(a_M) H_M B_M), same B_m streams as
/// build_per_user for equal seeds.
LinearOperator build_eaves_per_user(const SystemParams& params, const FadingSet& fading,
                                    const SeedSpec& seed);

/// M independent s x s standard Gaussian fading matrices, user m from
/// seed.child(M+2+m).
FadingSet sample_gaussian_fading(const SystemParams& params, const SeedSpec& seed);

/// One noisy transmission y = op.matrix * stack(sparsified) + gamma with
/// gamma ~ N(0, sigma_gamma^2) i.i.d. from `seed`.
Vector transmit(const LinearOperator& op, const GradientSet& grads, double sigma_gamma,
                const SeedSpec& seed);

/// The receiver's target (1/M) * sum_m g_m^sp, length d.
Vector mean_target(const GradientSet& grads, int M);

} // namespace otai::models
