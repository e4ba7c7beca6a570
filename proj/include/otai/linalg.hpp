#pragma once

#include <vector>

#include <Eigen/Core>

#include "otai/errors.hpp"
#include "otai/rng.hpp"

namespace otai::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Singular values sorted non-increasing, length min(rows, cols).
using SingularSpectrum = std::vector<double>;

/// Condition number of a wide or square matrix. `value` is +infinity when
/// the smallest singular value falls below the numerical-rank tolerance,
/// in which case `rank_deficient` is set instead of throwing.
struct CondNumber {
    double value = 0.0;
    bool rank_deficient = false;
};

/// rows x cols matrix with i.i.d. Normal(mean, std^2) entries, fully
/// determined by `seed`. Entry (i,j) consumes stream position i*cols + j.
Matrix sample_gaussian(Eigen::Index rows, Eigen::Index cols, double mean, double std,
                       const SeedSpec& seed);

/// m + I_{rows x cols}: adds 1 to each main-diagonal entry. Requires a wide
/// or square input.
Matrix add_rect_identity(const Matrix& m);

/// Horizontal concatenation of equal-height blocks.
Matrix hconcat(const std::vector<Matrix>& blocks);

/// Every entry multiplied by c.
Matrix scale(const Matrix& m, double c);

/// Singular values via dense SVD, non-increasing. Throws ComputationError
/// if the SVD fails to converge.
SingularSpectrum singular_values(const Matrix& m);

/// sigma_max / sigma_min over the min-dimension spectrum. Requires
/// rows <= cols. sigma_min below max(rows,cols)*eps*sigma_max counts as
/// zero and yields the infinity sentinel.
CondNumber condition_number(const Matrix& m);

} // namespace otai::linalg
