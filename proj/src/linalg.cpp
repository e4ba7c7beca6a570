#include "otai/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

namespace otai::linalg {

Matrix sample_gaussian(Eigen::Index rows, Eigen::Index cols, double mean, double std,
                       const SeedSpec& seed) {
    if (rows < 1 || cols < 1) {
        throw ParameterError("sample_gaussian: rows and cols must be >= 1, got " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (!(std > 0.0)) {
        throw ParameterError("sample_gaussian: std must be > 0, got " + std::to_string(std));
    }
    const Stream stream(seed);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const std::uint64_t base = static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols);
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = mean + std * stream.normal(base + static_cast<std::uint64_t>(j));
        }
    }
    return m;
}

Matrix add_rect_identity(const Matrix& m) {
    if (m.rows() > m.cols()) {
        throw ShapeError("add_rect_identity: need rows <= cols, got " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
    }
    Matrix out = m;
    out.diagonal().array() += 1.0;
    return out;
}

Matrix hconcat(const std::vector<Matrix>& blocks) {
    if (blocks.empty()) {
        throw ParameterError("hconcat: empty block list");
    }
    const Eigen::Index rows = blocks.front().rows();
    Eigen::Index cols = 0;
    for (const Matrix& b : blocks) {
        if (b.rows() != rows) {
            throw ShapeError("hconcat: row mismatch, " + std::to_string(b.rows()) + " vs " +
                             std::to_string(rows));
        }
        cols += b.cols();
    }
    Matrix out(rows, cols);
    Eigen::Index at = 0;
    for (const Matrix& b : blocks) {
        out.middleCols(at, b.cols()) = b;
        at += b.cols();
    }
    return out;
}

Matrix scale(const Matrix& m, double c) {
    return m * c;
}

SingularSpectrum singular_values(const Matrix& m) {
    Eigen::BDCSVD<Matrix> svd(m);
    if (svd.info() != Eigen::Success) {
        throw ComputationError("singular_values: SVD did not converge for " +
                               std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                               " input");
    }
    const auto& sv = svd.singularValues();
    return SingularSpectrum(sv.data(), sv.data() + sv.size());
}

CondNumber condition_number(const Matrix& m) {
    if (m.rows() > m.cols()) {
        throw ShapeError("condition_number: need rows <= cols (wide or square), got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    const SingularSpectrum sv = singular_values(m);
    const double sigma_max = sv.front();
    const double sigma_min = sv.back();
    const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                       std::numeric_limits<double>::epsilon() * sigma_max;
    if (sigma_max == 0.0 || sigma_min < tol) {
        return {std::numeric_limits<double>::infinity(), true};
    }
    return {sigma_max / sigma_min, false};
}

} // namespace otai::linalg
