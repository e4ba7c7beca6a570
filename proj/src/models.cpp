#include "otai/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace otai::models {

SystemParams SystemParams::uniform(int d, int s, int M, double alpha, double sigma_gamma,
                                   double delta) {
    SystemParams p;
    p.d = d;
    p.s = s;
    p.M = M;
    p.alphas.assign(static_cast<std::size_t>(std::max(M, 0)), alpha);
    p.sigma_gamma = sigma_gamma;
    p.delta = delta;
    return p;
}

SystemParams SystemParams::with_users(int M) const {
    SystemParams p = *this;
    p.M = M;
    const std::size_t n = static_cast<std::size_t>(std::max(M, 0));
    const bool constant =
        !alphas.empty() &&
        std::all_of(alphas.begin(), alphas.end(), [&](double a) { return a == alphas.front(); });
    if (alphas.size() >= n) {
        p.alphas.assign(alphas.begin(), alphas.begin() + static_cast<std::ptrdiff_t>(n));
    } else if (constant) {
        p.alphas.assign(n, alphas.front());
    } else {
        throw ParameterError("with_users: cannot extend a non-constant alpha list from " +
                             std::to_string(alphas.size()) + " to " + std::to_string(M) +
                             " users");
    }
    return p;
}

void SystemParams::validate() const {
    std::vector<std::string> problems;
    if (d < 1) problems.push_back("d must be >= 1 (got " + std::to_string(d) + ")");
    if (s < 1) problems.push_back("s must be >= 1 (got " + std::to_string(s) + ")");
    if (M < 1) problems.push_back("M must be >= 1 (got " + std::to_string(M) + ")");
    if (d >= 1 && s >= 1 && M >= 1 &&
        static_cast<long long>(s) > static_cast<long long>(M) * d) {
        problems.push_back("need s <= M*d (got s=" + std::to_string(s) + ", M*d=" +
                           std::to_string(static_cast<long long>(M) * d) + ")");
    }
    if (M >= 1 && alphas.size() != static_cast<std::size_t>(M)) {
        problems.push_back("alphas must list exactly M values (got " +
                           std::to_string(alphas.size()) + " for M=" + std::to_string(M) + ")");
    }
    for (std::size_t m = 0; m < alphas.size(); ++m) {
        if (!(alphas[m] > 0.0)) {
            problems.push_back("alpha_" + std::to_string(m) + " must be > 0 (got " +
                               std::to_string(alphas[m]) + ")");
            break;
        }
    }
    if (!(sigma_gamma >= 0.0)) problems.push_back("sigma_gamma must be >= 0");
    if (!(delta > 0.0)) problems.push_back("delta must be > 0");
    if (!problems.empty()) {
        std::string msg = "invalid SystemParams:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw ParameterError(msg);
    }
}

GradientSet::GradientSet(std::vector<Vector> vectors) : vectors_(std::move(vectors)) {
    if (vectors_.empty()) throw ParameterError("GradientSet: need at least one user");
    for (const Vector& v : vectors_) {
        if (v.size() != vectors_.front().size()) {
            throw ShapeError("GradientSet: all user vectors must share length");
        }
    }
}

GradientSet GradientSet::gaussian(int M, int d, const SeedSpec& seed) {
    if (M < 1 || d < 1) throw ParameterError("GradientSet::gaussian: need M >= 1 and d >= 1");
    std::vector<Vector> vs;
    vs.reserve(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
        vs.push_back(linalg::sample_gaussian(d, 1, 0.0, 1.0,
                                             seed.child(static_cast<std::uint64_t>(m))));
    }
    return GradientSet(std::move(vs));
}

GradientSet GradientSet::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open gradient file: " + path);
    std::vector<Vector> vs;
    std::string line;
    bool header_checked = false;
    bool has_user_column = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!header_checked) {
            header_checked = true;
            char* end = nullptr;
            std::strtod(fields.front().c_str(), &end);
            if (end == fields.front().c_str()) {
                // non-numeric first field: header row
                has_user_column = fields.front() == "user";
                continue;
            }
        }
        const std::size_t skip = has_user_column ? 1 : 0;
        if (fields.size() <= skip) throw IoError("gradient file row with no values: " + path);
        Vector v(static_cast<Eigen::Index>(fields.size() - skip));
        for (std::size_t i = skip; i < fields.size(); ++i) {
            char* end = nullptr;
            const double x = std::strtod(fields[i].c_str(), &end);
            if (end == fields[i].c_str() || !std::isfinite(x)) {
                throw IoError("gradient file has a non-finite or malformed value '" + fields[i] +
                              "': " + path);
            }
            v(static_cast<Eigen::Index>(i - skip)) = x;
        }
        vs.push_back(std::move(v));
    }
    if (vs.empty()) throw IoError("gradient file has no data rows: " + path);
    return GradientSet(std::move(vs));
}

void GradientSet::sparsify(double delta) {
    std::vector<Vector> sp;
    sp.reserve(vectors_.size());
    for (const Vector& v : vectors_) sp.push_back(models::sparsify(v, delta));
    sparsified_ = std::move(sp);
}

const std::vector<Vector>& GradientSet::sparsified() const {
    if (!sparsified_) throw ParameterError("GradientSet: sparsify() has not been called");
    return *sparsified_;
}

Vector GradientSet::stacked_sparsified() const {
    const auto& sp = sparsified();
    Vector x(static_cast<Eigen::Index>(sp.size()) * sp.front().size());
    Eigen::Index at = 0;
    for (const Vector& v : sp) {
        x.segment(at, v.size()) = v;
        at += v.size();
    }
    return x;
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::SharedA: return "shared";
        case ModelKind::PerUserB: return "per-user";
        case ModelKind::EavesSharedA: return "eaves-shared";
        case ModelKind::EavesPerUserB: return "eaves-per-user";
    }
    return "?";
}

FadingSet FadingSet::identity(int M, int s) {
    FadingSet f;
    f.matrices.assign(static_cast<std::size_t>(M), Matrix::Identity(s, s));
    return f;
}

SeedSpec noise_stream(const SeedSpec& trial_seed, int M) {
    return trial_seed.child(static_cast<std::uint64_t>(M) + 1);
}

Vector sparsify(const Vector& g, double delta) {
    if (!(delta > 0.0)) {
        throw ParameterError("sparsify: delta must be > 0, got " + std::to_string(delta));
    }
    Vector out = g;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (std::fabs(out(i)) < delta) out(i) = 0.0;
    }
    return out;
}

namespace {

void check_fading(const SystemParams& params, const FadingSet& fading) {
    if (fading.matrices.size() != static_cast<std::size_t>(params.M)) {
        throw ShapeError("fading set has " + std::to_string(fading.matrices.size()) +
                         " matrices, expected M=" + std::to_string(params.M));
    }
    for (const Matrix& h : fading.matrices) {
        if (h.rows() != params.s || h.cols() != params.s) {
            throw ShapeError("fading matrix must be s x s = " + std::to_string(params.s) + "x" +
                             std::to_string(params.s) + ", got " + std::to_string(h.rows()) +
                             "x" + std::to_string(h.cols()));
        }
    }
}

LinearOperator assemble(const SystemParams& params, ModelKind kind,
                        const std::vector<Matrix>& user_blocks) {
    LinearOperator op;
    op.kind = kind;
    op.blocks.reserve(user_blocks.size());
    Eigen::Index at = 0;
    for (int m = 0; m < params.M; ++m) {
        op.blocks.push_back({m, at, static_cast<Eigen::Index>(params.d),
                             std::sqrt(params.alphas[static_cast<std::size_t>(m)]) /
                                 static_cast<double>(params.M)});
        at += params.d;
    }
    op.matrix = linalg::hconcat(user_blocks);
    return op;
}

} // namespace

LinearOperator build_shared(const SystemParams& params, const SeedSpec& seed) {
    params.validate();
    const Matrix a = linalg::sample_gaussian(params.s, params.d, 0.0, 1.0, seed.child(0));
    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<std::size_t>(params.M));
    for (int m = 0; m < params.M; ++m) {
        blocks.push_back(linalg::scale(a, std::sqrt(params.alphas[static_cast<std::size_t>(m)]) /
                                              static_cast<double>(params.M)));
    }
    return assemble(params, ModelKind::SharedA, blocks);
}

LinearOperator build_per_user(const SystemParams& params, const SeedSpec& seed) {
    params.validate();
    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<std::size_t>(params.M));
    for (int m = 0; m < params.M; ++m) {
        // sqrt(alpha_m) B_m = C_m + I exactly; alpha cancels out of the block.
        const Matrix c = linalg::sample_gaussian(params.s, params.d, 0.0, 1.0,
                                                 seed.child(static_cast<std::uint64_t>(m)));
        blocks.push_back(linalg::scale(linalg::add_rect_identity(c),
                                       1.0 / static_cast<double>(params.M)));
    }
    return assemble(params, ModelKind::PerUserB, blocks);
}

LinearOperator build_eaves_shared(const SystemParams& params, const FadingSet& fading,
                                  const SeedSpec& seed) {
    params.validate();
    check_fading(params, fading);
    const Matrix a = linalg::sample_gaussian(params.s, params.d, 0.0, 1.0, seed.child(0));
    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<std::size_t>(params.M));
    for (int m = 0; m < params.M; ++m) {
        blocks.push_back(linalg::scale(fading.matrices[static_cast<std::size_t>(m)] * a,
                                       std::sqrt(params.alphas[static_cast<std::size_t>(m)]) /
                                           static_cast<double>(params.M)));
    }
    return assemble(params, ModelKind::EavesSharedA, blocks);
}

LinearOperator build_eaves_per_user(const SystemParams& params, const FadingSet& fading,
                                    const SeedSpec& seed) {
    params.validate();
    check_fading(params, fading);
    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<std::size_t>(params.M));
    for (int m = 0; m < params.M; ++m) {
        const Matrix c = linalg::sample_gaussian(params.s, params.d, 0.0, 1.0,
                                                 seed.child(static_cast<std::uint64_t>(m)));
        blocks.push_back(
            linalg::scale(fading.matrices[static_cast<std::size_t>(m)] * linalg::add_rect_identity(c),
                          1.0 / static_cast<double>(params.M)));
    }
    return assemble(params, ModelKind::EavesPerUserB, blocks);
}

FadingSet sample_gaussian_fading(const SystemParams& params, const SeedSpec& seed) {
    params.validate();
    FadingSet f;
    f.matrices.reserve(static_cast<std::size_t>(params.M));
    for (int m = 0; m < params.M; ++m) {
        f.matrices.push_back(linalg::sample_gaussian(
            params.s, params.s, 0.0, 1.0,
            seed.child(static_cast<std::uint64_t>(params.M) + 2 + static_cast<std::uint64_t>(m))));
    }
    return f;
}

Vector transmit(const LinearOperator& op, const GradientSet& grads, double sigma_gamma,
                const SeedSpec& seed) {
    const Vector x = grads.stacked_sparsified();
    if (x.size() != op.matrix.cols()) {
        throw ShapeError("transmit: operator expects " + std::to_string(op.matrix.cols()) +
                         " stacked entries, gradients provide " + std::to_string(x.size()));
    }
    Vector y = op.matrix * x;
    const Stream noise(seed);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        y(i) += sigma_gamma * noise.normal(static_cast<std::uint64_t>(i));
    }
    return y;
}

Vector mean_target(const GradientSet& grads, int M) {
    const auto& sp = grads.sparsified();
    if (static_cast<int>(sp.size()) != M) {
        throw ShapeError("mean_target: gradient set has " + std::to_string(sp.size()) +
                         " users, expected M=" + std::to_string(M));
    }
    Vector t = Vector::Zero(sp.front().size());
    for (const Vector& v : sp) t += v;
    return t / static_cast<double>(M);
}

} // namespace otai::models
