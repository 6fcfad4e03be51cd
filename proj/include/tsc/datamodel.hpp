#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct ZeroPoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidQ : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EmptyAfterRemoval : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LengthMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotOrthonormal : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DegenerateErasure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A set of N points in R^m, one point per row. Labels, when present, are
/// cluster ids in {0,...,L-1}; -1 marks an outlier.
struct DataSet {
    Matrix points;            // N x m
    std::vector<int> labels;  // empty or size N

    Eigen::Index size() const { return points.rows(); }
    Eigen::Index dim() const { return points.cols(); }
    bool has_labels() const { return !labels.empty(); }
};

namespace detail {

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t hash64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// splitmix64 step
inline std::uint64_t mix64(std::uint64_t& state) {
    return hash64(state += 0x9e3779b97f4a7c15ULL);
}

}  // namespace detail

/// Deterministic random stream. Identical seed and call sequence give
/// bit-identical output on every platform; no libc distributions involved.
///
/// Independent sub-streams are derived by counter: derive(a, b, ...) folds the
/// indices into the state, so a harness can hand each (trial, purpose) pair
/// its own stream regardless of execution order.
class SeedStream {
public:
    explicit SeedStream(std::uint64_t seed)
        : state_(detail::hash64(seed ^ 0xa0761d6478bd642fULL)) {}

    template <typename... Ix>
    SeedStream derive(std::uint64_t first, Ix... rest) const {
        std::uint64_t s = state_;
        fold(s, first, static_cast<std::uint64_t>(rest)...);
        return SeedStream(s);
    }

    std::uint64_t next_u64() { return detail::mix64(state_); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        // modulo bias is below 2^-50 for any n at desk scale
        return next_u64() % n;
    }

    /// Standard normal via Box-Muller; one spare cached per pair.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double two_pi = 6.283185307179586476925286766559;
        spare_ = r * std::sin(two_pi * u2);
        has_spare_ = true;
        return r * std::cos(two_pi * u2);
    }

private:
    static void fold(std::uint64_t&) {}
    template <typename... Ix>
    static void fold(std::uint64_t& s, std::uint64_t v, Ix... rest) {
        s = detail::hash64(s ^ (v + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2)));
        fold(s, rest...);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Full spectrum of a symmetric matrix, eigenvalues ascending.
struct SymmetricSpectrum {
    Vector eigenvalues;
    Matrix eigenvectors;  // columns aligned with eigenvalues
};

/// Scale every row to unit Euclidean norm. Labels pass through.
inline DataSet normalize_rows(const DataSet& data) {
    DataSet out = data;
    for (Eigen::Index i = 0; i < out.points.rows(); ++i) {
        const double norm = out.points.row(i).norm();
        if (norm < 1e-12)
            throw ZeroPoint("normalize_rows: row " + std::to_string(i) +
                            " has near-zero norm");
        out.points.row(i) /= norm;
    }
    return out;
}

/// i.i.d. zero-mean Gaussian entries with the given per-entry variance.
inline Vector sample_gaussian_vector(Eigen::Index dim, double variance,
                                     SeedStream& stream) {
    const double sd = std::sqrt(variance);
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = sd * stream.gaussian();
    return v;
}

/// Uniform draw from the unit sphere of R^dim (normalized Gaussian).
inline Vector sample_unit_sphere(Eigen::Index dim, SeedStream& stream) {
    Vector v = sample_gaussian_vector(dim, 1.0, stream);
    double norm = v.norm();
    while (norm < 1e-12) {
        v = sample_gaussian_vector(dim, 1.0, stream);
        norm = v.norm();
    }
    return v / norm;
}

/// Full eigendecomposition of a symmetric matrix, eigenvalues ascending.
inline SymmetricSpectrum symmetric_eig(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("symmetric_eig: eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace tsc
