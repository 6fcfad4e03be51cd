#pragma once

#include <numeric>
#include <vector>

#include "tsc/datamodel.hpp"

namespace tsc {

enum class CoefficientModel { gaussian_inv_d, sphere_uniform };
enum class BasisModel { haar_orthonormal, gaussian_inv_m };

/// Parameters of the synthetic data models: L subspaces of common dimension d
/// in R^m, n points each, s erasures per point, N0 sphere-uniform outliers.
struct SyntheticSpec {
    int m = 50;
    int L = 2;
    int d = 5;
    int n = 50;
    CoefficientModel coefficient_model = CoefficientModel::sphere_uniform;
    BasisModel basis_model = BasisModel::haar_orthonormal;
    int s = 0;
    int N0 = 0;
    std::uint64_t seed = 0;
    bool shuffle = false;
};

struct SyntheticGroundTruth {
    std::vector<Matrix> bases;               // L matrices, m x d
    std::vector<Vector> coefficients;        // per inlier point, length d
    std::vector<int> labels;                 // -1 for outliers
    std::vector<std::vector<int>> erasure_masks;
    std::vector<int> outlier_indices;
    Matrix raw_points;                       // pre-erasure, pre-normalization
};

/// Haar-distributed column-orthonormal m x d matrix: QR of an i.i.d. Gaussian
/// draw with the R diagonal forced positive, which fixes the sign ambiguity.
inline Matrix random_orthonormal_basis(int m, int d, SeedStream& stream) {
    if (d > m) throw std::invalid_argument("random_orthonormal_basis: d > m");
    Matrix g(m, d);
    for (int j = 0; j < d; ++j)
        g.col(j) = sample_gaussian_vector(m, 1.0, stream);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(m, d);
    const Matrix r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

/// m x d matrix with i.i.d. N(0, 1/m) entries (approximately orthonormal for
/// m >> d).
inline Matrix random_gaussian_basis(int m, int d, SeedStream& stream) {
    if (d > m) throw std::invalid_argument("random_gaussian_basis: d > m");
    Matrix u(m, d);
    for (int j = 0; j < d; ++j)
        u.col(j) = sample_gaussian_vector(m, 1.0 / m, stream);
    return u;
}

/// Deterministic bases spanned by disjoint blocks of standard basis vectors;
/// cross-subspace correlations are then exactly zero. Requires L*d <= m.
inline std::vector<Matrix> coordinate_block_bases(int m, int L, int d) {
    if (L * d > m)
        throw std::invalid_argument("coordinate_block_bases: L*d > m");
    std::vector<Matrix> bases;
    bases.reserve(L);
    for (int l = 0; l < L; ++l) {
        Matrix u = Matrix::Zero(m, d);
        for (int j = 0; j < d; ++j) u(l * d + j, j) = 1.0;
        bases.push_back(std::move(u));
    }
    return bases;
}

/// Per point, zero out a uniformly random size-s subset of coordinates.
/// Returns the updated data and the masks.
inline std::pair<DataSet, std::vector<std::vector<int>>> apply_erasures(
    const DataSet& data, int s, SeedStream& stream) {
    const int m = static_cast<int>(data.dim());
    if (s < 0 || s >= m)
        throw std::invalid_argument("apply_erasures: need 0 <= s < m");
    DataSet out = data;
    std::vector<std::vector<int>> masks(data.size());
    if (s == 0) return {out, masks};

    std::vector<int> indices(m);
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        std::iota(indices.begin(), indices.end(), 0);
        // partial Fisher-Yates: first s entries are a uniform s-subset
        for (int t = 0; t < s; ++t) {
            const int swap_with =
                t + static_cast<int>(stream.uniform_index(m - t));
            std::swap(indices[t], indices[swap_with]);
        }
        masks[i].assign(indices.begin(), indices.begin() + s);
        std::sort(masks[i].begin(), masks[i].end());
        for (int idx : masks[i]) out.points(i, idx) = 0.0;
    }
    return {out, masks};
}

namespace detail {

inline Vector sample_coefficients(const SyntheticSpec& spec, SeedStream& stream) {
    switch (spec.coefficient_model) {
        case CoefficientModel::gaussian_inv_d:
            return sample_gaussian_vector(spec.d, 1.0 / spec.d, stream);
        case CoefficientModel::sphere_uniform:
            return sample_unit_sphere(spec.d, stream);
    }
    throw std::logic_error("unknown coefficient model");
}

}  // namespace detail

/// Draw a dataset from the spec: L*n inlier points x = U^(l) a, N0 outliers
/// uniform on the unit sphere, erasures if s > 0, then row normalization.
/// When `fixed_bases` is given it overrides the basis model (used by the
/// coordinate-block fixture).
inline std::pair<DataSet, SyntheticGroundTruth> generate_dataset(
    const SyntheticSpec& spec,
    const std::vector<Matrix>* fixed_bases = nullptr) {
    if (spec.d > spec.m || spec.n < 1 || spec.L < 1 || spec.N0 < 0)
        throw std::invalid_argument("generate_dataset: invalid spec");

    SeedStream root(spec.seed);
    SyntheticGroundTruth truth;

    if (fixed_bases) {
        if (static_cast<int>(fixed_bases->size()) != spec.L)
            throw std::invalid_argument("generate_dataset: basis count != L");
        truth.bases = *fixed_bases;
    } else {
        for (int l = 0; l < spec.L; ++l) {
            SeedStream basis_stream = root.derive(1, static_cast<std::uint64_t>(l));
            truth.bases.push_back(
                spec.basis_model == BasisModel::haar_orthonormal
                    ? random_orthonormal_basis(spec.m, spec.d, basis_stream)
                    : random_gaussian_basis(spec.m, spec.d, basis_stream));
        }
    }

    const int num_inliers = spec.L * spec.n;
    const int total = num_inliers + spec.N0;
    DataSet data;
    data.points.resize(total, spec.m);
    data.labels.resize(total);
    truth.raw_points.resize(total, spec.m);

    int row = 0;
    for (int l = 0; l < spec.L; ++l) {
        for (int j = 0; j < spec.n; ++j, ++row) {
            SeedStream point_stream =
                root.derive(2, static_cast<std::uint64_t>(l),
                            static_cast<std::uint64_t>(j));
            Vector coeff = detail::sample_coefficients(spec, point_stream);
            data.points.row(row) = (truth.bases[l] * coeff).transpose();
            truth.coefficients.push_back(std::move(coeff));
            data.labels[row] = l;
        }
    }
    for (int j = 0; j < spec.N0; ++j, ++row) {
        SeedStream point_stream = root.derive(3, static_cast<std::uint64_t>(j));
        data.points.row(row) =
            sample_unit_sphere(spec.m, point_stream).transpose();
        data.labels[row] = -1;
        truth.outlier_indices.push_back(row);
    }
    truth.labels = data.labels;
    truth.raw_points = data.points;

    if (spec.s > 0) {
        SeedStream erasure_stream = root.derive(4);
        auto [erased, masks] = apply_erasures(data, spec.s, erasure_stream);
        for (Eigen::Index i = 0; i < erased.size(); ++i)
            if (erased.points.row(i).norm() < 1e-12)
                throw DegenerateErasure(
                    "generate_dataset: point " + std::to_string(i) +
                    " is zero after erasure");
        data = std::move(erased);
        truth.erasure_masks = std::move(masks);
    } else {
        truth.erasure_masks.assign(total, {});
    }

    data = normalize_rows(data);

    if (spec.shuffle) {
        SeedStream shuffle_stream = root.derive(5);
        std::vector<int> perm(total);
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = total - 1; i > 0; --i) {
            const int j = static_cast<int>(shuffle_stream.uniform_index(i + 1));
            std::swap(perm[i], perm[j]);
        }
        DataSet shuffled;
        shuffled.points.resize(total, spec.m);
        shuffled.labels.resize(total);
        Matrix raw(total, spec.m);
        std::vector<Vector> coeffs(truth.coefficients.size());
        std::vector<std::vector<int>> masks(total);
        std::vector<int> outliers;
        for (int i = 0; i < total; ++i) {
            shuffled.points.row(i) = data.points.row(perm[i]);
            shuffled.labels[i] = data.labels[perm[i]];
            raw.row(i) = truth.raw_points.row(perm[i]);
            masks[i] = truth.erasure_masks[perm[i]];
            if (shuffled.labels[i] == -1) outliers.push_back(i);
        }
        // coefficients stay aligned with inlier positions only when unshuffled;
        // after a shuffle they are keyed by the original order, so reorder the
        // inlier subset too
        std::vector<Vector> shuffled_coeffs;
        for (int i = 0; i < total; ++i)
            if (perm[i] < num_inliers)
                shuffled_coeffs.push_back(truth.coefficients[perm[i]]);
        data = std::move(shuffled);
        truth.raw_points = std::move(raw);
        truth.erasure_masks = std::move(masks);
        truth.outlier_indices = std::move(outliers);
        truth.coefficients = std::move(shuffled_coeffs);
        truth.labels = data.labels;
    }

    return {data, truth};
}

}  // namespace tsc
