#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "tsc/datamodel.hpp"
#include "tsc/tsc_core.hpp"

namespace tsc {

/// Output of the full pipeline. Labels are in {0,...,L_hat-1}; -1 marks a
/// point removed as an outlier upstream. The Laplacian spectrum and the
/// adjacency matrix are kept for diagnostics.
struct ClusterResult {
    std::vector<int> labels;
    int L_hat = 0;
    SymmetricSpectrum spectrum;
    AdjacencyGraph adjacency;
};

/// Symmetric normalized Laplacian L_sym = I - D^{-1/2} A D^{-1/2}.
/// Zero-degree vertices use the convention D_ii^{-1/2} = 0, which leaves
/// their row equal to e_i (eigenvalue 1).
inline Matrix normalized_laplacian(const AdjacencyGraph& graph) {
    const Matrix& a = graph.matrix;
    const Eigen::Index n = a.rows();
    Vector inv_sqrt_deg(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double deg = a.row(i).sum();
        inv_sqrt_deg[i] = deg > 0.0 ? 1.0 / std::sqrt(deg) : 0.0;
    }
    Matrix lap = -(inv_sqrt_deg.asDiagonal() * a * inv_sqrt_deg.asDiagonal());
    lap.diagonal().array() += 1.0;
    // symmetrize away roundoff from the two-sided scaling
    lap = ((lap + lap.transpose()) * 0.5).eval();
    return lap;
}

/// Eigengap heuristic: L_hat = argmax over i in {1,...,max_clusters} of
/// lambda_{i+1} - lambda_i, ties toward the smaller i.
inline int estimate_L(const SymmetricSpectrum& spectrum, int max_clusters) {
    const auto n = spectrum.eigenvalues.size();
    if (max_clusters < 1 || max_clusters > n - 1)
        throw std::invalid_argument("estimate_L: max_clusters outside [1, N-1]");
    int best_i = 1;
    double best_gap = -1.0;
    for (int i = 1; i <= max_clusters; ++i) {
        const double gap = spectrum.eigenvalues[i] - spectrum.eigenvalues[i - 1];
        if (gap > best_gap) {
            best_gap = gap;
            best_i = i;
        }
    }
    return best_i;
}

/// Eigenvectors of L_sym for the L_hat smallest eigenvalues, rows normalized
/// to unit length. All-zero rows (isolated vertices) stay zero; the k-means
/// step assigns them to the nearest centroid.
inline Matrix spectral_embedding(const AdjacencyGraph& graph, int num_clusters) {
    if (num_clusters < 1)
        throw std::invalid_argument("spectral_embedding: L_hat must be >= 1");
    const SymmetricSpectrum spectrum = symmetric_eig(normalized_laplacian(graph));
    Matrix embedding = spectrum.eigenvectors.leftCols(num_clusters);
    for (Eigen::Index i = 0; i < embedding.rows(); ++i) {
        const double norm = embedding.row(i).norm();
        if (norm > 1e-12) embedding.row(i) /= norm;
    }
    return embedding;
}

struct KMeansResult {
    std::vector<int> labels;
    double cost = 0.0;
};

namespace detail {

inline int nearest_centroid(const Matrix& centroids,
                            const Eigen::RowVectorXd& point) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
        const double dist = (centroids.row(c) - point).squaredNorm();
        if (dist < best_dist) {
            best_dist = dist;
            best = static_cast<int>(c);
        }
    }
    return best;
}

inline KMeansResult kmeans_single(const Matrix& points, int k,
                                  SeedStream& stream, int max_iter) {
    const Eigen::Index n = points.rows();
    Matrix centroids(k, points.cols());

    // k-means++ seeding
    centroids.row(0) = points.row(stream.uniform_index(n));
    Vector dist2 = (points.rowwise() - Eigen::RowVectorXd(centroids.row(0)))
                       .rowwise()
                       .squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = dist2.sum();
        Eigen::Index pick = 0;
        if (total > 0.0) {
            double target = stream.uniform() * total;
            for (; pick < n - 1; ++pick) {
                target -= dist2[pick];
                if (target <= 0.0) break;
            }
        } else {
            pick = stream.uniform_index(n);
        }
        centroids.row(c) = points.row(pick);
        dist2 = dist2.cwiseMin(
            (points.rowwise() - Eigen::RowVectorXd(centroids.row(c)))
                .rowwise()
                .squaredNorm());
    }

    std::vector<int> labels(n, 0);
    for (int iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            const int c = nearest_centroid(centroids, points.row(i));
            if (c != labels[i]) {
                labels[i] = c;
                changed = true;
            }
        }
        // recompute centroids; repair empty clusters with the point farthest
        // from its current centroid
        std::vector<Eigen::Index> counts(k, 0);
        Matrix sums = Matrix::Zero(k, points.cols());
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(labels[i]) += points.row(i);
            ++counts[labels[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                centroids.row(c) = sums.row(c) / static_cast<double>(counts[c]);
            } else {
                Eigen::Index farthest = 0;
                double far_dist = -1.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (counts[labels[i]] <= 1) continue;
                    const double d =
                        (points.row(i) - centroids.row(labels[i])).squaredNorm();
                    if (d > far_dist) {
                        far_dist = d;
                        farthest = i;
                    }
                }
                --counts[labels[farthest]];
                sums.row(labels[farthest]) -= points.row(farthest);
                labels[farthest] = c;
                counts[c] = 1;
                centroids.row(c) = points.row(farthest);
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
    }

    KMeansResult result;
    result.labels = std::move(labels);
    result.cost = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        result.cost +=
            (points.row(i) - centroids.row(result.labels[i])).squaredNorm();
    return result;
}

}  // namespace detail

/// Lloyd iterations with k-means++ seeding; best of `restarts` runs by
/// within-cluster sum of squares. Deterministic given the stream.
inline KMeansResult kmeans(const Matrix& points, int k, SeedStream& stream,
                           int restarts = 10, int max_iter = 100) {
    if (k < 1 || points.rows() < k)
        throw std::invalid_argument("kmeans: need 1 <= k <= N");
    KMeansResult best;
    best.cost = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        SeedStream sub = stream.derive(0x6b6d, static_cast<std::uint64_t>(r));
        KMeansResult run = detail::kmeans_single(points, k, sub, max_iter);
        if (run.cost < best.cost) best = std::move(run);
    }
    return best;
}

/// Normalized spectral clustering of (A, L_hat): Laplacian, embedding by the
/// L_hat smallest eigenvectors, k-means on the rows.
inline ClusterResult normalized_spectral_clustering(const AdjacencyGraph& graph,
                                                    int num_clusters,
                                                    SeedStream& stream) {
    ClusterResult result;
    result.adjacency = graph;
    result.spectrum = symmetric_eig(normalized_laplacian(graph));
    result.L_hat = num_clusters;
    const Matrix embedding = spectral_embedding(graph, num_clusters);
    SeedStream km_stream = stream.derive(0x6b6d65616e73ULL);
    result.labels = kmeans(embedding, num_clusters, km_stream).labels;
    return result;
}

/// Options for the end-to-end pipeline.
struct ClusterOptions {
    std::optional<int> pinned_L;       // skip the eigengap step
    std::optional<int> max_clusters;   // default floor(N/2)
    bool normalize = true;
    std::uint64_t seed = 0;
};

/// The full TSC pipeline: row normalization, correlation thresholding,
/// adjacency construction, eigengap model-order estimation, normalized
/// spectral clustering.
inline ClusterResult tsc_cluster(const DataSet& data, int q,
                                 const ClusterOptions& options = {}) {
    const DataSet unit = options.normalize ? normalize_rows(data) : data;
    const NeighborSelection sel = select_neighbors(unit, q);
    const AdjacencyGraph graph = build_adjacency(sel);
    const SymmetricSpectrum spectrum =
        symmetric_eig(normalized_laplacian(graph));

    int num_clusters;
    if (options.pinned_L) {
        num_clusters = *options.pinned_L;
    } else {
        const int n = static_cast<int>(data.size());
        int max_clusters = options.max_clusters
                               ? *options.max_clusters
                               : std::max(1, n / 2);
        max_clusters = std::min(max_clusters, n - 1);
        num_clusters = estimate_L(spectrum, max_clusters);
    }

    SeedStream stream(options.seed);
    ClusterResult result = normalized_spectral_clustering(graph, num_clusters, stream);
    result.spectrum = spectrum;
    return result;
}

}  // namespace tsc
