#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "tsc/datamodel.hpp"

namespace tsc {

/// Result of correlation thresholding: for each point j the index set S_j of
/// its q strongest correlations and the matching magnitudes |<x_j, x_i>|.
struct NeighborSelection {
    int q = 0;
    std::vector<std::vector<int>> neighbor_sets;       // S_j, size q each
    std::vector<std::vector<double>> magnitudes;       // aligned with S_j
};

/// Symmetric nonnegative adjacency with zero diagonal; at most 2q nonzeros
/// per row.
struct AdjacencyGraph {
    Matrix matrix;
};

/// For each point, keep the q largest absolute correlations to the other
/// points. Ties at the q-th rank are broken toward the smaller index so runs
/// are reproducible. Rows of `data` must be unit-norm.
inline NeighborSelection select_neighbors(const DataSet& data, int q) {
    const Eigen::Index n = data.size();
    if (q < 1 || q > n - 1)
        throw InvalidQ("select_neighbors: q=" + std::to_string(q) +
                       " outside [1, N-1] with N=" + std::to_string(n));

    // One N x N Gram computation, reused for every row.
    const Matrix gram = data.points * data.points.transpose();

    NeighborSelection sel;
    sel.q = q;
    sel.neighbor_sets.resize(n);
    sel.magnitudes.resize(n);

    std::vector<int> order(n - 1);
    for (Eigen::Index j = 0; j < n; ++j) {
        int k = 0;
        for (int i = 0; i < n; ++i)
            if (i != j) order[k++] = i;
        const auto row = gram.row(j);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double va = std::abs(row[a]), vb = std::abs(row[b]);
            if (va != vb) return va > vb;
            return a < b;
        });
        sel.neighbor_sets[j].assign(order.begin(), order.begin() + q);
        sel.magnitudes[j].resize(q);
        for (int t = 0; t < q; ++t)
            sel.magnitudes[j][t] = std::abs(row[sel.neighbor_sets[j][t]]);
    }
    return sel;
}

/// A_ij = [z_j]_i + [z_i]_j. Symmetric by construction, zero diagonal.
inline AdjacencyGraph build_adjacency(const NeighborSelection& sel) {
    const auto n = static_cast<Eigen::Index>(sel.neighbor_sets.size());
    Matrix z = Matrix::Zero(n, n);  // z(i, j) = [z_j]_i
    for (Eigen::Index j = 0; j < n; ++j)
        for (std::size_t t = 0; t < sel.neighbor_sets[j].size(); ++t)
            z(sel.neighbor_sets[j][t], j) = sel.magnitudes[j][t];
    AdjacencyGraph graph;
    graph.matrix = z + z.transpose();
    return graph;
}

}  // namespace tsc
