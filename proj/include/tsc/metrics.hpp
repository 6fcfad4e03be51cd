#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <vector>

#include "tsc/datamodel.hpp"
#include "tsc/tsc_core.hpp"

namespace tsc {

namespace detail {

/// Minimum-cost assignment on a square cost matrix (Jonker-Volgenant style
/// shortest augmenting paths). Returns assignment[row] = column.
inline std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, std::numeric_limits<double>::max());
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = std::numeric_limits<double>::max();
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> assignment(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) assignment[p[j] - 1] = j - 1;
    return assignment;
}

inline std::vector<int> compact_ids(const std::vector<int>& labels,
                                    std::map<int, int>& id_map) {
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] =
            id_map.try_emplace(labels[i], static_cast<int>(id_map.size()));
        out[i] = it->second;
    }
    return out;
}

}  // namespace detail

/// Misclassified fraction under the best injective matching of cluster ids
/// (optimal assignment on the confusion matrix). Label -1 is the outlier
/// class and is scored against -1 directly, outside the matching.
inline double clustering_error(const std::vector<int>& predicted,
                               const std::vector<int>& truth) {
    if (predicted.size() != truth.size())
        throw LengthMismatch("clustering_error: label vectors differ in length");
    const std::size_t n = truth.size();
    if (n == 0) return 0.0;

    std::size_t misclassified = 0;
    std::vector<int> pred_in, truth_in;
    for (std::size_t i = 0; i < n; ++i) {
        if (truth[i] == -1 || predicted[i] == -1) {
            if (truth[i] != predicted[i]) ++misclassified;
        } else {
            pred_in.push_back(predicted[i]);
            truth_in.push_back(truth[i]);
        }
    }

    if (!truth_in.empty()) {
        std::map<int, int> tmap, pmap;
        const std::vector<int> t = detail::compact_ids(truth_in, tmap);
        const std::vector<int> p = detail::compact_ids(pred_in, pmap);
        const int k = static_cast<int>(std::max(tmap.size(), pmap.size()));
        // negated counts: minimizing cost maximizes matched points
        std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
        for (std::size_t i = 0; i < t.size(); ++i) cost[t[i]][p[i]] -= 1.0;
        const std::vector<int> assignment = detail::hungarian(cost);
        double matched = 0.0;
        for (int r = 0; r < k; ++r) matched -= cost[r][assignment[r]];
        misclassified += t.size() - static_cast<std::size_t>(matched);
    }
    return static_cast<double>(misclassified) / static_cast<double>(n);
}

/// 0 if the model order estimate is correct, else 1.
inline int estimation_error(int L_hat, int L) {
    if (L_hat < 1 || L < 1)
        throw std::invalid_argument("estimation_error: counts must be >= 1");
    return L_hat == L ? 0 : 1;
}

/// (1/N) sum_i (1 - ||b_within|| / ||b_i||) where b_i is column i of the
/// adjacency matrix and b_within its entries from the same ground-truth
/// cluster. Empty columns contribute the maximal term 1.
inline double feature_detection_error(const AdjacencyGraph& graph,
                                      const std::vector<int>& truth) {
    const Eigen::Index n = graph.matrix.rows();
    if (static_cast<Eigen::Index>(truth.size()) != n)
        throw LengthMismatch("feature_detection_error: truth length != N");
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        // accumulate both sums in one pass so a column with zero leakage
        // yields a ratio of exactly 1
        double within_sq = 0.0, total_sq = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double v = graph.matrix(j, i);
            total_sq += v * v;
            if (truth[j] == truth[i]) within_sq += v * v;
        }
        if (total_sq == 0.0) {
            total += 1.0;
            continue;
        }
        total += std::max(0.0, 1.0 - std::sqrt(within_sq / total_sq));
    }
    return total / static_cast<double>(n);
}

/// True iff (i) every nonzero A_ij connects same-cluster points and (ii)
/// every point has at least q nonzero same-cluster connections.
inline bool check_subspace_detection_property(const AdjacencyGraph& graph,
                                              const std::vector<int>& truth,
                                              int q) {
    const Eigen::Index n = graph.matrix.rows();
    if (static_cast<Eigen::Index>(truth.size()) != n)
        throw LengthMismatch("check_subspace_detection_property: length mismatch");
    for (Eigen::Index i = 0; i < n; ++i) {
        int within = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (graph.matrix(i, j) == 0.0) continue;
            if (truth[i] != truth[j]) return false;
            ++within;
        }
        if (within < q) return false;
    }
    return true;
}

namespace detail {

inline void require_orthonormal(const Matrix& u, const char* who) {
    const Matrix gram = u.transpose() * u;
    const double dev =
        (gram - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-8)
        throw NotOrthonormal(std::string(who) + ": basis not column-orthonormal");
}

inline Vector cross_singular_values(const Matrix& u, const Matrix& v,
                                    const char* who) {
    require_orthonormal(u, who);
    require_orthonormal(v, who);
    Eigen::JacobiSVD<Matrix> svd(u.transpose() * v);
    return svd.singularValues();
}

}  // namespace detail

/// affp(S_k, S_l) = spectral norm of U^T V; equals cos(theta_1).
inline double affinity_affp(const Matrix& u, const Matrix& v) {
    return detail::cross_singular_values(u, v, "affinity_affp")[0];
}

/// aff(S_k, S_l) = Frobenius norm of U^T V divided by sqrt(d).
inline double affinity_aff(const Matrix& u, const Matrix& v) {
    detail::require_orthonormal(u, "affinity_aff");
    detail::require_orthonormal(v, "affinity_aff");
    if (u.cols() != v.cols())
        throw std::invalid_argument("affinity_aff: subspace dimensions differ");
    return (u.transpose() * v).norm() / std::sqrt(static_cast<double>(u.cols()));
}

/// Principal angles theta_1 <= ... <= theta_d between the column spans,
/// theta_i = arccos(sigma_i) with singular values clamped to [0, 1].
inline Vector principal_angles(const Matrix& u, const Matrix& v) {
    const Vector sigma = detail::cross_singular_values(u, v, "principal_angles");
    Vector angles(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        angles[i] = std::acos(std::clamp(sigma[i], 0.0, 1.0));
    std::sort(angles.data(), angles.data() + angles.size());
    return angles;
}

/// Largest pairwise aff across the given bases.
inline double max_pairwise_aff(const std::vector<Matrix>& bases) {
    double max_aff = 0.0;
    for (std::size_t k = 0; k < bases.size(); ++k)
        for (std::size_t l = k + 1; l < bases.size(); ++l)
            max_aff = std::max(max_aff, affinity_aff(bases[k], bases[l]));
    return max_aff;
}

/// Largest pairwise affp across the given bases.
inline double max_pairwise_affp(const std::vector<Matrix>& bases) {
    double max_affp = 0.0;
    for (std::size_t k = 0; k < bases.size(); ++k)
        for (std::size_t l = k + 1; l < bases.size(); ++l)
            max_affp = std::max(max_affp, affinity_affp(bases[k], bases[l]));
    return max_affp;
}

/// max_{k != l} aff(S_k, S_l) <= 1 / (13 log N), natural logarithm.
inline bool check_thm2_condition(const std::vector<Matrix>& bases, int num_points) {
    if (bases.size() < 2)
        throw std::invalid_argument("check_thm2_condition: need >= 2 bases");
    return max_pairwise_aff(bases) <=
           1.0 / (13.0 * std::log(static_cast<double>(num_points)));
}

/// d/m <= 1 / (6 log N), natural logarithm; boundary equality counts as true.
inline bool check_outlier_condition(int d, int m, int num_points) {
    if (d < 1 || m < 1 || num_points < 2)
        throw std::invalid_argument("check_outlier_condition: invalid arguments");
    return static_cast<double>(d) / m <=
           1.0 / (6.0 * std::log(static_cast<double>(num_points)));
}

/// Bundle of the per-run performance measures.
struct MetricsReport {
    double ce = 0.0;
    int el = 0;
    double fde = 0.0;
    bool detection_property_holds = false;
    double max_affp = 0.0;
    double max_aff = 0.0;
};

}  // namespace tsc
