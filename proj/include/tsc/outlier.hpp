#pragma once

#include <vector>

#include "tsc/datamodel.hpp"
#include "tsc/spectral.hpp"

namespace tsc {

/// Per-point outlier decision: flags[j] is true iff the maximum absolute
/// correlation of x_j to the rest of the set falls below the threshold.
struct OutlierReport {
    std::vector<bool> flags;
    double threshold = 0.0;
    std::vector<double> max_correlations;

    int outlier_count() const {
        int count = 0;
        for (bool f : flags) count += f ? 1 : 0;
        return count;
    }
};

/// sqrt(6 log N) / sqrt(m), natural logarithm. N counts all points,
/// outliers included.
inline double outlier_threshold(int num_points, int ambient_dim) {
    if (num_points < 2 || ambient_dim < 1)
        throw std::invalid_argument("outlier_threshold: need N >= 2, m >= 1");
    return std::sqrt(6.0 * std::log(static_cast<double>(num_points))) /
           std::sqrt(static_cast<double>(ambient_dim));
}

/// Flag x_j as an outlier when max_{p != j} |<x_p, x_j>| < sqrt(6 log N)/sqrt(m).
/// Strict inequality; rows must be unit-norm.
inline OutlierReport detect_outliers(const DataSet& data) {
    const Eigen::Index n = data.size();
    if (n < 2)
        throw std::invalid_argument("detect_outliers: need at least 2 points");
    const double threshold =
        outlier_threshold(static_cast<int>(n), static_cast<int>(data.dim()));
    const Matrix gram = data.points * data.points.transpose();

    OutlierReport report;
    report.threshold = threshold;
    report.flags.resize(n);
    report.max_correlations.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double max_corr = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            if (p != j) max_corr = std::max(max_corr, std::abs(gram(p, j)));
        report.max_correlations[j] = max_corr;
        report.flags[j] = max_corr < threshold;
    }
    return report;
}

/// Outlier removal followed by the TSC pipeline on the remaining points.
/// Flagged points come back with label -1; inlier labels are mapped to their
/// original positions.
inline ClusterResult cluster_with_outliers(const DataSet& data, int q,
                                           const ClusterOptions& options = {}) {
    const DataSet unit = normalize_rows(data);
    const OutlierReport report = detect_outliers(unit);

    const Eigen::Index n = unit.size();
    std::vector<Eigen::Index> keep;
    keep.reserve(n);
    for (Eigen::Index i = 0; i < n; ++i)
        if (!report.flags[i]) keep.push_back(i);
    if (keep.empty())
        throw EmptyAfterRemoval("cluster_with_outliers: every point flagged");

    DataSet inliers;
    inliers.points.resize(static_cast<Eigen::Index>(keep.size()), unit.dim());
    for (std::size_t t = 0; t < keep.size(); ++t)
        inliers.points.row(static_cast<Eigen::Index>(t)) = unit.points.row(keep[t]);

    ClusterOptions inner = options;
    inner.normalize = false;  // already unit-norm
    ClusterResult sub = tsc_cluster(inliers, q, inner);

    ClusterResult result;
    result.L_hat = sub.L_hat;
    result.spectrum = std::move(sub.spectrum);
    result.adjacency = std::move(sub.adjacency);
    result.labels.assign(n, -1);
    for (std::size_t t = 0; t < keep.size(); ++t)
        result.labels[keep[t]] = sub.labels[t];
    return result;
}

}  // namespace tsc
