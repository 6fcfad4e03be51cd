#include <catch2/catch_amalgamated.hpp>

#include "tsc/metrics.hpp"
#include "tsc/outlier.hpp"
#include "tsc/synthgen.hpp"

using namespace tsc;

TEST_CASE("outlier_threshold formula") {
    CHECK(outlier_threshold(100, 50) ==
          Catch::Approx(std::sqrt(6.0 * std::log(100.0)) / std::sqrt(50.0)));
    CHECK(outlier_threshold(100, 50) == Catch::Approx(0.7434).margin(5e-4));
    // decreasing in m, increasing in N
    CHECK(outlier_threshold(100, 80) < outlier_threshold(100, 50));
    CHECK(outlier_threshold(200, 50) > outlier_threshold(100, 50));
}

TEST_CASE("duplicate points are never outliers") {
    SeedStream stream(4);
    DataSet data;
    data.points.resize(20, 30);
    for (int i = 0; i < 20; ++i)
        data.points.row(i) = sample_unit_sphere(30, stream).transpose();
    data.points.row(1) = data.points.row(0);
    const OutlierReport report = detect_outliers(data);
    CHECK(report.max_correlations[0] == Catch::Approx(1.0));
    CHECK_FALSE(report.flags[0]);
    CHECK_FALSE(report.flags[1]);
}

TEST_CASE("a point orthogonal to all others is an outlier") {
    DataSet data;
    data.points = Matrix::Zero(5, 10);
    // four close points in one plane, one isolated coordinate direction
    data.points(0, 0) = 1.0;
    for (int i = 1; i < 5; ++i) {
        data.points(i, 1) = std::cos(0.1 * i);
        data.points(i, 2) = std::sin(0.1 * i);
    }
    const OutlierReport report = detect_outliers(data);
    CHECK(report.flags[0]);
    for (int i = 1; i < 5; ++i) CHECK_FALSE(report.flags[i]);
}

TEST_CASE("flag decision is permutation invariant") {
    SeedStream stream(12);
    SyntheticSpec spec;
    spec.m = 40;
    spec.L = 2;
    spec.d = 3;
    spec.n = 20;
    spec.N0 = 10;
    spec.seed = 5;
    auto [data, truth] = generate_dataset(spec);
    const OutlierReport base = detect_outliers(data);

    std::vector<int> perm(data.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i)
        std::swap(perm[i], perm[stream.uniform_index(i + 1)]);
    DataSet permuted;
    permuted.points.resize(data.size(), data.dim());
    for (Eigen::Index i = 0; i < data.size(); ++i)
        permuted.points.row(i) = data.points.row(perm[i]);
    const OutlierReport shuffled = detect_outliers(permuted);
    for (Eigen::Index i = 0; i < data.size(); ++i)
        REQUIRE(shuffled.flags[i] == base.flags[perm[i]]);
}

TEST_CASE("cluster_with_outliers passes through when nothing is flagged") {
    SyntheticSpec spec;
    spec.m = 50;
    spec.L = 2;
    spec.d = 5;
    spec.n = 50;
    spec.seed = 8;
    const auto bases = coordinate_block_bases(spec.m, spec.L, spec.d);
    auto [data, truth] = generate_dataset(spec, &bases);
    ClusterOptions options;
    options.seed = 3;
    const ClusterResult direct = tsc_cluster(data, 10, options);
    const ClusterResult with = cluster_with_outliers(data, 10, options);
    CHECK(with.labels == direct.labels);
    CHECK(with.L_hat == direct.L_hat);
}

TEST_CASE("outliers get label -1 and inliers cluster cleanly") {
    int successes = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
        SyntheticSpec spec;
        spec.m = 100;
        spec.L = 2;
        spec.d = 3;
        spec.n = 30;
        spec.N0 = 10;
        spec.seed = 1000 + t;
        const auto bases = coordinate_block_bases(spec.m, spec.L, spec.d);
        auto [data, truth] = generate_dataset(spec, &bases);
        ClusterOptions options;
        options.seed = t;
        options.max_clusters = 5;
        ClusterResult result;
        try {
            result = cluster_with_outliers(data, 10, options);
        } catch (const EmptyAfterRemoval&) {
            continue;
        }
        bool ok = true;
        for (int idx : truth.outlier_indices)
            if (result.labels[idx] != -1) ok = false;
        if (ok && clustering_error(result.labels, truth.labels) == 0.0)
            ++successes;
    }
    CHECK(successes >= trials * 9 / 10);
}

TEST_CASE("all points flagged raises EmptyAfterRemoval") {
    DataSet data;
    data.points = Matrix::Identity(8, 8);
    CHECK_THROWS_AS(cluster_with_outliers(data, 2), EmptyAfterRemoval);
}
