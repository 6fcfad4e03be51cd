#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "tsc/spectral.hpp"

using namespace tsc;

namespace {

// disjoint union of complete graphs with unit weights
AdjacencyGraph disjoint_cliques(const std::vector<int>& sizes) {
    int n = 0;
    for (int s : sizes) n += s;
    AdjacencyGraph graph;
    graph.matrix = Matrix::Zero(n, n);
    int offset = 0;
    for (int s : sizes) {
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j)
                if (i != j) graph.matrix(offset + i, offset + j) = 1.0;
        offset += s;
    }
    return graph;
}

// union-find component count over positive-degree vertices
int component_count(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (a(i, j) > 0.0) parent[find(i)] = find(j);
    int count = 0;
    for (int i = 0; i < n; ++i)
        if (a.row(i).sum() > 0.0 && find(i) == i) ++count;
    return count;
}

AdjacencyGraph random_sparse_graph(int n, SeedStream& stream) {
    AdjacencyGraph graph;
    graph.matrix = Matrix::Zero(n, n);
    const double p = 3.0 / n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (stream.uniform() < p) {
                const double w = 0.1 + stream.uniform();
                graph.matrix(i, j) = w;
                graph.matrix(j, i) = w;
            }
    return graph;
}

}  // namespace

TEST_CASE("normalized_laplacian closed forms") {
    AdjacencyGraph edge;
    edge.matrix.resize(2, 2);
    edge.matrix << 0.0, 1.0, 1.0, 0.0;
    const Matrix lap = normalized_laplacian(edge);
    CHECK(lap(0, 0) == Catch::Approx(1.0));
    CHECK(lap(0, 1) == Catch::Approx(-1.0));
    const SymmetricSpectrum spec = symmetric_eig(lap);
    CHECK(spec.eigenvalues[0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(spec.eigenvalues[1] == Catch::Approx(2.0));

    AdjacencyGraph isolated;
    isolated.matrix = Matrix::Zero(3, 3);
    CHECK(normalized_laplacian(isolated).isApprox(Matrix::Identity(3, 3)));
}

TEST_CASE("two disjoint 3-cliques have the K3 spectrum") {
    const Matrix lap = normalized_laplacian(disjoint_cliques({3, 3}));
    const Vector ev = symmetric_eig(lap).eigenvalues;
    const std::vector<double> expected = {0.0, 0.0, 1.5, 1.5, 1.5, 1.5};
    for (int i = 0; i < 6; ++i)
        CHECK(ev[i] == Catch::Approx(expected[i]).margin(1e-10));
}

TEST_CASE("estimate_L via eigengap") {
    const SymmetricSpectrum two =
        symmetric_eig(normalized_laplacian(disjoint_cliques({3, 3})));
    CHECK(estimate_L(two, 5) == 2);

    // connected K4: spectrum (0, 4/3, 4/3, 4/3)
    const SymmetricSpectrum k4 =
        symmetric_eig(normalized_laplacian(disjoint_cliques({4})));
    CHECK(k4.eigenvalues[1] == Catch::Approx(4.0 / 3.0));
    CHECK(estimate_L(k4, 3) == 1);

    const SymmetricSpectrum three =
        symmetric_eig(normalized_laplacian(disjoint_cliques({4, 3, 5})));
    CHECK(estimate_L(three, 6) == 3);
}

TEST_CASE("spectral_embedding of a disconnected graph is piecewise constant") {
    const AdjacencyGraph graph = disjoint_cliques({4, 5});
    const Matrix embedding = spectral_embedding(graph, 2);
    REQUIRE(embedding.cols() == 2);
    for (int i = 1; i < 4; ++i)
        CHECK((embedding.row(i) - embedding.row(0)).norm() < 1e-6);
    for (int i = 5; i < 9; ++i)
        CHECK((embedding.row(i) - embedding.row(4)).norm() < 1e-6);
    CHECK((embedding.row(0) - embedding.row(4)).norm() > 0.5);
}

TEST_CASE("spectral_embedding with one cluster maps rows to +-1") {
    const Matrix embedding = spectral_embedding(disjoint_cliques({5}), 1);
    for (int i = 0; i < 5; ++i)
        CHECK(std::abs(std::abs(embedding(i, 0)) - 1.0) < 1e-10);
}

TEST_CASE("kmeans separates distant clouds, matches exhaustive oracle") {
    SeedStream stream(3);
    const int n = 10;
    Matrix points(n, 2);
    for (int i = 0; i < n; ++i) {
        const double cx = i < 5 ? 0.0 : 100.0;
        points(i, 0) = cx + stream.uniform();
        points(i, 1) = stream.uniform();
    }
    SeedStream km(1);
    const KMeansResult result = kmeans(points, 2, km);

    // exhaustive 2-partition oracle
    double best_cost = 1e300;
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
        Eigen::RowVector2d c0 = Eigen::RowVector2d::Zero(),
                           c1 = Eigen::RowVector2d::Zero();
        int n0 = 0, n1 = 0;
        for (int i = 0; i < n; ++i) {
            if (mask & (1 << i)) {
                c0 += points.row(i);
                ++n0;
            } else {
                c1 += points.row(i);
                ++n1;
            }
        }
        c0 /= n0;
        c1 /= n1;
        double cost = 0.0;
        for (int i = 0; i < n; ++i)
            cost += (points.row(i) - ((mask & (1 << i)) ? c0 : c1)).squaredNorm();
        best_cost = std::min(best_cost, cost);
    }
    CHECK(result.cost == Catch::Approx(best_cost).margin(1e-9));
    for (int i = 1; i < 5; ++i) CHECK(result.labels[i] == result.labels[0]);
    for (int i = 6; i < n; ++i) CHECK(result.labels[i] == result.labels[5]);
    CHECK(result.labels[0] != result.labels[5]);
}

TEST_CASE("kmeans with k = N gives zero cost") {
    SeedStream stream(8);
    Matrix points(6, 3);
    for (int i = 0; i < 6; ++i)
        points.row(i) = sample_unit_sphere(3, stream).transpose();
    SeedStream km(2);
    const KMeansResult result = kmeans(points, 6, km);
    CHECK(result.cost == Catch::Approx(0.0).margin(1e-12));
    std::vector<int> sorted = result.labels;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 6; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("kmeans on identical points is a zero-cost deterministic split") {
    Matrix points = Matrix::Ones(5, 2);
    SeedStream a(7), b(7);
    const KMeansResult ra = kmeans(points, 2, a);
    const KMeansResult rb = kmeans(points, 2, b);
    CHECK(ra.cost == Catch::Approx(0.0).margin(1e-12));
    CHECK(ra.labels == rb.labels);
}

TEST_CASE("normalized_spectral_clustering recovers block partitions") {
    SeedStream stream(55);
    const std::vector<int> sizes = {6, 4, 7};
    const AdjacencyGraph graph = disjoint_cliques(sizes);
    SeedStream cluster_stream(9);
    const ClusterResult result =
        normalized_spectral_clustering(graph, 3, cluster_stream);
    // labels constant within each block, distinct across blocks
    int offset = 0;
    std::vector<int> block_labels;
    for (int s : sizes) {
        for (int i = 1; i < s; ++i)
            REQUIRE(result.labels[offset + i] == result.labels[offset]);
        block_labels.push_back(result.labels[offset]);
        offset += s;
    }
    std::sort(block_labels.begin(), block_labels.end());
    CHECK(block_labels == std::vector<int>{0, 1, 2});
}

TEST_CASE("single clique collapses to one label") {
    SeedStream stream(2);
    const ClusterResult result =
        normalized_spectral_clustering(disjoint_cliques({6}), 1, stream);
    for (int l : result.labels) CHECK(l == 0);
    CHECK(result.L_hat == 1);
}

TEST_CASE("Laplacian eigenvalues stay in [0, 2]") {
    SeedStream stream(123);
    for (int trial = 0; trial < 30; ++trial) {
        const AdjacencyGraph graph = random_sparse_graph(40, stream);
        const Vector ev = symmetric_eig(normalized_laplacian(graph)).eigenvalues;
        CHECK(ev.minCoeff() >= -1e-8);
        CHECK(ev.maxCoeff() <= 2.0 + 1e-8);
    }
}

TEST_CASE("zero-eigenvalue multiplicity equals component count") {
    SeedStream stream(321);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 20 + static_cast<int>(stream.uniform_index(180));
        const AdjacencyGraph graph = random_sparse_graph(n, stream);
        const Vector ev = symmetric_eig(normalized_laplacian(graph)).eigenvalues;
        int zeros = 0;
        for (int i = 0; i < n; ++i)
            if (ev[i] <= 1e-8) ++zeros;
        REQUIRE(zeros == component_count(graph.matrix));
    }
}

TEST_CASE("estimate_L finds the component count on block graphs") {
    for (const auto& sizes :
         std::vector<std::vector<int>>{{5, 5}, {4, 6, 8}, {3, 3, 3, 3}}) {
        const SymmetricSpectrum spec =
            symmetric_eig(normalized_laplacian(disjoint_cliques(sizes)));
        int total = 0;
        for (int s : sizes) total += s;
        CHECK(estimate_L(spec, total / 2) == static_cast<int>(sizes.size()));
    }
}
