#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tsc/experiment.hpp"

using namespace tsc;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parser reads the flat key-value grammar") {
    std::stringstream in(
        "# comment line\n"
        "experiment = vary_d_rho\n"
        "d_list = 2, 4, 6   # inline comment\n"
        "rho_list = 6,10\n"
        "trials = 3\n"
        "m = 50\n"
        "L = 15\n"
        "q_rule = n_over_rho\n"
        "seed = 99\n");
    const ExperimentConfig config = parse_experiment_config(in);
    CHECK(config.experiment == ExperimentKind::vary_d_rho);
    CHECK(config.d_list == std::vector<int>{2, 4, 6});
    CHECK(config.rho_list == std::vector<int>{6, 10});
    CHECK(config.trials == 3);
    CHECK_FALSE(config.q_explicit);
    CHECK(config.seed == 99);
}

TEST_CASE("config parser rejects malformed input") {
    std::stringstream bad_line("experiment vary_d_rho\n");
    CHECK_THROWS_AS(parse_experiment_config(bad_line), ParseError);
    std::stringstream bad_key("frobnicate = 3\n");
    CHECK_THROWS_AS(parse_experiment_config(bad_key), ParseError);
    std::stringstream bad_value("trials = soon\n");
    CHECK_THROWS_AS(parse_experiment_config(bad_value), ParseError);
}

TEST_CASE("tiny grid produces one row per cell and trial") {
    ExperimentConfig config;
    config.experiment = ExperimentKind::vary_d_rho;
    config.d_list = {2, 3};
    config.rho_list = {6};
    config.trials = 2;
    config.m = 20;
    config.L = 3;
    config.seed = 7;
    const GridResult result = run_experiment(config, "/tmp/tsc_grid_test");
    CHECK(result.rows.size() == 4);
    for (const GridRow& row : result.rows) {
        CHECK(row.ce >= 0.0);
        CHECK(row.ce <= 1.0);
        CHECK(row.fde >= 0.0);
        CHECK(row.fde <= 1.0);
        CHECK((row.el == 0 || row.el == 1));
        CHECK(row.l_hat >= 1);
    }
}

TEST_CASE("n_over_rho rule reduces to q = d") {
    // with n = d*rho the rule q = max(3, round(n/rho)) gives q = max(3, d)
    ExperimentConfig config;
    config.experiment = ExperimentKind::single_run;
    config.d = 5;
    config.rho = 4;
    config.trials = 1;
    config.m = 30;
    config.L = 2;
    config.seed = 1;
    const GridRow row = run_clustering_trial(config, config.d, config.rho,
                                             0, 0, 0, 0);
    // q = 5 kept at least 5 within-subspace links whenever sdp holds
    if (row.sdp) CHECK(row.fde == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("grid means are recomputable from the raw rows") {
    ExperimentConfig config;
    config.experiment = ExperimentKind::vary_d_rho;
    config.d_list = {2};
    config.rho_list = {6, 8};
    config.trials = 3;
    config.m = 20;
    config.L = 3;
    config.seed = 21;
    const GridResult result = run_experiment(config, "/tmp/tsc_mean_test");

    std::ifstream dat("/tmp/tsc_mean_test_ce.dat");
    REQUIRE(dat.good());
    double x, y, value;
    while (dat >> x >> y >> value) {
        double sum = 0.0;
        int count = 0;
        for (const GridRow& row : result.rows)
            if (row.axis1 == y && row.axis2 == x) {
                sum += row.ce;
                ++count;
            }
        REQUIRE(count == config.trials);
        // .dat values carry 6 significant digits
        REQUIRE(value == Catch::Approx(sum / count).margin(1e-5));
    }
}

TEST_CASE("experiment output is byte-identical across reruns") {
    ExperimentConfig config;
    config.experiment = ExperimentKind::erasures;
    config.d_list = {2};
    config.rho_list = {6};
    config.s_list = {0, 3};
    config.trials = 2;
    config.m = 20;
    config.L = 3;
    config.basis_model = BasisModel::gaussian_inv_m;
    config.coefficient_model = CoefficientModel::gaussian_inv_d;
    config.seed = 5;
    run_experiment(config, "/tmp/tsc_det_a");
    run_experiment(config, "/tmp/tsc_det_b");
    for (const char* tag : {"_s0.csv", "_s3.csv", "_ce_s0.dat", "_ce_s3.dat"})
        CHECK(slurp(std::string("/tmp/tsc_det_a") + tag) ==
              slurp(std::string("/tmp/tsc_det_b") + tag));
}

TEST_CASE("outlier experiment reports a flag error rate") {
    ExperimentConfig config;
    config.experiment = ExperimentKind::outliers;
    config.m_list = {50};
    config.d = 5;
    config.trials = 2;
    config.seed = 3;
    const GridResult result = run_experiment(config, "/tmp/tsc_outlier_test");
    REQUIRE(result.rows.size() == 2);
    for (const GridRow& row : result.rows) {
        CHECK(row.axis1 == 50.0);
        CHECK(row.ce >= 0.0);
        CHECK(row.ce <= 1.0);
    }
}
