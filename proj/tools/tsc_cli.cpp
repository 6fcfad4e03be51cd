// Command-line front end: cluster a dataset, flag outliers, generate
// synthetic data, or run a Monte-Carlo experiment grid.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "tsc/tsc.hpp"

namespace {

int cmd_cluster(const std::string& dataset_path, int q, int pinned_L,
                int max_clusters, std::uint64_t seed,
                const std::string& out_path) {
    tsc::DataSet data;
    data.points = tsc::io::read_csv_matrix(dataset_path);

    tsc::ClusterOptions options;
    options.seed = seed;
    if (pinned_L > 0) options.pinned_L = pinned_L;
    if (max_clusters > 0) options.max_clusters = max_clusters;

    const tsc::ClusterResult result = tsc::tsc_cluster(data, q, options);
    tsc::io::write_labels(out_path, result.labels);

    std::cout << "L_hat " << result.L_hat << "\n";
    std::cout << "smallest_eigenvalues";
    const Eigen::Index show =
        std::min<Eigen::Index>(10, result.spectrum.eigenvalues.size());
    for (Eigen::Index i = 0; i < show; ++i)
        std::cout << ' ' << tsc::io::format_short(result.spectrum.eigenvalues[i]);
    std::cout << "\n";
    return 0;
}

int cmd_outliers(const std::string& dataset_path, const std::string& out_path) {
    tsc::DataSet data;
    data.points = tsc::io::read_csv_matrix(dataset_path);
    const tsc::OutlierReport report =
        tsc::detect_outliers(tsc::normalize_rows(data));
    tsc::io::write_flags(out_path, report.flags);
    std::cout << "threshold " << tsc::io::format_short(report.threshold) << "\n";
    std::cout << "outliers " << report.outlier_count() << "\n";
    return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out_prefix) {
    const tsc::ExperimentConfig config =
        tsc::load_experiment_config(config_path);
    const tsc::GridResult result = tsc::run_experiment(config, out_prefix);
    std::cout << "rows " << result.rows.size() << "\n";
    return 0;
}

int cmd_generate(const tsc::SyntheticSpec& spec, const std::string& prefix) {
    auto [data, truth] = tsc::generate_dataset(spec);
    tsc::io::write_csv_matrix(prefix + ".csv", data.points);
    tsc::io::write_labels(prefix + ".labels", data.labels);
    tsc::io::write_masks(prefix + ".masks", truth.erasure_masks);

    std::ofstream manifest(prefix + ".manifest");
    manifest << "m = " << spec.m << "\n"
             << "L = " << spec.L << "\n"
             << "d = " << spec.d << "\n"
             << "n = " << spec.n << "\n"
             << "s = " << spec.s << "\n"
             << "N0 = " << spec.N0 << "\n"
             << "coefficient_model = "
             << (spec.coefficient_model == tsc::CoefficientModel::sphere_uniform
                     ? "sphere_uniform"
                     : "gaussian_inv_d")
             << "\n"
             << "basis_model = "
             << (spec.basis_model == tsc::BasisModel::haar_orthonormal
                     ? "haar_orthonormal"
                     : "gaussian_inv_m")
             << "\n"
             << "seed = " << spec.seed << "\n"
             << "shuffle = " << (spec.shuffle ? 1 : 0) << "\n";
    std::cout << "points " << data.size() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thresholding-based subspace clustering"};
    app.require_subcommand(1);

    std::string dataset_path, out_path = "labels.txt", config_path;
    int q = 10, pinned_L = 0, max_clusters = 0;
    std::uint64_t seed = 0;

    auto* cluster = app.add_subcommand("cluster", "Cluster a CSV dataset");
    cluster->add_option("dataset", dataset_path, "Input CSV, one point per line")
        ->required();
    cluster->add_option("--q", q, "Neighbors kept per point")->required();
    cluster->add_option("--l", pinned_L, "Pin the number of clusters");
    cluster->add_option("--max-clusters", max_clusters,
                        "Eigengap search limit (default N/2)");
    cluster->add_option("--seed", seed, "Random seed");
    cluster->add_option("--out", out_path, "Labels output file");

    auto* outliers = app.add_subcommand("outliers", "Flag outliers in a dataset");
    outliers->add_option("dataset", dataset_path, "Input CSV")->required();
    outliers->add_option("--out", out_path, "Flags output file (0/1 per line)");

    auto* experiment = app.add_subcommand("experiment", "Run an experiment grid");
    experiment->add_option("--config", config_path, "Config file")->required();
    experiment->add_option("--out", out_path, "Output prefix")->required();

    tsc::SyntheticSpec spec;
    std::string coeff_model = "sphere_uniform", basis_model = "haar_orthonormal";
    bool shuffle = false;
    auto* generate = app.add_subcommand("generate", "Generate a synthetic dataset");
    generate->add_option("--m", spec.m, "Ambient dimension")->required();
    generate->add_option("--l", spec.L, "Number of subspaces")->required();
    generate->add_option("--d", spec.d, "Subspace dimension")->required();
    generate->add_option("--n", spec.n, "Points per subspace")->required();
    generate->add_option("--s", spec.s, "Erasures per point");
    generate->add_option("--n0", spec.N0, "Outlier count");
    generate->add_option("--coeff-model", coeff_model,
                         "gaussian_inv_d | sphere_uniform");
    generate->add_option("--basis-model", basis_model,
                         "haar_orthonormal | gaussian_inv_m");
    generate->add_flag("--shuffle", shuffle, "Shuffle point order");
    generate->add_option("--seed", seed, "Random seed");
    generate->add_option("--out", out_path, "Output prefix")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cluster->parsed())
            return cmd_cluster(dataset_path, q, pinned_L, max_clusters, seed,
                               out_path);
        if (outliers->parsed()) return cmd_outliers(dataset_path, out_path);
        if (experiment->parsed()) return cmd_experiment(config_path, out_path);
        if (generate->parsed()) {
            spec.seed = seed;
            spec.shuffle = shuffle;
            if (coeff_model == "gaussian_inv_d")
                spec.coefficient_model = tsc::CoefficientModel::gaussian_inv_d;
            else if (coeff_model == "sphere_uniform")
                spec.coefficient_model = tsc::CoefficientModel::sphere_uniform;
            else
                throw tsc::ParseError("unknown coefficient model " + coeff_model);
            if (basis_model == "haar_orthonormal")
                spec.basis_model = tsc::BasisModel::haar_orthonormal;
            else if (basis_model == "gaussian_inv_m")
                spec.basis_model = tsc::BasisModel::gaussian_inv_m;
            else
                throw tsc::ParseError("unknown basis model " + basis_model);
            return cmd_generate(spec, out_path);
        }
    } catch (const tsc::InvalidQ& e) {
        std::cerr << "error: InvalidQ: " << e.what() << "\n";
        return 1;
    } catch (const tsc::ZeroPoint& e) {
        std::cerr << "error: ZeroPoint: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
