#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tsc/io.hpp"
#include "tsc/metrics.hpp"
#include "tsc/outlier.hpp"
#include "tsc/spectral.hpp"
#include "tsc/synthgen.hpp"

namespace tsc {

enum class ExperimentKind { vary_d_rho, erasures, outliers, single_run };

/// Monte-Carlo harness configuration, read from a flat key = value file.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::single_run;
    std::vector<int> d_list;
    std::vector<int> rho_list;
    std::vector<int> s_list;
    std::vector<int> m_list;
    int trials = 10;
    int m = 50;
    int L = 15;
    int d = 5;
    int rho = 6;
    int s = 0;
    int N0 = 0;
    CoefficientModel coefficient_model = CoefficientModel::sphere_uniform;
    BasisModel basis_model = BasisModel::haar_orthonormal;
    bool q_explicit = false;
    int q = 0;
    int max_clusters = 0;  // 0 = pipeline default floor(N/2)
    std::uint64_t seed = 0;
};

/// One (grid cell, trial) outcome.
struct GridRow {
    double axis1 = 0.0;
    double axis2 = 0.0;
    int trial = 0;
    double ce = 0.0;
    double fde = 0.0;
    int el = 0;
    int l_hat = 0;
    bool sdp = false;
    double max_aff = 0.0;
};

struct GridResult {
    std::vector<GridRow> rows;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<int> parse_int_list(const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stoi(trim(cell)));
    return out;
}

}  // namespace detail

/// Flat `key = value` grammar: one pair per line, lists comma-separated,
/// `#` starts a comment. Unknown keys are an error.
inline ExperimentConfig parse_experiment_config(std::istream& in) {
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(line_no) +
                             ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        try {
            if (key == "experiment") {
                if (value == "vary_d_rho") config.experiment = ExperimentKind::vary_d_rho;
                else if (value == "erasures") config.experiment = ExperimentKind::erasures;
                else if (value == "outliers") config.experiment = ExperimentKind::outliers;
                else if (value == "single_run") config.experiment = ExperimentKind::single_run;
                else throw ParseError("unknown experiment '" + value + "'");
            } else if (key == "d_list") config.d_list = detail::parse_int_list(value);
            else if (key == "rho_list") config.rho_list = detail::parse_int_list(value);
            else if (key == "s_list") config.s_list = detail::parse_int_list(value);
            else if (key == "m_list") config.m_list = detail::parse_int_list(value);
            else if (key == "trials") config.trials = std::stoi(value);
            else if (key == "m") config.m = std::stoi(value);
            else if (key == "L") config.L = std::stoi(value);
            else if (key == "d") config.d = std::stoi(value);
            else if (key == "rho") config.rho = std::stoi(value);
            else if (key == "s") config.s = std::stoi(value);
            else if (key == "N0") config.N0 = std::stoi(value);
            else if (key == "q") { config.q = std::stoi(value); config.q_explicit = true; }
            else if (key == "q_rule") {
                if (value == "n_over_rho") config.q_explicit = false;
                else throw ParseError("q_rule must be n_over_rho or omitted with explicit q");
            } else if (key == "max_clusters") config.max_clusters = std::stoi(value);
            else if (key == "seed") config.seed = std::stoull(value);
            else if (key == "coefficient_model") {
                if (value == "gaussian_inv_d") config.coefficient_model = CoefficientModel::gaussian_inv_d;
                else if (value == "sphere_uniform") config.coefficient_model = CoefficientModel::sphere_uniform;
                else throw ParseError("unknown coefficient_model '" + value + "'");
            } else if (key == "basis_model") {
                if (value == "haar_orthonormal") config.basis_model = BasisModel::haar_orthonormal;
                else if (value == "gaussian_inv_m") config.basis_model = BasisModel::gaussian_inv_m;
                else throw ParseError("unknown basis_model '" + value + "'");
            } else {
                throw ParseError("unknown key '" + key + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("config line " + std::to_string(line_no) +
                             ": bad value '" + value + "' for key '" + key + "'");
        }
    }
    return config;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path);
    return parse_experiment_config(in);
}

namespace detail {

inline std::vector<Matrix> orthonormalized(const std::vector<Matrix>& bases) {
    std::vector<Matrix> out;
    out.reserve(bases.size());
    for (const Matrix& u : bases) {
        Eigen::HouseholderQR<Matrix> qr(u);
        out.push_back(qr.householderQ() * Matrix::Identity(u.rows(), u.cols()));
    }
    return out;
}

inline std::uint64_t cell_seed(std::uint64_t master, std::uint64_t a1,
                               std::uint64_t a2, std::uint64_t trial,
                               std::uint64_t purpose) {
    return SeedStream(master).derive(a1, a2, trial, purpose).next_u64();
}

}  // namespace detail

/// One clustering trial on a fresh synthetic draw; fills every GridRow metric.
inline GridRow run_clustering_trial(const ExperimentConfig& config, int d,
                                    int rho, int s, int trial,
                                    std::uint64_t a1, std::uint64_t a2) {
    const int n = d * rho;
    const int q = config.q_explicit ? config.q
                                    : std::max(3, static_cast<int>(std::lround(
                                          static_cast<double>(n) / rho)));

    SyntheticSpec spec;
    spec.m = config.m;
    spec.L = config.L;
    spec.d = d;
    spec.n = n;
    spec.coefficient_model = config.coefficient_model;
    spec.basis_model = config.basis_model;
    spec.s = s;
    spec.N0 = 0;
    spec.seed = detail::cell_seed(config.seed, a1, a2, trial, 0);

    auto [data, truth] = generate_dataset(spec);

    ClusterOptions options;
    options.seed = detail::cell_seed(config.seed, a1, a2, trial, 1);
    if (config.max_clusters > 0) options.max_clusters = config.max_clusters;
    const ClusterResult result = tsc_cluster(data, q, options);

    GridRow row;
    row.trial = trial;
    row.ce = clustering_error(result.labels, truth.labels);
    row.fde = feature_detection_error(result.adjacency, truth.labels);
    row.el = estimation_error(result.L_hat, config.L);
    row.l_hat = result.L_hat;
    row.sdp = check_subspace_detection_property(result.adjacency, truth.labels, q);
    row.max_aff = max_pairwise_aff(detail::orthonormalized(truth.bases));
    return row;
}

/// One outlier-detection trial at ambient dimension m using the paper-style
/// parameterization L = 2m/d, n = 5d, N0 = Ln; ce reports the per-point flag
/// error rate.
inline GridRow run_outlier_trial(const ExperimentConfig& config, int m,
                                 int trial, std::uint64_t a1) {
    SyntheticSpec spec;
    spec.m = m;
    spec.d = config.d;
    spec.L = 2 * m / config.d;
    spec.n = 5 * config.d;
    spec.coefficient_model = config.coefficient_model;
    spec.basis_model = config.basis_model;
    spec.s = 0;
    spec.N0 = spec.L * spec.n;
    spec.seed = detail::cell_seed(config.seed, a1, 0, trial, 0);

    auto [data, truth] = generate_dataset(spec);
    const OutlierReport report = detect_outliers(data);

    int wrong = 0;
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        const bool is_outlier = truth.labels[i] == -1;
        if (report.flags[i] != is_outlier) ++wrong;
    }
    GridRow row;
    row.trial = trial;
    row.ce = static_cast<double>(wrong) / static_cast<double>(data.size());
    row.max_aff = max_pairwise_aff(detail::orthonormalized(truth.bases));
    return row;
}

namespace detail {

inline void write_grid_csv(const std::string& path,
                           const std::vector<GridRow>& rows) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << "axis1,axis2,trial,ce,fde,el,l_hat,sdp,max_aff\n";
    for (const GridRow& r : rows) {
        out << io::format_short(r.axis1) << ',' << io::format_short(r.axis2)
            << ',' << r.trial << ',' << io::format_short(r.ce) << ','
            << io::format_short(r.fde) << ',' << r.el << ',' << r.l_hat << ','
            << (r.sdp ? 1 : 0) << ',' << io::format_short(r.max_aff) << '\n';
    }
}

/// Three-column `x y value` means, one line per grid cell, x = axis2 (rho on
/// the horizontal axis), y = axis1.
template <typename Getter>
inline void write_mean_dat(const std::string& path,
                           const std::vector<GridRow>& rows, Getter get) {
    std::map<std::pair<double, double>, std::pair<double, int>> cells;
    for (const GridRow& r : rows) {
        auto& acc = cells[{r.axis1, r.axis2}];
        acc.first += get(r);
        acc.second += 1;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    for (const auto& [key, acc] : cells)
        out << io::format_short(key.second) << ' ' << io::format_short(key.first)
            << ' ' << io::format_short(acc.first / acc.second) << '\n';
}

}  // namespace detail

/// Run the configured experiment and write the raw grid CSV plus plot-ready
/// mean files under `out_prefix`. Deterministic: every output byte is a
/// function of (config, seed).
inline GridResult run_experiment(const ExperimentConfig& config,
                                 const std::string& out_prefix) {
    if (config.trials < 1)
        throw std::invalid_argument("run_experiment: trials must be >= 1");
    GridResult result;

    auto run_grid = [&](int s, std::uint64_t s_index) {
        std::vector<GridRow> rows;
        const auto& d_list =
            config.d_list.empty() ? std::vector<int>{config.d} : config.d_list;
        const auto& rho_list = config.rho_list.empty()
                                   ? std::vector<int>{config.rho}
                                   : config.rho_list;
        for (std::size_t di = 0; di < d_list.size(); ++di) {
            for (std::size_t ri = 0; ri < rho_list.size(); ++ri) {
                for (int t = 0; t < config.trials; ++t) {
                    GridRow row = run_clustering_trial(
                        config, d_list[di], rho_list[ri], s, t,
                        s_index * 1000 + di, ri);
                    row.axis1 = static_cast<double>(d_list[di]);
                    row.axis2 = static_cast<double>(rho_list[ri]);
                    rows.push_back(row);
                }
            }
        }
        return rows;
    };

    switch (config.experiment) {
        case ExperimentKind::vary_d_rho:
        case ExperimentKind::single_run: {
            result.rows = run_grid(config.s, 0);
            detail::write_grid_csv(out_prefix + ".csv", result.rows);
            detail::write_mean_dat(out_prefix + "_ce.dat", result.rows,
                                   [](const GridRow& r) { return r.ce; });
            detail::write_mean_dat(out_prefix + "_fde.dat", result.rows,
                                   [](const GridRow& r) { return r.fde; });
            detail::write_mean_dat(out_prefix + "_el.dat", result.rows,
                                   [](const GridRow& r) { return double(r.el); });
            break;
        }
        case ExperimentKind::erasures: {
            const auto& s_list =
                config.s_list.empty() ? std::vector<int>{config.s} : config.s_list;
            for (std::size_t si = 0; si < s_list.size(); ++si) {
                const std::vector<GridRow> rows = run_grid(s_list[si], si);
                const std::string tag = "_s" + std::to_string(s_list[si]);
                detail::write_grid_csv(out_prefix + tag + ".csv", rows);
                detail::write_mean_dat(out_prefix + "_ce" + tag + ".dat", rows,
                                       [](const GridRow& r) { return r.ce; });
                result.rows.insert(result.rows.end(), rows.begin(), rows.end());
            }
            break;
        }
        case ExperimentKind::outliers: {
            const auto& m_list =
                config.m_list.empty() ? std::vector<int>{config.m} : config.m_list;
            for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
                for (int t = 0; t < config.trials; ++t) {
                    GridRow row = run_outlier_trial(config, m_list[mi], t, mi);
                    row.axis1 = static_cast<double>(m_list[mi]);
                    row.axis2 = 0.0;
                    result.rows.push_back(row);
                }
            }
            detail::write_grid_csv(out_prefix + ".csv", result.rows);
            detail::write_mean_dat(out_prefix + "_err.dat", result.rows,
                                   [](const GridRow& r) { return r.ce; });
            break;
        }
    }
    return result;
}

}  // namespace tsc
