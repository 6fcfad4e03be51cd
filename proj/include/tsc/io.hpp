#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tsc/datamodel.hpp"

namespace tsc {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace io {

/// Round-trip-exact decimal formatting, used for dataset files.
inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// 6 significant digits, used for metric and grid outputs.
inline std::string format_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

/// Plain CSV, one point per line, comma-separated decimal floats, no header.
inline Matrix read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError(path + ": bad number '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(path + ": inconsistent column count");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": empty dataset");
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
    return m;
}

inline void write_csv_matrix(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_full(m(i, j));
        }
        out << '\n';
    }
}

/// One integer per line; -1 denotes outlier.
inline std::vector<int> read_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<int> labels;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            labels.push_back(std::stoi(line));
        } catch (const std::exception&) {
            throw ParseError(path + ": bad label '" + line + "'");
        }
    }
    return labels;
}

inline void write_labels(const std::string& path, const std::vector<int>& labels) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    for (int l : labels) out << l << '\n';
}

inline void write_flags(const std::string& path, const std::vector<bool>& flags) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    for (bool f : flags) out << (f ? 1 : 0) << '\n';
}

/// One line per point: comma-separated erased indices, empty line if none.
inline void write_masks(const std::string& path,
                        const std::vector<std::vector<int>>& masks) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    for (const auto& mask : masks) {
        for (std::size_t t = 0; t < mask.size(); ++t) {
            if (t) out << ',';
            out << mask[t];
        }
        out << '\n';
    }
}

inline std::vector<std::vector<int>> read_masks(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<std::vector<int>> masks;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<int> mask;
        if (!line.empty()) {
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ','))
                mask.push_back(std::stoi(cell));
        }
        masks.push_back(std::move(mask));
    }
    return masks;
}

}  // namespace io
}  // namespace tsc
