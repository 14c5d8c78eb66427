#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "symbi/types.hpp"

namespace symbi {

/// Matrix files are JSON documents
///   { "rows": R, "cols": C, "data": [[re, im], ...] }
/// with data in row-major order; entries are [re, im] pairs rather than
/// strings so the format is language-neutral and bit-exact.

inline CMat matrix_from_json(const nlohmann::json& j) {
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw Error("matrix file: missing rows/cols/data");
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    if (rows <= 0 || cols <= 0) throw Error("matrix file: rows and cols must be positive");
    const auto& data = j.at("data");
    if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw Error("matrix file: data length must equal rows*cols");
    CMat A(rows, cols);
    Eigen::Index idx = 0;
    for (const auto& e : data) {
        if (!e.is_array() || e.size() != 2) throw Error("matrix file: entries must be [re, im]");
        double re = e[0].get<double>();
        double im = e[1].get<double>();
        if (!std::isfinite(re) || !std::isfinite(im))
            throw Error("matrix file: non-finite entry");
        A(idx / cols, idx % cols) = Complex(re, im);
        ++idx;
    }
    return A;
}

inline nlohmann::json matrix_to_json(const CMat& A) {
    nlohmann::json j;
    j["rows"] = A.rows();
    j["cols"] = A.cols();
    auto data = nlohmann::json::array();
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index k = 0; k < A.cols(); ++k)
            data.push_back({A(i, k).real(), A(i, k).imag()});
    j["data"] = std::move(data);
    return j;
}

inline CMat load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open matrix file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("matrix file " + path + ": " + e.what());
    }
    return matrix_from_json(j);
}

inline void save_matrix(const std::string& path, const CMat& A) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write matrix file: " + path);
    out << matrix_to_json(A).dump() << "\n";
}

/// Compact single-line JSON rendering, used to inline matrices in reports.
inline std::string matrix_to_string(const CMat& A) { return matrix_to_json(A).dump(); }

}  // namespace symbi
