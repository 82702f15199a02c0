#include "meanscope/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace meanscope {

namespace {

std::string format_entry(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Eigen::MatrixXd read_matrix_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open matrix file: " + path);
    long rows = 0, cols = 0;
    if (!(in >> rows >> cols) || rows < 1 || cols < 1)
        throw std::runtime_error("invalid matrix header in " + path);
    Eigen::MatrixXd m(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j)
            if (!(in >> m(i, j)))
                throw std::runtime_error("truncated matrix data in " + path);
    return m;
}

void write_matrix_text(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write matrix file: " + path);
    out << m.rows() << ' ' << m.cols() << '\n';
    for (long i = 0; i < m.rows(); ++i) {
        for (long j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << format_entry(m(i, j));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("failed writing matrix file: " + path);
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    nlohmann::json data = nlohmann::json::array();
    for (long i = 0; i < m.rows(); ++i)
        for (long k = 0; k < m.cols(); ++k) data.push_back(m(i, k));
    j["data"] = std::move(data);
    return j;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw std::runtime_error("matrix JSON must contain rows, cols and data");
    const long rows = j.at("rows").get<long>();
    const long cols = j.at("cols").get<long>();
    const auto& data = j.at("data");
    if (rows < 1 || cols < 1 || !data.is_array() ||
        static_cast<long>(data.size()) != rows * cols)
        throw std::runtime_error("matrix JSON has inconsistent shape");
    Eigen::MatrixXd m(rows, cols);
    long idx = 0;
    for (long i = 0; i < rows; ++i)
        for (long k = 0; k < cols; ++k) m(i, k) = data[idx++].get<double>();
    return m;
}

Eigen::MatrixXd load_matrix(const std::string& path) {
    if (ends_with(path, ".json")) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open matrix file: " + path);
        nlohmann::json j;
        in >> j;
        return matrix_from_json(j);
    }
    return read_matrix_text(path);
}

void save_matrix(const std::string& path, const Eigen::MatrixXd& m) {
    if (ends_with(path, ".json")) {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write matrix file: " + path);
        out << matrix_to_json(m).dump(2) << '\n';
        return;
    }
    write_matrix_text(path, m);
}

}  // namespace meanscope
