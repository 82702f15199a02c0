#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <string>

namespace meanscope {

// Text format: a "rows cols" header line, then one whitespace-separated row
// per line with full round-trip precision.
Eigen::MatrixXd read_matrix_text(const std::string& path);
void write_matrix_text(const std::string& path, const Eigen::MatrixXd& m);

// JSON object {"rows": r, "cols": c, "data": [row-major entries]}.
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

// Dispatch on extension: ".json" uses the JSON object form, anything else
// the text form.
Eigen::MatrixXd load_matrix(const std::string& path);
void save_matrix(const std::string& path, const Eigen::MatrixXd& m);

}  // namespace meanscope
