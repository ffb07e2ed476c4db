#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace gfi {

/// Comma-separated reals, one row per line. A first line that does not parse
/// as numbers is taken as a header and skipped. All rows must have equal width.
Eigen::MatrixXd parse_csv(std::string_view text);
Eigen::MatrixXd read_csv(const std::string& path);

std::string format_csv(const Eigen::MatrixXd& values, const std::vector<std::string>& header = {});
void write_csv(const std::string& path, const Eigen::MatrixXd& values,
               const std::vector<std::string>& header = {});

}  // namespace gfi
