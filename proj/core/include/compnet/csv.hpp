#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "compnet/metrics.hpp"

namespace compnet {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);
/// Empty string for a missing value.
std::string format_optional(const std::optional<double>& v);

/// Header: iter,x_c0..x_c{M1-1},y_c0..y_c{M2-1},consensus_err,mse,grad_norm,d_norm_sq
std::string trajectory_header(int m1, int m2);
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, int m1, int m2);

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Joins already formatted cells with commas.
std::string csv_row(const std::vector<std::string>& cells);

}  // namespace compnet
