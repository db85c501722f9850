#include "compnet/csv.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include "compnet/errors.hpp"

namespace compnet {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line;
}

std::string trajectory_header(int m1, int m2) {
  std::vector<std::string> cells{"iter"};
  for (int i = 0; i < m1; ++i) cells.push_back("x_c" + std::to_string(i));
  for (int i = 0; i < m2; ++i) cells.push_back("y_c" + std::to_string(i));
  for (const char* name : {"consensus_err", "mse", "grad_norm", "d_norm_sq"}) cells.emplace_back(name);
  return csv_row(cells);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, int m1, int m2) {
  out << trajectory_header(m1, m2) << '\n';
  std::vector<std::string> cells;
  for (const Record& r : trajectory.records) {
    cells.clear();
    cells.push_back(std::to_string(r.iteration));
    for (Eigen::Index i = 0; i < r.x_c.size(); ++i) cells.push_back(format_double(r.x_c(i)));
    for (Eigen::Index i = 0; i < r.y_c.size(); ++i) cells.push_back(format_double(r.y_c(i)));
    cells.push_back(format_double(r.consensus_error));
    cells.push_back(format_optional(r.mse));
    cells.push_back(format_double(r.grad_norm));
    cells.push_back(format_optional(r.d_norm_sq));
    out << csv_row(cells) << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << contents;
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace compnet
