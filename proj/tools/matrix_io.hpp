#pragma once

// Kernel matrices as CSV (one row per line, no header) with an optional JSON
// sidecar {points, normalized, tol} next to the CSV file.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "heckepair/kernels.hpp"

namespace heckepair::cli {

Eigen::MatrixXd parse_matrix_csv(const std::string& text);
void write_matrix_csv(const Eigen::MatrixXd& m, std::ostream& out);
void write_rows_csv(const std::vector<std::vector<double>>& rows, std::ostream& out);

std::filesystem::path sidecar_path(const std::filesystem::path& csv);

// Reads the CSV and, when present, its sidecar. Without a sidecar the points
// are 0..n-1, normalization none and tol = fallback_tol.
KernelMatrix load_kernel(const std::filesystem::path& csv, double fallback_tol);
void write_sidecar(const KernelMatrix& k, std::ostream& out);

std::string format_double(double x);
std::string read_file(const std::filesystem::path& path);

}  // namespace heckepair::cli
