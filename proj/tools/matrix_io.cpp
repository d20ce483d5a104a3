#include "matrix_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "heckepair/error.hpp"

namespace heckepair::cli {

namespace {

std::string normalization_name(Normalization n) {
  switch (n) {
    case Normalization::negative_type: return "negative_type";
    case Normalization::positive_type: return "positive_type";
    case Normalization::none: break;
  }
  return "none";
}

Normalization parse_normalization(const std::string& s) {
  if (s == "none") return Normalization::none;
  if (s == "negative_type") return Normalization::negative_type;
  if (s == "positive_type") return Normalization::positive_type;
  throw InvalidInput("sidecar: unknown normalization '" + s + "'");
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw InvalidInput("csv: unterminated quote");
  out.push_back(cur);
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Eigen::MatrixXd parse_matrix_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& field : split_fields(line)) {
      const auto b = field.find_first_not_of(" \t");
      const auto e = field.find_last_not_of(" \t");
      const std::string f = b == std::string::npos ? "" : field.substr(b, e - b + 1);
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size())
        throw InvalidInput("csv line " + std::to_string(line_no) + ": not a number '" + f + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  const auto n = rows.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw InvalidInput("csv: kernel matrix must be square");
    for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

void write_matrix_csv(const Eigen::MatrixXd& m, std::ostream& out) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_double(m(i, j));
    out << "\n";
  }
}

void write_rows_csv(const std::vector<std::vector<double>>& rows, std::ostream& out) {
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
    out << "\n";
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".json");
  return p;
}

KernelMatrix load_kernel(const std::filesystem::path& csv, double fallback_tol) {
  const Eigen::MatrixXd values = parse_matrix_csv(read_file(csv));
  KernelMatrix k;
  k.values = values;
  k.tol = fallback_tol;
  const auto side = sidecar_path(csv);
  if (side != csv && std::filesystem::exists(side)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(side));
      k.points = j.at("points").get<std::vector<CosetId>>();
      if (j.contains("normalized")) k.normalized = parse_normalization(j.at("normalized").get<std::string>());
      if (j.contains("tol")) k.tol = j.at("tol").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput("sidecar " + side.string() + ": " + e.what());
    }
    if (k.points.size() != static_cast<std::size_t>(values.rows()))
      throw InvalidInput("sidecar " + side.string() + ": point count does not match the matrix");
  } else {
    for (Eigen::Index i = 0; i < values.rows(); ++i) k.points.push_back(static_cast<CosetId>(i));
  }
  if (!k.is_symmetric()) throw InvalidInput("kernel matrix is not symmetric");
  return k;
}

void write_sidecar(const KernelMatrix& k, std::ostream& out) {
  nlohmann::ordered_json j;
  j["points"] = k.points;
  j["normalized"] = normalization_name(k.normalized);
  j["tol"] = k.tol;
  out << j.dump(2) << "\n";
}

}  // namespace heckepair::cli
