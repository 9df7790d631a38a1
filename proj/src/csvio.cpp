#include "hdperm/csvio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hdperm/errors.hpp"

namespace hdperm {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& col) {
  if (cell.empty())
    throw ParseError("empty cell at data row " + std::to_string(row) + ", column " + col);
  char* end = nullptr;
  double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size())
    throw ParseError("cannot parse '" + cell + "' at data row " + std::to_string(row) +
                     ", column " + col);
  if (!std::isfinite(v))
    throw NonFinite("non-finite value at data row " + std::to_string(row) + ", column " + col);
  return v;
}

} // namespace

IngestResult ingest_csv(const std::string& path, const ColumnRoles& roles, bool standardize) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  if (roles.interest.empty()) throw MissingColumn("no interest column named");

  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file: " + path);
  std::vector<std::string> header = split_csv_line(line);

  auto find_col = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw MissingColumn("column not in header: " + name);
    return static_cast<int>(it - header.begin());
  };

  const int y_idx = find_col(roles.outcome);
  std::vector<int> x_idx;
  for (const auto& name : roles.interest) {
    if (name == roles.outcome)
      throw MissingColumn("column used as both outcome and interest: " + name);
    x_idx.push_back(find_col(name));
  }

  IngestResult result;
  std::vector<int> z_idx;
  for (int c = 0; c < static_cast<int>(header.size()); ++c) {
    if (c == y_idx || std::find(x_idx.begin(), x_idx.end(), c) != x_idx.end()) continue;
    z_idx.push_back(c);
    result.nuisance_names.push_back(header[c]);
  }
  if (z_idx.empty()) throw MissingColumn("no nuisance columns remain");
  result.interest_names = roles.interest;

  std::vector<std::vector<double>> rows;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row_no;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError("data row " + std::to_string(row_no) + " has " +
                       std::to_string(cells.size()) + " cells, header has " +
                       std::to_string(header.size()));
    std::vector<double> parsed(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      parsed[c] = parse_cell(cells[c], row_no, header[c]);
    rows.push_back(std::move(parsed));
  }
  const int n = static_cast<int>(rows.size());
  if (n < 1) throw ParseError("no data rows in " + path);

  Eigen::VectorXd y(n);
  Eigen::MatrixXd X(n, static_cast<int>(x_idx.size()));
  Eigen::MatrixXd Z(n, static_cast<int>(z_idx.size()));
  for (int i = 0; i < n; ++i) {
    y(i) = rows[i][y_idx];
    for (std::size_t c = 0; c < x_idx.size(); ++c) X(i, static_cast<int>(c)) = rows[i][x_idx[c]];
    for (std::size_t c = 0; c < z_idx.size(); ++c) Z(i, static_cast<int>(c)) = rows[i][z_idx[c]];
  }
  result.data = make_dataset(std::move(y), std::move(X), std::move(Z), standardize);
  return result;
}

void write_csv(const std::string& path, const Dataset& data, const std::string& outcome_name,
               const std::vector<std::string>& interest_names,
               const std::vector<std::string>& nuisance_names) {
  if (static_cast<int>(interest_names.size()) != data.d() ||
      static_cast<int>(nuisance_names.size()) != data.q())
    throw DimensionMismatch("column name counts do not match dataset");
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << outcome_name;
  for (const auto& nm : interest_names) out << ',' << nm;
  for (const auto& nm : nuisance_names) out << ',' << nm;
  out << '\n';
  for (int i = 0; i < data.n(); ++i) {
    out << format_g17(data.y(i));
    for (int c = 0; c < data.d(); ++c) out << ',' << format_g17(data.X(i, c));
    for (int c = 0; c < data.q(); ++c) out << ',' << format_g17(data.Z(i, c));
    out << '\n';
  }
}

} // namespace hdperm
