#include "weakflow/report.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace weakflow {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("CsvTable::write: cannot open " + path);
  for (size_t c = 0; c < header.size(); ++c)
    out << header[c] << (c + 1 == header.size() ? "\n" : ",");
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::runtime_error("CsvTable::write: ragged row in " + path);
    for (size_t c = 0; c < row.size(); ++c)
      out << row[c] << (c + 1 == row.size() ? "\n" : ",");
  }
}

CsvTable CsvTable::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("CsvTable::read: cannot open " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    size_t start = 0;
    while (true) {
      const size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

namespace {

double column_tolerance(const json& spec, const std::string& file,
                        const std::string& column) {
  double tol = spec.value("default", 0.0);
  if (spec.contains(file)) {
    const json& f = spec.at(file);
    if (f.contains("*")) tol = f.at("*").get<double>();
    if (f.contains(column)) tol = f.at(column).get<double>();
  }
  return tol;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

void compare_cell(const std::string& file, const std::string& location,
                  const std::string& a, const std::string& b, double tol,
                  DiffReport& report) {
  double xa = 0.0, xb = 0.0;
  if (parse_number(a, xa) && parse_number(b, xb)) {
    const double scale = std::max(std::abs(xa), std::abs(xb));
    const double rel = scale > 0.0 ? std::abs(xa - xb) / scale : 0.0;
    if (rel > tol) report.violations.push_back({file, location, a, b, rel, tol});
    return;
  }
  if (a != b)
    report.violations.push_back(
        {file, location, a, b, std::numeric_limits<double>::infinity(), tol});
}

void compare_json(const std::string& file, const std::string& path,
                  const json& a, const json& b, const json& spec,
                  DiffReport& report) {
  if (a.is_object() && b.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (file == "manifest.json" && it.key() == "timings") continue;
      if (!b.contains(it.key()))
        throw std::invalid_argument("compare_reports: schema mismatch at " +
                                    file + path + "/" + it.key());
      compare_json(file, path + "/" + it.key(), it.value(), b.at(it.key()),
                   spec, report);
    }
    for (auto it = b.begin(); it != b.end(); ++it)
      if (!a.contains(it.key()) &&
          !(file == "manifest.json" && it.key() == "timings"))
        throw std::invalid_argument("compare_reports: schema mismatch at " +
                                    file + path + "/" + it.key());
    return;
  }
  if (a.is_array() && b.is_array()) {
    if (a.size() != b.size())
      throw std::invalid_argument("compare_reports: schema mismatch at " +
                                  file + path);
    for (size_t i = 0; i < a.size(); ++i)
      compare_json(file, path + "/" + std::to_string(i), a[i], b[i], spec,
                   report);
    return;
  }
  if (a.is_number() && b.is_number()) {
    const std::string key =
        path.empty() ? "" : path.substr(path.find_last_of('/') + 1);
    const double tol = column_tolerance(spec, file, key);
    const double xa = a.get<double>();
    const double xb = b.get<double>();
    const double scale = std::max(std::abs(xa), std::abs(xb));
    const double rel = scale > 0.0 ? std::abs(xa - xb) / scale : 0.0;
    if (rel > tol)
      report.violations.push_back(
          {file, path, a.dump(), b.dump(), rel, tol});
    return;
  }
  if (a != b)
    report.violations.push_back({file, path, a.dump(), b.dump(),
                                 std::numeric_limits<double>::infinity(), 0.0});
}

}  // namespace

DiffReport compare_reports(const std::string& dir_a, const std::string& dir_b,
                           const json& tolerance_spec) {
  DiffReport report;
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".csv" || ext == ".json")
      files.push_back(entry.path().filename().string());
  }
  std::sort(files.begin(), files.end());

  for (const std::string& file : files) {
    const fs::path pa = fs::path(dir_a) / file;
    const fs::path pb = fs::path(dir_b) / file;
    if (!fs::exists(pb))
      throw std::invalid_argument("compare_reports: " + file +
                                  " missing from " + dir_b);
    report.compared_files.push_back(file);
    if (pa.extension() == ".csv") {
      const CsvTable a = CsvTable::read(pa.string());
      const CsvTable b = CsvTable::read(pb.string());
      if (a.header != b.header || a.rows.size() != b.rows.size())
        throw std::invalid_argument("compare_reports: schema mismatch in " +
                                    file);
      for (size_t r = 0; r < a.rows.size(); ++r)
        for (size_t c = 0; c < a.header.size(); ++c)
          compare_cell(file, "row " + std::to_string(r) + "/" + a.header[c],
                       a.rows[r][c], b.rows[r][c],
                       column_tolerance(tolerance_spec, file, a.header[c]),
                       report);
    } else {
      json a, b;
      std::ifstream(pa) >> a;
      std::ifstream(pb) >> b;
      compare_json(file, "", a, b, tolerance_spec, report);
    }
  }
  return report;
}

}  // namespace weakflow
