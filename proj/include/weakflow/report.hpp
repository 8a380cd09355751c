#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

namespace weakflow {

/// Round-trip float formatting ("%.17g"); identical inputs give identical
/// report bytes on one platform.
std::string format_float(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(const std::string& path) const;
  static CsvTable read(const std::string& path);
};

struct DiffEntry {
  std::string file;
  std::string location;
  std::string a;
  std::string b;
  double relative = 0.0;
  double tolerance = 0.0;
};

struct DiffReport {
  std::vector<DiffEntry> violations;
  std::vector<std::string> compared_files;
  bool empty() const { return violations.empty(); }
};

/// Fieldwise comparison of two run directories against per-column relative
/// tolerances. The tolerance spec maps file name -> column name (or "*") ->
/// tolerance, with a top-level "default". Manifest timing entries are
/// skipped. Files present in one directory only, or with differing schemas,
/// are rejected.
DiffReport compare_reports(const std::string& dir_a, const std::string& dir_b,
                           const nlohmann::json& tolerance_spec);

}  // namespace weakflow
