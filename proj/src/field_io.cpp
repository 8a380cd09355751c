#include "weakflow/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace weakflow {

namespace {

constexpr char kMagic[4] = {'W', 'K', 'F', 'L'};
constexpr std::uint32_t kVersion = 1;

static_assert(sizeof(double) == 8, "field format requires 8-byte doubles");

std::string component_path(const std::string& path, int i) {
  const std::string suffix = "_x" + std::to_string(i + 1);
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix + path.substr(dot);
}

}  // namespace

void write_field(const ScalarField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_field: cannot open " + path);
  out.write(kMagic, 4);
  const std::uint32_t version = kVersion;
  const std::uint32_t n = static_cast<std::uint32_t>(field.grid.points_per_axis);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&field.grid.box_length), 8);
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * 8));
  if (!out) throw std::runtime_error("write_field: short write to " + path);
}

ScalarField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_field: cannot open " + path);
  char magic[4];
  std::uint32_t version = 0, n = 0;
  double box_length = 0.0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&box_length), 8);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("read_field: bad magic in " + path);
  if (version != kVersion)
    throw std::runtime_error("read_field: unsupported version in " + path);
  ScalarField field(GridSpec::make(static_cast<int>(n), box_length));
  in.read(reinterpret_cast<char*>(field.values.data()),
          static_cast<std::streamsize>(field.values.size() * 8));
  if (!in) throw std::runtime_error("read_field: truncated file " + path);
  return field;
}

void write_field(const VectorField& field, const std::string& path) {
  for (int i = 0; i < 3; ++i) write_field(field[i], component_path(path, i));
}

VectorField read_vector_field(const std::string& path) {
  return {read_field(component_path(path, 0)),
          read_field(component_path(path, 1)),
          read_field(component_path(path, 2))};
}

}  // namespace weakflow
