#pragma once

#include <string>

#include "weakflow/grid.hpp"

namespace weakflow {

/// Flat binary field format: magic "WKFL", version (u32 LE), N (u32 LE),
/// L (f64 LE), then N^3 little-endian f64 samples in row-major order with
/// x1 fastest.
void write_field(const ScalarField& field, const std::string& path);
ScalarField read_field(const std::string& path);

/// Vector fields persist as one file per component with suffixes
/// _x1/_x2/_x3 before the extension.
void write_field(const VectorField& field, const std::string& path);
VectorField read_vector_field(const std::string& path);

}  // namespace weakflow
