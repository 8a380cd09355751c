#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <numbers>

namespace weakflow {

/// Uniform periodic box [-L/2, L/2)^3 with N cells per axis.
///
/// Samples live at cell centers x_i = (i + 1/2) h - L/2 with h = L/N, and the
/// linear index runs x1 fastest: idx = i1 + N*(i2 + N*i3). Wavenumbers are
/// integer multiples of 2*pi/L with signed mode indices in [-N/2, N/2).
struct GridSpec {
  double box_length = 0.0;
  int points_per_axis = 0;

  /// Validates N even, N >= 8, L > 0.
  static GridSpec make(int points_per_axis, double box_length);

  double spacing() const { return box_length / points_per_axis; }
  double cell_volume() const {
    const double h = spacing();
    return h * h * h;
  }
  long size() const {
    const long n = points_per_axis;
    return n * n * n;
  }

  /// Cell-center coordinate along one axis for i in [0, N).
  double coord(int i) const { return (i + 0.5) * spacing() - 0.5 * box_length; }

  /// Signed mode index for an FFT bin: bin < N/2 maps to bin, else bin - N.
  int signed_mode(int bin) const {
    return bin < points_per_axis / 2 ? bin : bin - points_per_axis;
  }

  /// Physical wavenumber 2*pi*m/L for the FFT bin.
  double wavenumber(int bin) const {
    return 2.0 * std::numbers::pi * signed_mode(bin) / box_length;
  }

  long index(int i1, int i2, int i3) const {
    const long n = points_per_axis;
    return i1 + n * (i2 + n * i3);
  }

  std::array<int, 3> unravel(long idx) const {
    const int n = points_per_axis;
    return {static_cast<int>(idx % n), static_cast<int>((idx / n) % n),
            static_cast<int>(idx / (static_cast<long>(n) * n))};
  }

  Eigen::Vector3d cell_center(long idx) const {
    const auto t = unravel(idx);
    return {coord(t[0]), coord(t[1]), coord(t[2])};
  }

  /// Shortest displacement between cell centers on the torus.
  double torus_distance(long a, long b) const;

  bool operator==(const GridSpec&) const = default;
};

/// Real sample per cell.
struct ScalarField {
  GridSpec grid;
  Eigen::ArrayXd values;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g)
      : grid(g), values(Eigen::ArrayXd::Zero(g.size())) {}
  ScalarField(const GridSpec& g, Eigen::ArrayXd v);

  bool all_finite() const { return values.isFinite().all(); }
  double mean() const { return values.mean(); }
};

/// Three scalar components on one shared grid.
struct VectorField {
  GridSpec grid;
  std::array<ScalarField, 3> comp;

  VectorField() = default;
  explicit VectorField(const GridSpec& g)
      : grid(g), comp{ScalarField(g), ScalarField(g), ScalarField(g)} {}
  VectorField(ScalarField c1, ScalarField c2, ScalarField c3);

  ScalarField& operator[](int i) { return comp[static_cast<size_t>(i)]; }
  const ScalarField& operator[](int i) const {
    return comp[static_cast<size_t>(i)];
  }
  bool all_finite() const {
    return comp[0].all_finite() && comp[1].all_finite() && comp[2].all_finite();
  }
};

/// Pointwise Euclidean magnitude |v| as a scalar field.
ScalarField magnitude(const VectorField& v);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double c, const VectorField& a);

/// Discrete L^p norm (sum |v|^p h^3)^(1/p); p = infinity gives max |v|.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField& f, double p);

/// L^2 inner product sum(a*b) h^3.
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace weakflow
