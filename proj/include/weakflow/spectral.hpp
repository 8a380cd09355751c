#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "weakflow/grid.hpp"

namespace weakflow {

/// Fourier coefficients of a field, one complex value per wavenumber bin.
///
/// Coefficients are mode amplitudes relative to the cell-center sampling:
/// f(x) = sum_k c(k) exp(i k.x) with x a cell center, so a pure cosine of unit
/// amplitude carries coefficient 1/2 at +k and -k. Bin layout matches the
/// physical layout (x1 fastest).
struct SpectralField {
  GridSpec grid;
  Eigen::ArrayXcd coeff;

  SpectralField() = default;
  explicit SpectralField(const GridSpec& g)
      : grid(g), coeff(Eigen::ArrayXcd::Zero(g.size())) {}
  SpectralField(const GridSpec& g, Eigen::ArrayXcd c);
};

struct SpectralVectorField {
  GridSpec grid;
  std::array<SpectralField, 3> comp;

  SpectralVectorField() = default;
  explicit SpectralVectorField(const GridSpec& g)
      : grid(g), comp{SpectralField(g), SpectralField(g), SpectralField(g)} {}
  SpectralVectorField(SpectralField c1, SpectralField c2, SpectralField c3);

  SpectralField& operator[](int i) { return comp[static_cast<size_t>(i)]; }
  const SpectralField& operator[](int i) const {
    return comp[static_cast<size_t>(i)];
  }
};

/// Physical to spectral transform. Rejects non-finite input.
SpectralField forward_transform(const ScalarField& field);
SpectralVectorField forward_transform(const VectorField& field);

/// Spectral to physical transform. Rejects Hermitian defects beyond 1e-8
/// relative to the largest coefficient.
ScalarField inverse_transform(const SpectralField& spec);
VectorField inverse_transform(const SpectralVectorField& spec);

/// Max |c(-k) - conj(c(k))| over bins where -k is representable, relative to
/// max |c|; zero for the zero field.
double hermitian_defect(const SpectralField& spec);

/// Spectral side of the Parseval identity: L^3 sum |c|^2. Matches
/// sum |values|^2 h^3 on the physical side.
double spectral_energy(const SpectralField& spec);
double physical_energy(const ScalarField& field);

/// amplitude * cos(2*pi k.x / L + phase) sampled at cell centers. Each |k_i|
/// must be < N/2; k = 0 yields the constant amplitude*cos(phase).
ScalarField make_wave(const GridSpec& grid, const Eigen::Vector3i& k,
                      double amplitude, double phase);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double c, const SpectralField& a);
SpectralVectorField operator+(const SpectralVectorField& a,
                              const SpectralVectorField& b);
SpectralVectorField operator-(const SpectralVectorField& a,
                              const SpectralVectorField& b);
SpectralVectorField operator*(double c, const SpectralVectorField& a);

}  // namespace weakflow
