#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "weakflow/spectral.hpp"

namespace weakflow {

/// Scalar Fourier multiplier with the zero-mode convention: the symbol value
/// at k = 0 is fixed to zero, matching mean-free data.
struct MultiplierSymbol {
  std::string name;
  std::function<std::complex<double>(const Eigen::Vector3d&)> symbol;

  SpectralField apply(const SpectralField& spec) const;
};

/// 3x3 matrix-valued multiplier (the Leray projector).
struct MatrixMultiplierSymbol {
  std::string name;
  std::function<Eigen::Matrix3cd(const Eigen::Vector3d&)> symbol;

  SpectralVectorField apply(const SpectralVectorField& spec) const;
};

MultiplierSymbol inverse_laplacian_symbol();
MultiplierSymbol heat_symbol(double t);
MatrixMultiplierSymbol leray_symbol();

/// Physical wavevector of a bin.
Eigen::Vector3d wavevector(const GridSpec& grid, long idx);

/// Divide by |k|^2 away from k = 0; the zero mode stays zero. Inputs with a
/// non-negligible mean (|c(0)| > 1e-12 max|c|) are rejected.
SpectralField inv_laplacian(const SpectralField& spec);
SpectralVectorField inv_laplacian(const SpectralVectorField& spec);

/// Multiply by -|k|^2 (the Laplacian).
SpectralField laplacian(const SpectralField& spec);
SpectralVectorField laplacian(const SpectralVectorField& spec);

SpectralVectorField gradient(const SpectralField& spec);
SpectralField divergence(const SpectralVectorField& spec);

/// Projection onto divergence-free fields, c - k (k.c)/|k|^2; the zero mode
/// is set to zero.
SpectralVectorField leray_project(const SpectralVectorField& spec);

/// Multiply by exp(-t |k|^2); t < 0 is rejected.
SpectralField heat_semigroup(const SpectralField& spec, double t);
SpectralVectorField heat_semigroup(const SpectralVectorField& spec, double t);

/// 2/3-rule mask: zero every bin with 3 |m_i| > N on any axis.
SpectralField dealias_23(SpectralField spec);
SpectralVectorField dealias_23(SpectralVectorField spec);
ScalarField dealiased(const ScalarField& field);
VectorField dealiased(const VectorField& field);

/// Max over k != 0 of |k.c(k)| / |k| relative to the largest coefficient.
double divergence_defect(const SpectralVectorField& spec);
double divergence_defect(const VectorField& field);

/// Kernel map -(-Delta)^-1 P div applied to a raw 3x3 tensor
/// (T[3i+j] = T_ij), without dealiasing; linear in T.
VectorField apply_m1(const std::array<ScalarField, 9>& tensor);

/// Kernel map (-Delta)^-1 P applied to a vector field whose zero mode is
/// projected out first; linear.
VectorField apply_m3(const VectorField& w);

/// -(-Delta)^-1 P div(u (x) v), products formed in physical space under the
/// 2/3 rule. Output is divergence-free.
VectorField bilinear_B(const VectorField& u, const VectorField& v);

/// -(-Delta)^-1 div(theta u), dealiased product.
ScalarField bilinear_B2(const ScalarField& theta, const VectorField& u);

/// (-Delta)^-1 P(theta gvec). The dealiased product's spurious zero mode is
/// projected out; its magnitude is reported through projected_mean when given.
VectorField linear_L(const ScalarField& theta, const VectorField& gvec,
                     double* projected_mean = nullptr);

/// -(-Delta)^-1 P div(phi u (x) u) with the localizer multiplied in physical
/// space. phi == 1 reduces to bilinear_B(u, u).
VectorField toy_bilinear(const VectorField& u, const ScalarField& phi);

/// phi(x) = c / (1 + |x|^2) sampled at cell centers.
ScalarField make_toy_localizer(const GridSpec& grid, double c);

struct WeightedSup {
  double sup = 0.0;
  double argmax_t = 0.0;
};

/// sup over the t grid of t^{3/(2p)} ||e^{t Delta} f||_inf.
WeightedSup semigroup_weighted_sup(const ScalarField& field, double p,
                                   const std::vector<double>& t_grid);

}  // namespace weakflow
