#include "weakflow/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <stdexcept>
#include <vector>
#include <numbers>

#include "weakflow/parallel.hpp"

namespace weakflow {

namespace {

using Complex = std::complex<double>;

// In-place unnormalized 3D DFT over the x1-fastest layout. sign = -1 is the
// analysis direction, sign = +1 the synthesis direction.
void fft3(Eigen::ArrayXcd& data, int n, int sign) {
  const long n2 = static_cast<long>(n) * n;
  struct AxisPlan {
    long count;
    long stride;
    long base_of(long line, int n) const {
      if (stride == 1) return line * n;                          // axis 0
      if (stride == n) return (line % n) + n * n * (line / n);   // axis 1
      return line;                                               // axis 2
    }
  };
  const AxisPlan plans[3] = {{n2, 1}, {n2, static_cast<long>(n)}, {n2, n2}};

  for (const auto& plan : plans) {
    parallel_for(plan.count, [&](long line) {
      thread_local Eigen::FFT<double> fft;
      thread_local std::vector<Complex> in, out;
      fft.SetFlag(Eigen::FFT<double>::Unscaled);
      in.resize(n);
      out.resize(n);
      const long base = plan.base_of(line, n);
      const Complex* src = data.data();
      for (int i = 0; i < n; ++i) in[i] = src[base + i * plan.stride];
      if (sign < 0) {
        fft.fwd(out, in);
      } else {
        fft.inv(out, in);
      }
      Complex* dst = data.data();
      for (int i = 0; i < n; ++i) dst[base + i * plan.stride] = out[i];
    });
  }
}

// Per-axis phase relating raw DFT bins to cell-center mode amplitudes:
// exp(i*k*x_j) = exp(2*pi*i*m*j/N) * phase(m) with m the signed mode.
Eigen::ArrayXcd axis_phase(const GridSpec& g) {
  const int n = g.points_per_axis;
  Eigen::ArrayXcd phase(n);
  for (int b = 0; b < n; ++b) {
    const int m = g.signed_mode(b);
    phase[b] = std::polar(1.0, std::numbers::pi * m / n) *
               std::polar(1.0, -std::numbers::pi * m);
  }
  return phase;
}

void apply_phase(Eigen::ArrayXcd& coeff, const GridSpec& g, bool conjugate) {
  const int n = g.points_per_axis;
  const Eigen::ArrayXcd ph = axis_phase(g);
  parallel_for(g.size(), [&](long idx) {
    const int b1 = static_cast<int>(idx % n);
    const int b2 = static_cast<int>((idx / n) % n);
    const int b3 = static_cast<int>(idx / (static_cast<long>(n) * n));
    Complex p = ph[b1] * ph[b2] * ph[b3];
    if (conjugate) p = std::conj(p);
    coeff[idx] *= p;
  });
}

}  // namespace

SpectralField::SpectralField(const GridSpec& g, Eigen::ArrayXcd c)
    : grid(g), coeff(std::move(c)) {
  if (coeff.size() != grid.size())
    throw std::invalid_argument(
        "SpectralField: coefficient count does not match N^3");
}

SpectralVectorField::SpectralVectorField(SpectralField c1, SpectralField c2,
                                         SpectralField c3)
    : grid(c1.grid), comp{std::move(c1), std::move(c2), std::move(c3)} {
  require_same_grid(comp[0].grid, comp[1].grid, "SpectralVectorField");
  require_same_grid(comp[0].grid, comp[2].grid, "SpectralVectorField");
}

SpectralField forward_transform(const ScalarField& field) {
  if (!field.all_finite())
    throw std::invalid_argument("forward_transform: non-finite sample values");
  SpectralField spec(field.grid);
  spec.coeff = field.values.cast<Complex>();
  fft3(spec.coeff, field.grid.points_per_axis, -1);
  spec.coeff /= static_cast<double>(field.grid.size());
  apply_phase(spec.coeff, field.grid, /*conjugate=*/true);
  return spec;
}

SpectralVectorField forward_transform(const VectorField& field) {
  return {forward_transform(field[0]), forward_transform(field[1]),
          forward_transform(field[2])};
}

ScalarField inverse_transform(const SpectralField& spec) {
  const double defect = hermitian_defect(spec);
  if (defect > 1e-8)
    throw std::invalid_argument(
        "inverse_transform: Hermitian symmetry defect " +
        std::to_string(defect) + " exceeds 1e-8");
  Eigen::ArrayXcd work = spec.coeff;
  apply_phase(work, spec.grid, /*conjugate=*/false);
  fft3(work, spec.grid.points_per_axis, +1);
  ScalarField out(spec.grid);
  out.values = work.real();
  return out;
}

VectorField inverse_transform(const SpectralVectorField& spec) {
  return {inverse_transform(spec[0]), inverse_transform(spec[1]),
          inverse_transform(spec[2])};
}

double hermitian_defect(const SpectralField& spec) {
  const int n = spec.grid.points_per_axis;
  const double scale = spec.coeff.abs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (int b3 = 0; b3 < n; ++b3)
    for (int b2 = 0; b2 < n; ++b2)
      for (int b1 = 0; b1 < n; ++b1) {
        // Bins on the -N/2 planes have no representable partner mode.
        if (b1 == n / 2 || b2 == n / 2 || b3 == n / 2) continue;
        const long idx = spec.grid.index(b1, b2, b3);
        const long neg = spec.grid.index((n - b1) % n, (n - b2) % n,
                                         (n - b3) % n);
        worst = std::max(worst, std::abs(spec.coeff[neg] -
                                         std::conj(spec.coeff[idx])));
      }
  return worst / scale;
}

double spectral_energy(const SpectralField& spec) {
  const double l3 = std::pow(spec.grid.box_length, 3);
  return l3 * spec.coeff.abs2().sum();
}

double physical_energy(const ScalarField& field) {
  return field.values.square().sum() * field.grid.cell_volume();
}

ScalarField make_wave(const GridSpec& grid, const Eigen::Vector3i& k,
                      double amplitude, double phase) {
  const int n = grid.points_per_axis;
  for (int ax = 0; ax < 3; ++ax)
    if (std::abs(k[ax]) >= n / 2)
      throw std::invalid_argument("make_wave: |k_i| must be below N/2");
  ScalarField out(grid);
  const double kfac = 2.0 * std::numbers::pi / grid.box_length;
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2) {
      const double partial =
          kfac * (k[1] * grid.coord(i2) + k[2] * grid.coord(i3)) + phase;
      for (int i1 = 0; i1 < n; ++i1)
        out.values[grid.index(i1, i2, i3)] =
            amplitude * std::cos(kfac * k[0] * grid.coord(i1) + partial);
    }
  return out;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid, "SpectralField +");
  return {a.grid, a.coeff + b.coeff};
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a.grid, b.grid, "SpectralField -");
  return {a.grid, a.coeff - b.coeff};
}

SpectralField operator*(double c, const SpectralField& a) {
  return {a.grid, c * a.coeff};
}

SpectralVectorField operator+(const SpectralVectorField& a,
                              const SpectralVectorField& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

SpectralVectorField operator-(const SpectralVectorField& a,
                              const SpectralVectorField& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

SpectralVectorField operator*(double c, const SpectralVectorField& a) {
  return {c * a[0], c * a[1], c * a[2]};
}

}  // namespace weakflow
