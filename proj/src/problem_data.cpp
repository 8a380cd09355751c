#include "weakflow/problem_data.hpp"

#include <cmath>
#include <stdexcept>

namespace weakflow {

namespace {

std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t stream) {
  return seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_uniform(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

// Coefficients are keyed by the signed mode, not by traversal order, so one
// seed describes the same band-limited function on every grid that resolves
// the band. Refinement runs then compare like with like.
std::uint64_t mode_key(std::uint64_t seed, int m1, int m2, int m3) {
  const std::uint64_t packed = (static_cast<std::uint64_t>(m1 + 512)) |
                               (static_cast<std::uint64_t>(m2 + 512) << 20) |
                               (static_cast<std::uint64_t>(m3 + 512) << 40);
  std::uint64_t state = seed;
  std::uint64_t mixed = splitmix64(state) ^ packed;
  return splitmix64(mixed);
}

}  // namespace

SpectralField random_annulus_spectrum(const GridSpec& grid, std::uint64_t seed,
                                      int k_min, int k_max, double amplitude,
                                      bool even_symmetric) {
  if (k_min < 1)
    throw std::invalid_argument("random_annulus_spectrum: k_min must be >= 1");
  if (3 * k_max >= grid.points_per_axis)
    throw std::invalid_argument(
        "random_annulus_spectrum: k_max must stay below N/3 for dealias "
        "headroom");
  if (k_max < k_min)
    throw std::invalid_argument("random_annulus_spectrum: empty band");

  SpectralField spec(grid);
  const int n = grid.points_per_axis;
  // Fill only the lexicographically positive half; conjugates land on the
  // mirrored bin, so the field is real.
  for (int b3 = 0; b3 < n; ++b3)
    for (int b2 = 0; b2 < n; ++b2)
      for (int b1 = 0; b1 < n; ++b1) {
        const int m1 = grid.signed_mode(b1);
        const int m2 = grid.signed_mode(b2);
        const int m3 = grid.signed_mode(b3);
        const bool positive_half =
            m3 > 0 || (m3 == 0 && (m2 > 0 || (m2 == 0 && m1 > 0)));
        if (!positive_half) continue;
        const double mag2 = static_cast<double>(m1) * m1 +
                            static_cast<double>(m2) * m2 +
                            static_cast<double>(m3) * m3;
        if (mag2 < static_cast<double>(k_min) * k_min ||
            mag2 > static_cast<double>(k_max) * k_max)
          continue;
        std::uint64_t state = mode_key(seed, m1, m2, m3);
        const double re = 2.0 * unit_uniform(state) - 1.0;
        const double im =
            even_symmetric ? 0.0 : 2.0 * unit_uniform(state) - 1.0;
        const std::complex<double> c = amplitude * std::complex<double>(re, im);
        spec.coeff[grid.index(b1, b2, b3)] = c;
        spec.coeff[grid.index((n - b1) % n, (n - b2) % n, (n - b3) % n)] =
            std::conj(c);
      }
  return spec;
}

VectorField random_solenoidal_field(const GridSpec& grid, std::uint64_t seed,
                                    int k_min, int k_max, double amplitude) {
  SpectralVectorField spec(grid);
  for (int i = 0; i < 3; ++i)
    spec[i] = random_annulus_spectrum(grid, mix_stream(seed, 11 + i), k_min,
                                      k_max, amplitude);
  return inverse_transform(leray_project(spec));
}

ProblemData well_prepared_data(const GridSpec& grid, std::uint64_t seed,
                               int k_min, int k_max, double amplitude) {
  const SpectralField g_spec = random_annulus_spectrum(
      grid, mix_stream(seed, 0), k_min, k_max, amplitude,
      /*even_symmetric=*/true);
  SpectralVectorField f_spec(grid);
  for (int i = 0; i < 3; ++i)
    f_spec[i] =
        random_annulus_spectrum(grid, mix_stream(seed, 1 + i), k_min, k_max,
                                amplitude, /*even_symmetric=*/true);

  ProblemData data;
  data.g_force = inverse_transform(g_spec);
  data.f_force = inverse_transform(f_spec);
  // Gravity reuses g's spectral profile in every component (condition (28)
  // path): the pairing against (-Delta)^-1 g is a positive diagonal sum.
  data.gravity = {data.g_force, data.g_force, data.g_force};
  data.lifted_u0 = inverse_transform(inv_laplacian(leray_project(f_spec)));
  data.lifted_theta0 = inverse_transform(inv_laplacian(g_spec));
  return data;
}

ProblemData with_toy_localizer(ProblemData data, double c) {
  data.toy_localizer = make_toy_localizer(data.grid(), c);
  return data;
}

ProblemData scaled(const ProblemData& data, double force_scale,
                   double gravity_scale) {
  ProblemData out = data;
  out.f_force = force_scale * data.f_force;
  out.g_force = force_scale * data.g_force;
  out.lifted_u0 = force_scale * data.lifted_u0;
  out.lifted_theta0 = force_scale * data.lifted_theta0;
  out.gravity = gravity_scale * data.gravity;
  return out;
}

ProblemData without_force(ProblemData data) {
  data.f_force = VectorField(data.grid());
  data.lifted_u0 = VectorField(data.grid());
  return data;
}

double nondegeneracy_pairing(const ProblemData& data, int i) {
  return inner(data.lifted_theta0, data.gravity[i]);
}

double lift_consistency_defect(const ProblemData& data) {
  const SpectralVectorField f_spec = forward_transform(data.f_force);
  const SpectralVectorField u0_spec = forward_transform(data.lifted_u0);
  const SpectralField g_spec = forward_transform(data.g_force);
  const SpectralField t0_spec = forward_transform(data.lifted_theta0);

  const SpectralVectorField pf = leray_project(f_spec);
  const SpectralVectorField lap_u0 = laplacian(u0_spec);
  const SpectralField lap_t0 = laplacian(t0_spec);

  double scale = 0.0;
  for (int i = 0; i < 3; ++i)
    scale = std::max(scale, pf[i].coeff.abs().maxCoeff());
  scale = std::max(scale, g_spec.coeff.abs().maxCoeff());
  if (scale == 0.0) return 0.0;

  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    worst = std::max(worst, (pf[i].coeff + lap_u0[i].coeff).abs().maxCoeff());
  // g carries its mean convention through the lift, so compare mean-free.
  Eigen::ArrayXcd g_residual = g_spec.coeff + lap_t0.coeff;
  g_residual[0] = 0.0;
  worst = std::max(worst, g_residual.abs().maxCoeff());
  return worst / scale;
}

}  // namespace weakflow
