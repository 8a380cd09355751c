#pragma once

#include <cstdint>
#include <optional>

#include "weakflow/multiplier.hpp"

namespace weakflow {

/// External forces and gravity together with the lifted data the fixed point
/// iteration starts from: u0 = (-Delta)^-1 P(f), theta0 = (-Delta)^-1 g.
struct ProblemData {
  VectorField f_force;
  ScalarField g_force;
  VectorField gravity;
  VectorField lifted_u0;
  ScalarField lifted_theta0;
  std::optional<ScalarField> toy_localizer;

  const GridSpec& grid() const { return g_force.grid; }
};

/// Builds forces with spectral support strictly inside the annulus
/// [k_min, k_max] (in units of 2*pi/L) and exactly zero mean. The gravity
/// field reuses g's spectral profile componentwise, which makes the pairing
/// integral of (-Delta)^-1(g) against every gravity component positive by
/// construction. Requires k_min >= 1 and 3*k_max < N.
ProblemData well_prepared_data(const GridSpec& grid, std::uint64_t seed,
                               int k_min, int k_max, double amplitude);

/// Attaches the localizer c / (1 + |x|^2) for toy-model runs.
ProblemData with_toy_localizer(ProblemData data, double c);

/// Rescales forces (with their lifts) and gravity independently; both maps
/// are linear.
ProblemData scaled(const ProblemData& data, double force_scale,
                   double gravity_scale);

/// Drops the velocity force (f and its lift). The far-field profile runs use
/// this: the box restriction of a periodic force keeps truncation moments
/// that a Schwartz force would not have, and the profile mechanism only
/// needs g and the gravity.
ProblemData without_force(ProblemData data);

/// Pairing integral of (-Delta)^-1(g) against gravity component i.
double nondegeneracy_pairing(const ProblemData& data, int i);

/// Max relative defect of the lifted fields against their defining
/// equations, for invariant checks.
double lift_consistency_defect(const ProblemData& data);

/// Hermitian random spectrum supported on the annulus, zero elsewhere.
/// even_symmetric draws real coefficients: the sampled field is then even in
/// x and all its odd box moments cancel exactly, which keeps far-field
/// truncation dipoles out of the well-prepared data.
SpectralField random_annulus_spectrum(const GridSpec& grid, std::uint64_t seed,
                                      int k_min, int k_max, double amplitude,
                                      bool even_symmetric = false);

/// Divergence-free random band-limited vector field (probe generator).
VectorField random_solenoidal_field(const GridSpec& grid, std::uint64_t seed,
                                    int k_min, int k_max, double amplitude);

}  // namespace weakflow
