#pragma once

#include <string>
#include <vector>

#include "weakflow/picard.hpp"

namespace weakflow {

/// Radial cut-offs phi_R(x) = psi(|x|/R) built from one fixed C^2 profile:
/// psi = 1 below 1/2, a quintic smoothstep down to 0 at 1. The profile is
/// pinned so reports reproduce bit-for-bit.
struct CutoffFamily {
  std::vector<double> radii;

  static double profile(double r);
  static double profile_derivative(double r);
  static ScalarField field(const GridSpec& grid, double R);
  /// Analytic |grad phi_R| sampled at cell centers; support lies in the
  /// annulus C(R/2, R) by construction.
  static ScalarField gradient_magnitude(const GridSpec& grid, double R);
};

struct CaccioppoliSides {
  double lhs = 0.0;        ///< integral of |grad theta|^2 over B_{R/2}
  double rhs_term1 = 0.0;  ///< (int_C |theta|^p)^{2/p} R^{1-6/p}
  double rhs_term2 = 0.0;  ///< (int_C |theta|^p)^{2/p} R^{2-9/p} (int_C |u|^p)^{1/p}
};

/// Both sides of the local energy estimate on the ball B_{R/2} with annulus
/// C(R/2, R). The gradient is spectral, the masked integrals are cell sums.
/// Requires R <= L/2 and p > 3.
CaccioppoliSides caccioppoli_sides(const ScalarField& theta,
                                   const VectorField& u, double R, double p);

struct LiouvilleReport {
  std::vector<double> radii;
  std::vector<double> tail_norm;      ///< ||1_C theta||_{L^{9/2,q}} per radius
  std::vector<double> grad_l2_ball;   ///< lhs per radius
  std::vector<CaccioppoliSides> sides;
  double c_emp = 0.0;    ///< max lhs/(rhs1+rhs2) over the sweep
  double residual = 0.0; ///< homogeneous fixed-point residual of the input
  std::string verdict;   ///< trivial | non-trivial-flagged | rejected
};

/// Diagnostics for the homogeneous system: annulus Lorentz tails, gradient
/// energies over growing balls and the Caccioppoli sides across radii.
/// Inputs failing the homogeneous residual gate are rejected unless the test
/// bypass is set. The verdict is trivial when ||u||_2 + ||theta||_2 falls
/// below 1e-8 times the grid scale L^{3/2}.
LiouvilleReport liouville_verdict(const VectorField& u,
                                  const ScalarField& theta,
                                  const ProblemData& data, double p, double q,
                                  const std::vector<double>& radii,
                                  bool bypass_residual_gate = false);

}  // namespace weakflow
