#pragma once

#include <array>

#include "weakflow/grid.hpp"

namespace weakflow {

/// Integral of 1/|z| over the unit cube [-1/2,1/2]^3, evaluated once by
/// dyadic-shell Gauss quadrature to 1e-8 and cached. Scales to the self-cell
/// contribution of the Newton quadrature as c_cell * h^2.
double unit_cell_self_integral();

struct PotentialValue {
  double value = 0.0;
  bool boundary_warning = false;
};

/// Max boundary-shell |value| over max |value|; 0 for the zero field.
double boundary_decay_ratio(const ScalarField& source);

/// (1/4pi) sum over cells of source * h^3 / |x - y|, with the self cell (when
/// x lies inside one) replaced by the analytic correction
/// (1/4pi) * source(cell) * c_cell * h^2. A failed boundary-decay check
/// (shell max >= 1e-6 * max) attaches a warning instead of rejecting.
PotentialValue newton_potential_at(const ScalarField& source,
                                   const Eigen::Vector3d& x);

/// Oseen tensor (1/8pi)(I/r + z z^T / r^3): the kernel of (-Delta)^-1 P,
/// the Newton potential composed with the biharmonic Hessian correction.
Eigen::Matrix3d oseen_tensor(const Eigen::Vector3d& z);

/// sum over cells of O(x - y) source(y) h^3; cells closer than h/2 to x are
/// skipped, so x should sit outside the effective support.
Eigen::Vector3d oseen_sum(const VectorField& source, const Eigen::Vector3d& x);

/// Evaluates -(-Delta)^-1 P div(T) at x by grad-Oseen quadrature of the
/// 3x3 tensor T (component order T[3i+j] = T_ij).
Eigen::Vector3d grad_oseen_divergence_sum(
    const std::array<ScalarField, 9>& tensor, const Eigen::Vector3d& x);

/// Evaluates (-Delta)^-1 div(w) at x through the Newton-kernel gradient:
/// sum of (x - y).w(y) h^3 / (4pi |x - y|^3).
double inv_laplacian_divergence_sum(const VectorField& w,
                                    const Eigen::Vector3d& x);

}  // namespace weakflow
