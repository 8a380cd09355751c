#pragma once

#include <vector>

#include "weakflow/picard.hpp"

namespace weakflow {

/// Time-grid states of the mild-solution integrator with per-time norms.
struct Trajectory {
  std::vector<double> times;
  std::vector<VectorField> v_states;
  std::vector<ScalarField> theta_states;
  std::vector<double> v_l2, v_sup, theta_l2, theta_sup;
  bool aborted = false;  ///< blow-up sentinel tripped; trajectory is partial

  size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
};

/// Advances the Duhamel form step by step: the semigroup factor is applied
/// exactly per mode while the integrand is interpolated linearly in s between
/// the step endpoints (trapezoidal weights phi1/phi2), with the implicit
/// endpoint resolved by picard_depth inner sweeps. Aborts with a partial
/// trajectory once any norm exceeds 1e6 times the initial scale.
Trajectory mild_solve(const VectorField& v0, const ScalarField& theta0,
                      const ProblemData& data, double horizon, int steps,
                      int picard_depth);

struct CondSup {
  double v_sup = 0.0;
  double v_argmax_t = 0.0;
  double theta_sup = 0.0;
  double theta_argmax_t = 0.0;
};

/// sup over stored times (t = 0 excluded, where the weight degenerates) of
/// t^{3/(2p)} ||v||_inf and t^{3/(2p)} ||theta||_inf.
CondSup cond_sup_diagnostic(const Trajectory& traj, double p);

/// Feeds a steady solution through the flow and returns the max over stored
/// times of the relative L^2 drift. Drift above 1e-2 indicates an
/// inconsistency between solver and integrator.
double steadiness_check(const VectorField& u_steady,
                        const ScalarField& theta_steady,
                        const ProblemData& data, double horizon, int steps,
                        int picard_depth = 3);

}  // namespace weakflow
