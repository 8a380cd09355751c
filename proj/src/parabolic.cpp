#include "weakflow/parabolic.hpp"

#include <cmath>
#include <stdexcept>

#include "weakflow/parallel.hpp"

namespace weakflow {

namespace {

struct PairSpectrum {
  SpectralVectorField v;
  SpectralField theta;
};

// Right side of the Duhamel integrand: G_v = P(-div(v (x) v) + theta g + f),
// G_theta = -div(theta v) + g, with dealiased products.
PairSpectrum integrand(const SpectralVectorField& v_spec,
                       const SpectralField& theta_spec,
                       const SpectralVectorField& f_spec,
                       const SpectralField& g_spec,
                       const VectorField& gravity_dealiased) {
  const GridSpec& grid = v_spec.grid;
  const VectorField v = inverse_transform(dealias_23(v_spec));
  const ScalarField theta = inverse_transform(dealias_23(theta_spec));

  SpectralVectorField rhs_v(grid);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ScalarField prod(grid);
      prod.values = v[i].values * v[j].values;
      const SpectralField w = dealias_23(forward_transform(prod));
      parallel_for(grid.size(), [&](long idx) {
        rhs_v[i].coeff[idx] -=
            std::complex<double>(0.0, wavevector(grid, idx)[j]) * w.coeff[idx];
      });
    }
    ScalarField buoyancy(grid);
    buoyancy.values = theta.values * gravity_dealiased[i].values;
    rhs_v[i] = rhs_v[i] + dealias_23(forward_transform(buoyancy)) + f_spec[i];
    rhs_v[i].coeff[0] = 0.0;
  }

  PairSpectrum out;
  out.v = leray_project(rhs_v);
  out.theta = SpectralField(grid);
  for (int j = 0; j < 3; ++j) {
    ScalarField prod(grid);
    prod.values = theta.values * v[j].values;
    const SpectralField w = dealias_23(forward_transform(prod));
    parallel_for(grid.size(), [&](long idx) {
      out.theta.coeff[idx] -=
          std::complex<double>(0.0, wavevector(grid, idx)[j]) * w.coeff[idx];
    });
  }
  out.theta = out.theta + g_spec;
  out.theta.coeff[0] = 0.0;
  return out;
}

struct StepWeights {
  Eigen::ArrayXd decay;  // e^{-a}
  Eigen::ArrayXd w_left;   // tau * phi2
  Eigen::ArrayXd w_right;  // tau * (phi1 - phi2)
};

StepWeights step_weights(const GridSpec& grid, double tau) {
  StepWeights w;
  w.decay.resize(grid.size());
  w.w_left.resize(grid.size());
  w.w_right.resize(grid.size());
  parallel_for(grid.size(), [&](long idx) {
    const double a = tau * wavevector(grid, idx).squaredNorm();
    const double e = std::exp(-a);
    double phi1, phi2;
    if (a < 1e-6) {
      phi1 = 1.0 - a / 2.0 + a * a / 6.0;
      phi2 = 0.5 - a / 3.0 + a * a / 8.0;
    } else {
      phi1 = (1.0 - e) / a;
      phi2 = (1.0 - e - a * e) / (a * a);
    }
    w.decay[idx] = e;
    w.w_left[idx] = tau * phi2;
    w.w_right[idx] = tau * (phi1 - phi2);
  });
  return w;
}

SpectralField advance_component(const SpectralField& state,
                                const SpectralField& g_left,
                                const SpectralField& g_right,
                                const StepWeights& w) {
  SpectralField out(state.grid);
  out.coeff = w.decay * state.coeff + w.w_left * g_left.coeff +
              w.w_right * g_right.coeff;
  return out;
}

}  // namespace

Trajectory mild_solve(const VectorField& v0, const ScalarField& theta0,
                      const ProblemData& data, double horizon, int steps,
                      int picard_depth) {
  if (!(horizon > 0.0)) throw std::invalid_argument("mild_solve: need T > 0");
  if (steps < 4) throw std::invalid_argument("mild_solve: need at least 4 steps");
  if (picard_depth < 2)
    throw std::invalid_argument("mild_solve: need picard_depth >= 2");
  require_same_grid(v0.grid, data.grid(), "mild_solve");
  require_same_grid(theta0.grid, data.grid(), "mild_solve");

  const GridSpec& grid = v0.grid;
  const double tau = horizon / steps;
  const StepWeights weights = step_weights(grid, tau);
  const SpectralVectorField f_spec = forward_transform(data.f_force);
  const SpectralField g_spec = forward_transform(data.g_force);
  const VectorField gravity_dealiased = dealiased(data.gravity);

  Trajectory traj;
  auto record = [&](double t, const VectorField& v, const ScalarField& th) {
    traj.times.push_back(t);
    traj.v_states.push_back(v);
    traj.theta_states.push_back(th);
    traj.v_l2.push_back(lp_norm(v, 2.0));
    traj.v_sup.push_back(magnitude(v).values.maxCoeff());
    traj.theta_l2.push_back(lp_norm(th, 2.0));
    traj.theta_sup.push_back(th.values.abs().maxCoeff());
  };
  record(0.0, v0, theta0);

  const double initial_scale =
      traj.v_l2[0] + traj.theta_l2[0] +
      lp_norm(data.lifted_u0, 2.0) + lp_norm(data.lifted_theta0, 2.0);
  const double sentinel =
      1e6 * (initial_scale > 0.0 ? initial_scale : 1.0);

  SpectralVectorField v_spec = forward_transform(v0);
  SpectralField theta_spec = forward_transform(theta0);

  for (int m = 1; m <= steps; ++m) {
    const PairSpectrum g_left = integrand(v_spec, theta_spec, f_spec,
                                          g_spec, gravity_dealiased);
    // Frozen-integrand predictor, then corrector sweeps for the implicit
    // right endpoint.
    SpectralVectorField v_next(grid);
    SpectralField theta_next(grid);
    for (int i = 0; i < 3; ++i)
      v_next[i] = advance_component(v_spec[i], g_left.v[i], g_left.v[i], weights);
    theta_next =
        advance_component(theta_spec, g_left.theta, g_left.theta, weights);

    for (int sweep = 0; sweep < picard_depth; ++sweep) {
      const PairSpectrum g_right = integrand(v_next, theta_next, f_spec,
                                             g_spec, gravity_dealiased);
      for (int i = 0; i < 3; ++i)
        v_next[i] =
            advance_component(v_spec[i], g_left.v[i], g_right.v[i], weights);
      theta_next = advance_component(theta_spec, g_left.theta, g_right.theta,
                                     weights);
    }

    v_spec = v_next;
    theta_spec = theta_next;
    record(m * tau, inverse_transform(v_spec), inverse_transform(theta_spec));
    if (traj.v_l2.back() + traj.theta_l2.back() > sentinel) {
      traj.aborted = true;
      break;
    }
  }
  return traj;
}

CondSup cond_sup_diagnostic(const Trajectory& traj, double p) {
  if (traj.times.empty())
    throw std::invalid_argument("cond_sup_diagnostic: empty trajectory");
  if (!(p >= 1.0))
    throw std::invalid_argument("cond_sup_diagnostic: p must be >= 1");
  CondSup out;
  for (size_t m = 1; m < traj.times.size(); ++m) {
    const double weight = std::pow(traj.times[m], 1.5 / p);
    if (weight * traj.v_sup[m] > out.v_sup) {
      out.v_sup = weight * traj.v_sup[m];
      out.v_argmax_t = traj.times[m];
    }
    if (weight * traj.theta_sup[m] > out.theta_sup) {
      out.theta_sup = weight * traj.theta_sup[m];
      out.theta_argmax_t = traj.times[m];
    }
  }
  return out;
}

double steadiness_check(const VectorField& u_steady,
                        const ScalarField& theta_steady,
                        const ProblemData& data, double horizon, int steps,
                        int picard_depth) {
  const Trajectory traj =
      mild_solve(u_steady, theta_steady, data, horizon, steps, picard_depth);
  const double scale =
      lp_norm(u_steady, 2.0) + lp_norm(theta_steady, 2.0);
  if (scale == 0.0) return 0.0;
  double drift = 0.0;
  for (size_t m = 0; m < traj.times.size(); ++m)
    drift = std::max(drift,
                     (lp_norm(traj.v_states[m] - u_steady, 2.0) +
                      lp_norm(traj.theta_states[m] - theta_steady, 2.0)) /
                         scale);
  return drift;
}

}  // namespace weakflow
