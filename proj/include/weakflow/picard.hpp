#pragma once

#include <limits>
#include <map>
#include <vector>

#include "weakflow/lorentz.hpp"
#include "weakflow/problem_data.hpp"

namespace weakflow {

/// Operator norms probed by randomized maximization. The continuity constants
/// exist by the kernel bounds; the probes put numbers on them so the
/// smallness conditions become checkable.
struct EmpiricalConstants {
  double C_B = 0.0;        ///< pair bilinear bound in weak L^3
  double C_L = 0.0;        ///< linear bound for the probed gravity field
  double C_L_slope = 0.0;  ///< C_L per unit ||gravity||_{3/2,1}
  std::map<double, double> C1;   ///< L^p bilinear-kernel constants
  std::map<double, double> C1p;  ///< L^p linear-kernel constants
  int probe_count = 0;
  std::uint64_t seed = 0;
  std::uint64_t argmax_seed_B = 0;
  std::uint64_t argmax_seed_L = 0;
};

/// Max observed Rayleigh-type ratios over probe_count deterministic probes
/// (band-limited random fields plus near-delta fields for the kernel-constant
/// endpoints). Prefix-stable in probe_count: growing the budget never
/// decreases a constant.
EmpiricalConstants estimate_constants(const GridSpec& grid,
                                      const VectorField& gravity,
                                      int probe_count, std::uint64_t seed,
                                      const std::vector<double>& p_list = {
                                          1.6, 1.75, 2.0, 3.0, 4.0, 6.0, 9.0});

struct SmallnessReport {
  double delta = 0.0;
  double gravity_norm = 0.0;
  double C_B_emp = 0.0;
  double C_L_emp = 0.0;
  bool condition_3CL = false;
  bool condition_9dCB = false;
  bool condition_sum = false;

  bool all() const { return condition_3CL && condition_9dCB && condition_sum; }
};

SmallnessReport make_smallness_report(const ProblemData& data,
                                      const EmpiricalConstants& constants);

/// Largest data size the empirical conditions admit:
/// min(1/(3 C_L_slope), 1/(9 C_B)).
double epsilon_emp(const EmpiricalConstants& constants);

struct SolverConfig {
  int max_iterations = 200;
  double residual_tol = 1e-10;
  std::vector<double> p_list = {4.0, 5.0, 7.0,
                                std::numeric_limits<double>::infinity()};
  bool toy_mode = false;
};

struct IterationTrace {
  struct Row {
    int n = 0;
    double u_weak3 = 0.0;
    double theta_weak3 = 0.0;
    std::vector<double> pair_lp;
    double increment = 0.0;
    double ratio = 0.0;
    double div_defect = 0.0;
  };
  std::vector<double> p_list;
  std::vector<Row> rows;

  /// Largest increment ratio over rows whose increments stay meaningfully
  /// above roundoff.
  double max_contraction_ratio(double floor) const;
};

struct PicardResult {
  VectorField u;
  ScalarField theta;
  IterationTrace trace;
  SmallnessReport smallness;
  bool in_regime = false;
  bool converged = false;
  double residual_rel = 0.0;
  int iterations = 0;
};

/// Iterates u_{n+1} = u0 + B(u_n, u_n) + L(u_n) from u0 with no acceleration.
/// Runs outside the contraction regime proceed but carry in_regime = false;
/// non-convergence is reported through the result, with the trace intact.
PicardResult picard_solve(const ProblemData& data, const SolverConfig& config,
                          const EmpiricalConstants& constants);

/// Pair norm ||u||_{L^{3,inf}} + ||theta||_{L^{3,inf}}.
double pair_weak3(const VectorField& u, const ScalarField& theta);

struct PersistenceRow {
  double p = 0.0;
  double u_lp = 0.0;
  double theta_lp = 0.0;
  double bound = 0.0;  ///< 2 (||u0||_p + ||theta0||_p) from the geometric series
  bool pass = false;
};

std::vector<PersistenceRow> persistence_report(const VectorField& u,
                                               const ScalarField& theta,
                                               const ProblemData& data,
                                               const std::vector<double>& p_list,
                                               double slack = 1e-8);

/// P = (-Delta)^-1 div div(u (x) u) - (-Delta)^-1 div(theta g)
///   - (-Delta)^-1 div(f), mean quotiented to zero.
ScalarField recover_pressure(const VectorField& u, const ScalarField& theta,
                             const ProblemData& data, bool toy_mode = false);

/// L^2 norm of -Delta u + div(u (x) u) + grad P - theta g - f relative to
/// ||f||_2, with the products dealiased the same way the solver formed them
/// and the mean mode quotiented by the zero-mode convention.
double momentum_residual(const VectorField& u, const ScalarField& theta,
                         const ScalarField& pressure, const ProblemData& data,
                         bool toy_mode = false);

}  // namespace weakflow
