#pragma once

#include <cstdint>
#include <vector>

#include "weakflow/grid.hpp"

namespace weakflow {

/// Decreasing rearrangement f*(t) as a right-continuous step function:
/// f*(t) = values[k] on [breakpoints[k-1], breakpoints[k]) with an implicit
/// leading breakpoint at t = 0. Values are non-increasing and non-negative,
/// breakpoints strictly increasing.
struct StepFunction {
  std::vector<double> breakpoints;
  std::vector<double> values;

  StepFunction() = default;
  StepFunction(std::vector<double> bp, std::vector<double> v);

  double total_span() const {
    return breakpoints.empty() ? 0.0 : breakpoints.back();
  }
  /// f*(t); zero beyond the last breakpoint.
  double operator()(double t) const;
  /// Measure of {f* > lambda}, for equimeasurability checks.
  double distribution(double lambda) const;
};

struct LorentzParams {
  double p = 1.0;
  double q = 1.0;

  /// Validates p >= 1, q >= 1 and the convention p = inf => q = inf.
  static LorentzParams make(double p, double q);
};

/// h^3 times the number of cells with |value| > lambda. Non-increasing in
/// lambda; lambda < 0 is rejected.
double distribution_function(const ScalarField& field, double lambda);
double distribution_function(const VectorField& field, double lambda);

/// Sorts |values| descending with one cell volume h^3 per sample and merges
/// equal neighbours. The total span is exactly L^3.
StepFunction rearrangement(const ScalarField& field);
StepFunction rearrangement(const VectorField& field);

/// Standard evaluates the scale-invariant dt/t form, the one that satisfies
/// the embedding chain. PlainDt keeps the q/p factor outside the q-th root
/// and integrates against plain dt; both conventions are exposed so reports
/// can quote either.
enum class LorentzFormula { Standard, PlainDt };

/// Lorentz L^{p,q} quasi-norm of the rearrangement. For q = inf this is the
/// exact sup over steps, attained at right endpoints; p = q reproduces the
/// discrete L^p norm. p = inf with q < inf is rejected.
double lorentz_quasi_norm(const StepFunction& star, const LorentzParams& params,
                          LorentzFormula formula = LorentzFormula::Standard);
double lorentz_quasi_norm(const ScalarField& field, const LorentzParams& params,
                          LorentzFormula formula = LorentzFormula::Standard);
double lorentz_quasi_norm(const VectorField& field, const LorentzParams& params,
                          LorentzFormula formula = LorentzFormula::Standard);

/// Convenience: weak L^p norm, i.e. L^{p,inf}.
double weak_lp_norm(const ScalarField& field, double p);
double weak_lp_norm(const VectorField& field, double p);

/// ||f||_{L^{p*sigma}} / (||f||_{L^{p,inf}}^{1/sigma} ||f||_inf^{1-1/sigma});
/// zero for the zero field.
double interpolation_check(const ScalarField& field, double p, double sigma);

/// Max over sampled cell pairs of |f(x)-f(y)| / dist(x,y)^s with the periodic
/// torus metric; deterministic given the seed. pair_budget = 0 is rejected.
double hoelder_seminorm(const ScalarField& field, double s, long pair_budget,
                        std::uint64_t seed);

/// Indicator of the centered ball, sampled at cell centers.
ScalarField ball_indicator(const GridSpec& grid, double radius);

/// 1/|x| sampled at cell centers with the cells inside exclusion_radius
/// zeroed. A fixed physical exclusion keeps the sampled function independent
/// of N, so refinement converges to the analytic weak-L^3 value.
ScalarField radial_inverse_sample(const GridSpec& grid,
                                  double exclusion_radius);

}  // namespace weakflow
