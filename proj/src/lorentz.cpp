#include "weakflow/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace weakflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

StepFunction rearrange_values(const Eigen::ArrayXd& raw, double cell_volume) {
  std::vector<double> sorted(raw.data(), raw.data() + raw.size());
  for (auto& v : sorted) v = std::abs(v);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> bp, vals;
  bp.reserve(sorted.size());
  vals.reserve(sorted.size());
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (!vals.empty() && vals.back() == sorted[i]) {
      bp.back() = static_cast<double>(i + 1) * cell_volume;
    } else {
      vals.push_back(sorted[i]);
      bp.push_back(static_cast<double>(i + 1) * cell_volume);
    }
  }
  return {std::move(bp), std::move(vals)};
}

// Draw an index in [0, n) from the top 53 bits; stable across platforms.
long draw_index(std::mt19937_64& rng, long n) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  long idx = static_cast<long>(u * static_cast<double>(n));
  return std::min(idx, n - 1);
}

}  // namespace

StepFunction::StepFunction(std::vector<double> bp, std::vector<double> v)
    : breakpoints(std::move(bp)), values(std::move(v)) {
  if (breakpoints.size() != values.size())
    throw std::invalid_argument("StepFunction: size mismatch");
  double prev_t = 0.0;
  double prev_v = kInf;
  for (size_t k = 0; k < values.size(); ++k) {
    if (!(breakpoints[k] > prev_t))
      throw std::invalid_argument(
          "StepFunction: breakpoints must be strictly increasing from 0");
    if (values[k] < 0.0 || values[k] > prev_v)
      throw std::invalid_argument(
          "StepFunction: values must be non-negative and non-increasing");
    prev_t = breakpoints[k];
    prev_v = values[k];
  }
}

double StepFunction::operator()(double t) const {
  for (size_t k = 0; k < breakpoints.size(); ++k)
    if (t < breakpoints[k]) return values[k];
  return 0.0;
}

double StepFunction::distribution(double lambda) const {
  double measure = 0.0;
  double prev_t = 0.0;
  for (size_t k = 0; k < values.size(); ++k) {
    if (values[k] > lambda) measure = breakpoints[k];
    prev_t = breakpoints[k];
  }
  (void)prev_t;
  return measure;
}

LorentzParams LorentzParams::make(double p, double q) {
  if (!(p >= 1.0) || !(q >= 1.0))
    throw std::invalid_argument("LorentzParams: p and q must be >= 1");
  if (std::isinf(p) && !std::isinf(q))
    throw std::invalid_argument("LorentzParams: p = inf forces q = inf");
  return {p, q};
}

double distribution_function(const ScalarField& field, double lambda) {
  if (lambda < 0.0)
    throw std::invalid_argument("distribution_function: lambda must be >= 0");
  const long count = (field.values.abs() > lambda).count();
  return static_cast<double>(count) * field.grid.cell_volume();
}

double distribution_function(const VectorField& field, double lambda) {
  return distribution_function(magnitude(field), lambda);
}

StepFunction rearrangement(const ScalarField& field) {
  if (!field.all_finite())
    throw std::invalid_argument("rearrangement: non-finite sample values");
  return rearrange_values(field.values, field.grid.cell_volume());
}

StepFunction rearrangement(const VectorField& field) {
  return rearrangement(magnitude(field));
}

double lorentz_quasi_norm(const StepFunction& star, const LorentzParams& params,
                          LorentzFormula formula) {
  const double p = params.p;
  const double q = params.q;
  if (std::isinf(p) && !std::isinf(q))
    throw std::invalid_argument("lorentz_quasi_norm: p = inf requires q = inf");
  if (star.values.empty()) return 0.0;

  if (std::isinf(q)) {
    if (std::isinf(p)) return star.values.front();
    // t^{1/p} increases and f* is constant per step, so each interval's sup
    // sits at its right endpoint.
    double best = 0.0;
    for (size_t k = 0; k < star.values.size(); ++k)
      best = std::max(best,
                      std::pow(star.breakpoints[k], 1.0 / p) * star.values[k]);
    return best;
  }

  double sum = 0.0;
  double prev_t = 0.0;
  if (formula == LorentzFormula::Standard) {
    const double e = q / p;
    for (size_t k = 0; k < star.values.size(); ++k) {
      if (star.values[k] > 0.0)
        sum += std::pow(star.values[k], q) *
               (std::pow(star.breakpoints[k], e) - std::pow(prev_t, e));
      prev_t = star.breakpoints[k];
    }
    return std::pow(sum, 1.0 / q);
  }
  const double e = q / p + 1.0;
  for (size_t k = 0; k < star.values.size(); ++k) {
    if (star.values[k] > 0.0)
      sum += std::pow(star.values[k], q) *
             (std::pow(star.breakpoints[k], e) - std::pow(prev_t, e)) / e;
    prev_t = star.breakpoints[k];
  }
  return (q / p) * std::pow(sum, 1.0 / q);
}

double lorentz_quasi_norm(const ScalarField& field, const LorentzParams& params,
                          LorentzFormula formula) {
  return lorentz_quasi_norm(rearrangement(field), params, formula);
}

double lorentz_quasi_norm(const VectorField& field, const LorentzParams& params,
                          LorentzFormula formula) {
  return lorentz_quasi_norm(rearrangement(field), params, formula);
}

double weak_lp_norm(const ScalarField& field, double p) {
  return lorentz_quasi_norm(field, LorentzParams::make(p, kInf));
}

double weak_lp_norm(const VectorField& field, double p) {
  return weak_lp_norm(magnitude(field), p);
}

double interpolation_check(const ScalarField& field, double p, double sigma) {
  if (!(p >= 1.0) || !(sigma >= 1.0))
    throw std::invalid_argument("interpolation_check: need p >= 1, sigma >= 1");
  const double sup = field.values.abs().maxCoeff();
  if (sup == 0.0) return 0.0;
  const double num = lp_norm(field, p * sigma);
  const double weak = weak_lp_norm(field, p);
  return num / (std::pow(weak, 1.0 / sigma) * std::pow(sup, 1.0 - 1.0 / sigma));
}

ScalarField ball_indicator(const GridSpec& grid, double radius) {
  ScalarField out(grid);
  for (long idx = 0; idx < grid.size(); ++idx)
    out.values[idx] = grid.cell_center(idx).norm() < radius ? 1.0 : 0.0;
  return out;
}

ScalarField radial_inverse_sample(const GridSpec& grid,
                                  double exclusion_radius) {
  ScalarField out(grid);
  for (long idx = 0; idx < grid.size(); ++idx) {
    const double r = grid.cell_center(idx).norm();
    out.values[idx] = r <= exclusion_radius ? 0.0 : 1.0 / r;
  }
  return out;
}

double hoelder_seminorm(const ScalarField& field, double s, long pair_budget,
                        std::uint64_t seed) {
  if (!(s > 0.0) || !(s < 1.0))
    throw std::invalid_argument("hoelder_seminorm: s must lie in (0,1)");
  if (pair_budget <= 0)
    throw std::invalid_argument("hoelder_seminorm: pair budget must be > 0");
  std::mt19937_64 rng(seed);
  const long n = field.grid.size();
  double best = 0.0;
  for (long trial = 0; trial < pair_budget; ++trial) {
    const long a = draw_index(rng, n);
    const long b = draw_index(rng, n);
    if (a == b) continue;
    const double d = field.grid.torus_distance(a, b);
    best = std::max(best, std::abs(field.values[a] - field.values[b]) /
                              std::pow(d, s));
  }
  return best;
}

}  // namespace weakflow
