#include "weakflow/liouville.hpp"

#include <cmath>
#include <stdexcept>

namespace weakflow {

namespace {

// Quintic smoothstep, C^2 at both seams.
double smoothstep5(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double smoothstep5_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return 30.0 * s * s * (1.0 - s) * (1.0 - s);
}

ScalarField masked_abs(const ScalarField& f, const ScalarField& mask) {
  ScalarField out(f.grid);
  out.values = f.values * mask.values;
  return out;
}

}  // namespace

double CutoffFamily::profile(double r) {
  return 1.0 - smoothstep5(2.0 * r - 1.0);
}

double CutoffFamily::profile_derivative(double r) {
  return -2.0 * smoothstep5_derivative(2.0 * r - 1.0);
}

ScalarField CutoffFamily::field(const GridSpec& grid, double R) {
  ScalarField out(grid);
  for (long idx = 0; idx < grid.size(); ++idx)
    out.values[idx] = profile(grid.cell_center(idx).norm() / R);
  return out;
}

ScalarField CutoffFamily::gradient_magnitude(const GridSpec& grid, double R) {
  ScalarField out(grid);
  for (long idx = 0; idx < grid.size(); ++idx)
    out.values[idx] =
        std::abs(profile_derivative(grid.cell_center(idx).norm() / R)) / R;
  return out;
}

CaccioppoliSides caccioppoli_sides(const ScalarField& theta,
                                   const VectorField& u, double R, double p) {
  require_same_grid(theta.grid, u.grid, "caccioppoli_sides");
  const GridSpec& grid = theta.grid;
  if (!(R <= 0.5 * grid.box_length))
    throw std::invalid_argument(
        "caccioppoli_sides: annulus must fit inside the box (R <= L/2)");
  if (!(p > 3.0))
    throw std::invalid_argument("caccioppoli_sides: requires p > 3");

  const VectorField grad_theta =
      inverse_transform(gradient(forward_transform(theta)));
  const ScalarField grad_mag = magnitude(grad_theta);

  CaccioppoliSides sides;
  double theta_annulus = 0.0;
  double u_annulus = 0.0;
  const ScalarField u_mag = magnitude(u);
  const double h3 = grid.cell_volume();
  for (long idx = 0; idx < grid.size(); ++idx) {
    const double r = grid.cell_center(idx).norm();
    if (r < 0.5 * R)
      sides.lhs += grad_mag.values[idx] * grad_mag.values[idx] * h3;
    if (r > 0.5 * R && r < R) {
      theta_annulus += std::pow(std::abs(theta.values[idx]), p) * h3;
      u_annulus += std::pow(u_mag.values[idx], p) * h3;
    }
  }
  const double theta_factor = std::pow(theta_annulus, 2.0 / p);
  sides.rhs_term1 = theta_factor * std::pow(R, 1.0 - 6.0 / p);
  sides.rhs_term2 = theta_factor * std::pow(R, 2.0 - 9.0 / p) *
                    std::pow(u_annulus, 1.0 / p);
  return sides;
}

LiouvilleReport liouville_verdict(const VectorField& u,
                                  const ScalarField& theta,
                                  const ProblemData& data, double p, double q,
                                  const std::vector<double>& radii,
                                  bool bypass_residual_gate) {
  LiouvilleReport report;
  report.radii = radii;

  // Homogeneous fixed point: u should reproduce B(u,u) + L(u) with no lift.
  const VectorField b1 = data.toy_localizer
                             ? toy_bilinear(u, *data.toy_localizer)
                             : bilinear_B(u, u);
  const ScalarField b2 = bilinear_B2(theta, u);
  const double residual =
      pair_weak3(u - b1 - linear_L(theta, data.gravity), theta - b2);
  report.residual = residual;
  const double scale = pair_weak3(u, theta);
  if (!bypass_residual_gate && scale > 0.0 && residual > 1e-6 * scale) {
    report.verdict = "rejected";
    return report;
  }

  const LorentzParams tail_params = LorentzParams::make(4.5, q);
  for (const double R : radii) {
    ScalarField mask(theta.grid);
    for (long idx = 0; idx < theta.grid.size(); ++idx) {
      const double r = theta.grid.cell_center(idx).norm();
      mask.values[idx] = (r > 0.5 * R && r < R) ? 1.0 : 0.0;
    }
    report.tail_norm.push_back(
        lorentz_quasi_norm(masked_abs(theta, mask), tail_params));
    const CaccioppoliSides sides = caccioppoli_sides(theta, u, R, p);
    report.grad_l2_ball.push_back(sides.lhs);
    const double rhs = sides.rhs_term1 + sides.rhs_term2;
    if (rhs > 0.0)
      report.c_emp = std::max(report.c_emp, sides.lhs / rhs);
    else if (sides.lhs > 0.0)
      report.c_emp = std::numeric_limits<double>::infinity();
    report.sides.push_back(sides);
  }

  const double grid_scale = std::pow(theta.grid.box_length, 1.5);
  const double l2 = lp_norm(u, 2.0) + lp_norm(theta, 2.0);
  report.verdict = l2 <= 1e-8 * grid_scale ? "trivial" : "non-trivial-flagged";
  return report;
}

}  // namespace weakflow
