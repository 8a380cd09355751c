#include "weakflow/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "weakflow/parallel.hpp"

namespace weakflow {

namespace {

ScalarField product(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid);
  out.values = a.values * b.values;
  return out;
}

VectorField buoyancy_source(const ScalarField& theta, const ProblemData& data) {
  return {product(theta, data.gravity[0]), product(theta, data.gravity[1]),
          product(theta, data.gravity[2])};
}

std::array<ScalarField, 9> localized_advection(const VectorField& u,
                                               const ProblemData& data) {
  std::array<ScalarField, 9> tensor;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      ScalarField t = product(u[i], u[j]);
      if (data.toy_localizer) t.values *= data.toy_localizer->values;
      tensor[static_cast<size_t>(3 * i + j)] = std::move(t);
    }
  return tensor;
}

}  // namespace

std::vector<Eigen::Vector3d> canonical_directions() {
  const double s = 1.0 / std::sqrt(3.0);
  return {{1, 0, 0},    {-1, 0, 0},   {0, 1, 0},   {0, -1, 0},  {0, 0, 1},
          {0, 0, -1},   {s, s, s},    {s, s, -s},  {s, -s, s},  {-s, s, s}};
}

std::vector<double> radial_shells(const GridSpec& grid, double lo_factor,
                                  double hi_factor, int count) {
  if (count < 2 || !(hi_factor > lo_factor) || !(lo_factor > 0.0))
    throw std::invalid_argument("radial_shells: bad shell range");
  std::vector<double> radii(static_cast<size_t>(count));
  const double lo = lo_factor * grid.box_length;
  const double hi = hi_factor * grid.box_length;
  for (int j = 0; j < count; ++j)
    radii[static_cast<size_t>(j)] =
        lo * std::pow(hi / lo, static_cast<double>(j) / (count - 1));
  return radii;
}

Eigen::Vector3d profile_constant(const ScalarField& theta,
                                 const VectorField& gvec) {
  require_same_grid(theta.grid, gvec.grid, "profile_constant");
  return {inner(theta, gvec[0]), inner(theta, gvec[1]), inner(theta, gvec[2])};
}

double projected_profile_constant(const Eigen::Vector3d& m1,
                                  const Eigen::Vector3d& d) {
  return (m1 + d * d.dot(m1)).norm() / (8.0 * std::numbers::pi);
}

FarFieldValue far_field_velocity(const VectorField& u, const ScalarField& theta,
                                 const ProblemData& data,
                                 const Eigen::Vector3d& x) {
  const GridSpec& grid = u.grid;
  if (x.norm() < 0.5 * grid.box_length)
    throw std::invalid_argument(
        "far_field_velocity: evaluation point must satisfy |x| >= L/2");
  const VectorField source = buoyancy_source(theta, data);

  FarFieldValue out;
  out.velocity = oseen_sum(source, x);
  out.velocity += grad_oseen_divergence_sum(localized_advection(u, data), x);
  out.force_term = oseen_sum(data.f_force, x);
  out.velocity += out.force_term;
  out.boundary_warning = boundary_decay_ratio(magnitude(source)) >= 1e-6;
  return out;
}

double far_field_temperature(const VectorField& u, const ScalarField& theta,
                             const ProblemData& data, const Eigen::Vector3d& x) {
  const VectorField transport{product(theta, u[0]), product(theta, u[1]),
                              product(theta, u[2])};
  return newton_potential_at(data.g_force, x).value -
         inv_laplacian_divergence_sum(transport, x);
}

ProfileSamples make_profile_samples(const VectorField& u,
                                    const ScalarField& theta,
                                    const ProblemData& data,
                                    const std::vector<double>& radii,
                                    const std::vector<Eigen::Vector3d>& dirs) {
  ProfileSamples samples;
  samples.radii = radii;
  samples.directions = dirs;
  const Eigen::Index nr = static_cast<Eigen::Index>(radii.size());
  const Eigen::Index nd = static_cast<Eigen::Index>(dirs.size());
  samples.speed.resize(nr, nd);
  Eigen::MatrixXd force_fraction(nr, nd);
  Eigen::Matrix<bool, Eigen::Dynamic, 1> warn(nr * nd);

  parallel_for(nr * nd, [&](long flat) {
    const Eigen::Index r = flat / nd;
    const Eigen::Index d = flat % nd;
    const FarFieldValue value = far_field_velocity(
        u, theta, data,
        radii[static_cast<size_t>(r)] * dirs[static_cast<size_t>(d)]);
    const double speed = value.velocity.norm();
    samples.speed(r, d) = speed;
    force_fraction(r, d) =
        speed > 0.0 ? value.force_term.norm() / speed : 0.0;
    warn(flat) = value.boundary_warning;
  });

  samples.max_force_fraction = force_fraction.maxCoeff();
  samples.boundary_warning = warn.any();
  return samples;
}

std::optional<double> lower_bound_onset(const ProfileSamples& samples,
                                        const Eigen::Vector3d& m1) {
  const Eigen::Index nr = samples.speed.rows();
  const Eigen::Index nd = samples.speed.cols();
  std::vector<double> floor(static_cast<size_t>(nd));
  for (Eigen::Index d = 0; d < nd; ++d)
    floor[static_cast<size_t>(d)] = projected_profile_constant(
        m1, samples.directions[static_cast<size_t>(d)]);

  std::optional<double> onset;
  for (Eigen::Index r = nr - 1; r >= 0; --r) {
    bool ok = true;
    for (Eigen::Index d = 0; d < nd && ok; ++d)
      ok = floor[static_cast<size_t>(d)] /
               (2.0 * samples.radii[static_cast<size_t>(r)]) <=
           samples.speed(r, d);
    if (!ok) break;
    onset = samples.radii[static_cast<size_t>(r)];
  }
  return onset;
}

std::map<double, TailFlag> nonexistence_diagnostic(
    const ProfileSamples& samples, const Eigen::Vector3d& m1,
    const std::vector<double>& p_list) {
  const auto onset = lower_bound_onset(samples, m1);
  if (!onset)
    throw std::invalid_argument(
        "nonexistence_diagnostic: lower-bound onset radius not found");

  std::vector<double> radii;
  std::vector<double> mean_speed;
  for (size_t r = 0; r < samples.radii.size(); ++r) {
    if (samples.radii[r] < *onset) continue;
    radii.push_back(samples.radii[r]);
    mean_speed.push_back(
        samples.speed.row(static_cast<Eigen::Index>(r)).mean());
  }
  if (radii.size() < 10)
    throw std::invalid_argument(
        "nonexistence_diagnostic: need at least 10 radii beyond the onset");

  // Midpoint shell widths; ends one-sided.
  std::vector<double> width(radii.size());
  for (size_t j = 0; j < radii.size(); ++j) {
    const double lo = j == 0 ? radii[0] : 0.5 * (radii[j] + radii[j - 1]);
    const double hi = j + 1 == radii.size()
                          ? radii.back()
                          : 0.5 * (radii[j] + radii[j + 1]);
    width[j] = hi - lo;
    if (j == 0 || j + 1 == radii.size()) width[j] *= 2.0;
  }

  std::map<double, TailFlag> flags;
  for (const double p : p_list) {
    double total = 0.0;
    std::vector<double> partial(radii.size());
    for (size_t j = 0; j < radii.size(); ++j) {
      total += std::pow(mean_speed[j], p) * radii[j] * radii[j] * width[j];
      partial[j] = total;
    }
    const size_t cut = radii.size() - radii.size() / 3;
    const double tail_share =
        total > 0.0 ? (total - partial[cut - 1]) / total : 0.0;
    flags[p] = tail_share > 0.10 ? TailFlag::Diverges : TailFlag::Converges;
  }
  return flags;
}

ProfileVerdict make_profile_verdict(const ProfileSamples& samples,
                                    const Eigen::Vector3d& m1,
                                    const std::vector<double>& p_list) {
  ProfileVerdict verdict;
  verdict.m1 = m1;
  verdict.boundary_warning = samples.boundary_warning;

  const Eigen::Index nr = samples.speed.rows();
  const Eigen::Index nd = samples.speed.cols();
  const Eigen::Index outer_begin = nr - nr / 3;

  std::vector<double> scaled;
  double worst = 0.0;
  for (Eigen::Index d = 0; d < nd; ++d) {
    const double c = projected_profile_constant(
        m1, samples.directions[static_cast<size_t>(d)]);
    verdict.projected_constants.push_back(c);
    for (Eigen::Index r = outer_begin; r < nr; ++r) {
      const double s = samples.scaled(r, d);
      scaled.push_back(s);
      if (c > 0.0) worst = std::max(worst, std::abs(s - c) / c);
    }
  }
  verdict.max_projected_gap = worst;

  std::sort(scaled.begin(), scaled.end());
  verdict.fitted_constant =
      scaled.empty() ? 0.0 : scaled[scaled.size() / 2];
  const double m1_norm = m1.norm();
  verdict.relative_gap =
      m1_norm > 0.0 ? std::abs(verdict.fitted_constant - m1_norm) / m1_norm
                    : 0.0;

  if (const auto onset = lower_bound_onset(samples, m1)) {
    verdict.m2_found = true;
    verdict.m2_estimate = *onset;
    try {
      verdict.lp_flags = nonexistence_diagnostic(samples, m1, p_list);
    } catch (const std::invalid_argument&) {
      verdict.lp_flags.clear();
    }
  }
  return verdict;
}

DecayReport decay_check(const VectorField& u, const ScalarField& theta,
                        const ProblemData& data,
                        const ProfileSamples& samples) {
  DecayReport report;
  const GridSpec& grid = u.grid;
  const ScalarField speed = magnitude(u);
  for (long idx = 0; idx < grid.size(); ++idx) {
    const Eigen::Vector3d x = grid.cell_center(idx);
    const double wu = (1.0 + x.norm()) * speed.values[idx];
    if (wu > report.sup_u) {
      report.sup_u = wu;
      report.argmax_u = x;
    }
    const double wt = (1.0 + x.norm()) * std::abs(theta.values[idx]);
    if (wt > report.sup_theta) {
      report.sup_theta = wt;
      report.argmax_theta = x;
    }
  }

  const Eigen::Index nd = static_cast<Eigen::Index>(samples.directions.size());
  for (Eigen::Index r = 0; r < samples.speed.rows(); ++r)
    for (Eigen::Index d = 0; d < nd; ++d) {
      const double radius = samples.radii[static_cast<size_t>(r)];
      const Eigen::Vector3d x =
          radius * samples.directions[static_cast<size_t>(d)];
      const double wu = (1.0 + radius) * samples.speed(r, d);
      if (wu > report.sup_u) {
        report.sup_u = wu;
        report.argmax_u = x;
      }
      const double wt =
          (1.0 + radius) * std::abs(far_field_temperature(u, theta, data, x));
      if (wt > report.sup_theta) {
        report.sup_theta = wt;
        report.argmax_theta = x;
      }
    }
  return report;
}

KappaScan kappa_scan(const ProblemData& base, const std::vector<double>& kappas,
                     const SolverConfig& config,
                     const EmpiricalConstants& constants) {
  KappaScan scan;
  for (const double kappa : kappas) {
    KappaRow row;
    row.kappa = kappa;
    if (kappa == 0.0) {
      row.converged = true;
      row.m1_norm = 0.0;
      scan.rows.push_back(row);
      continue;
    }
    const ProblemData data = scaled(base, kappa, kappa);
    const PicardResult result = picard_solve(data, config, constants);
    row.converged = result.converged;
    if (result.converged)
      row.m1_norm = profile_constant(result.theta, data.gravity).norm();
    scan.rows.push_back(row);
  }

  double num = 0.0, den = 0.0;
  for (const auto& row : scan.rows) {
    if (!row.converged || row.kappa == 0.0) continue;
    const double k2 = row.kappa * row.kappa;
    num += row.m1_norm * k2;
    den += k2 * k2;
  }
  scan.fit_coefficient = den > 0.0 ? num / den : 0.0;
  for (auto& row : scan.rows) {
    if (!row.converged || row.kappa == 0.0 || row.m1_norm == 0.0) continue;
    row.fit_residual =
        std::abs(row.m1_norm -
                 scan.fit_coefficient * row.kappa * row.kappa) /
        row.m1_norm;
    scan.max_fit_residual = std::max(scan.max_fit_residual, row.fit_residual);
  }
  return scan;
}

}  // namespace weakflow
