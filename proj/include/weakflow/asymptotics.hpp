#pragma once

#include <map>
#include <optional>
#include <vector>

#include "weakflow/newton.hpp"
#include "weakflow/picard.hpp"

namespace weakflow {

/// Far-field speed samples |u(R d)| on radial shells.
struct ProfileSamples {
  std::vector<double> radii;
  std::vector<Eigen::Vector3d> directions;
  Eigen::MatrixXd speed;  ///< radii x directions
  bool boundary_warning = false;
  double max_force_fraction = 0.0;  ///< force term share, checked negligible

  double scaled(Eigen::Index r, Eigen::Index d) const {
    return radii[static_cast<size_t>(r)] * speed(r, d);
  }
};

/// The ten canonical unit directions: +-axes and four cube diagonals.
std::vector<Eigen::Vector3d> canonical_directions();

/// Logarithmically spaced radii in [lo_factor L, hi_factor L].
std::vector<double> radial_shells(const GridSpec& grid, double lo_factor,
                                  double hi_factor, int count);

/// Componentwise integral of theta * gravity over the box.
Eigen::Vector3d profile_constant(const ScalarField& theta,
                                 const VectorField& gvec);

/// Leading far-field speed along direction d implied by moment M1 through
/// the projected kernel: |M1 + d (d.M1)| / (8 pi).
double projected_profile_constant(const Eigen::Vector3d& m1,
                                  const Eigen::Vector3d& d);

struct FarFieldValue {
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d force_term = Eigen::Vector3d::Zero();
  bool boundary_warning = false;
};

/// Right side of the velocity integral equation at an exterior point x,
/// |x| >= L/2: projected-kernel quadrature of theta*gravity, grad-kernel
/// quadrature of the localized advection tensor and the (negligible,
/// reported) force term.
FarFieldValue far_field_velocity(const VectorField& u, const ScalarField& theta,
                                 const ProblemData& data,
                                 const Eigen::Vector3d& x);

/// Temperature analogue: Newton potential of g plus the divergence-kernel
/// quadrature of theta*u.
double far_field_temperature(const VectorField& u, const ScalarField& theta,
                             const ProblemData& data, const Eigen::Vector3d& x);

ProfileSamples make_profile_samples(const VectorField& u,
                                    const ScalarField& theta,
                                    const ProblemData& data,
                                    const std::vector<double>& radii,
                                    const std::vector<Eigen::Vector3d>& dirs);

enum class TailFlag { Diverges, Converges };

/// Smallest sampled radius beyond which every larger sample along every
/// direction clears half the projected profile constant.
std::optional<double> lower_bound_onset(const ProfileSamples& samples,
                                        const Eigen::Vector3d& m1);

/// Shell partial sums of |u|^p beyond the onset radius; a p is flagged
/// Diverges when the last third of the samples still contributes more than
/// 10% of the total. Rejects when the onset is not found or fewer than 10
/// radii lie beyond it.
std::map<double, TailFlag> nonexistence_diagnostic(
    const ProfileSamples& samples, const Eigen::Vector3d& m1,
    const std::vector<double>& p_list);

struct ProfileVerdict {
  Eigen::Vector3d m1 = Eigen::Vector3d::Zero();
  double fitted_constant = 0.0;  ///< median outer-third scaled sample
  double relative_gap = 0.0;     ///< gap against raw |M1|, kept as a flag
  std::vector<double> projected_constants;  ///< per direction
  double max_projected_gap = 0.0;  ///< outer-third gap against projection
  double m2_estimate = 0.0;
  bool m2_found = false;
  std::map<double, TailFlag> lp_flags;
  bool boundary_warning = false;
};

/// Assembles the far-field verdict. The raw moment and the projected
/// constants disagree by the kernel's angular factor; both are reported.
ProfileVerdict make_profile_verdict(const ProfileSamples& samples,
                                    const Eigen::Vector3d& m1,
                                    const std::vector<double>& p_list);

struct DecayReport {
  double sup_u = 0.0;
  Eigen::Vector3d argmax_u = Eigen::Vector3d::Zero();
  double sup_theta = 0.0;
  Eigen::Vector3d argmax_theta = Eigen::Vector3d::Zero();
};

/// sup (1+|x|)|u| and sup (1+|x|)|theta| over grid cells and the far-field
/// sample points, with maximizer locations.
DecayReport decay_check(const VectorField& u, const ScalarField& theta,
                        const ProblemData& data, const ProfileSamples& samples);

struct KappaRow {
  double kappa = 0.0;
  double m1_norm = 0.0;
  double fit_residual = 0.0;
  bool converged = false;
};

struct KappaScan {
  double fit_coefficient = 0.0;  ///< least squares c in |M1| ~ c kappa^2
  double max_fit_residual = 0.0;
  std::vector<KappaRow> rows;
};

/// Solves the toy model for each kappa scaling of the base data and fits
/// |M1(kappa)| against c kappa^2. Rows outside the convergence regime are
/// marked failed and excluded from the fit.
KappaScan kappa_scan(const ProblemData& base, const std::vector<double>& kappas,
                     const SolverConfig& config,
                     const EmpiricalConstants& constants);

}  // namespace weakflow
