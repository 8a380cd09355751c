#include "weakflow/newton.hpp"

#include <cmath>
#include <numbers>

namespace weakflow {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr int kGauss = 16;
const double kGaussX[kGauss] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};
const double kGaussW[kGauss] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

double box_integral_inv_r(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
  double sum = 0.0;
  const Eigen::Vector3d mid = 0.5 * (lo + hi);
  const Eigen::Vector3d half = 0.5 * (hi - lo);
  for (int a = 0; a < kGauss; ++a)
    for (int b = 0; b < kGauss; ++b)
      for (int c = 0; c < kGauss; ++c) {
        const Eigen::Vector3d z(mid[0] + half[0] * kGaussX[a],
                                mid[1] + half[1] * kGaussX[b],
                                mid[2] + half[2] * kGaussX[c]);
        sum += kGaussW[a] * kGaussW[b] * kGaussW[c] / z.norm();
      }
  return sum * half.prod();
}

// Integral of 1/|z| over the cubic shell between side 1 and side 1/2,
// decomposed into the 26 origin-free boxes of the 27-box split.
double shell_integral() {
  const double edges[4] = {-0.5, -0.25, 0.25, 0.5};
  double sum = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        if (i == 1 && j == 1 && k == 1) continue;
        const Eigen::Vector3d lo(edges[i], edges[j], edges[k]);
        const Eigen::Vector3d hi(edges[i + 1], edges[j + 1], edges[k + 1]);
        sum += box_integral_inv_r(lo, hi);
      }
  return sum;
}

}  // namespace

double unit_cell_self_integral() {
  // Dyadic scaling: each halved shell contributes a factor 1/4, so the cube
  // integral is 4/3 of the outermost shell.
  static const double value = (4.0 / 3.0) * shell_integral();
  return value;
}

double boundary_decay_ratio(const ScalarField& source) {
  const int n = source.grid.points_per_axis;
  const double scale = source.values.abs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double shell = 0.0;
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1) {
        if (i1 != 0 && i1 != n - 1 && i2 != 0 && i2 != n - 1 && i3 != 0 &&
            i3 != n - 1)
          continue;
        shell = std::max(shell,
                         std::abs(source.values[source.grid.index(i1, i2, i3)]));
      }
  return shell / scale;
}

PotentialValue newton_potential_at(const ScalarField& source,
                                   const Eigen::Vector3d& x) {
  const GridSpec& grid = source.grid;
  const double h = grid.spacing();
  const double h3 = grid.cell_volume();

  long self_cell = -1;
  bool inside = true;
  std::array<int, 3> cell{};
  for (int ax = 0; ax < 3; ++ax) {
    const double s = (x[ax] + 0.5 * grid.box_length) / h;
    const int i = static_cast<int>(std::floor(s));
    if (i < 0 || i >= grid.points_per_axis) inside = false;
    cell[static_cast<size_t>(ax)] = i;
  }
  if (inside) self_cell = grid.index(cell[0], cell[1], cell[2]);

  double sum = 0.0;
  for (long idx = 0; idx < grid.size(); ++idx) {
    if (idx == self_cell) {
      sum += source.values[idx] * unit_cell_self_integral() * h * h;
      continue;
    }
    sum += source.values[idx] * h3 / (x - grid.cell_center(idx)).norm();
  }
  return {sum / kFourPi, boundary_decay_ratio(source) >= 1e-6};
}

Eigen::Matrix3d oseen_tensor(const Eigen::Vector3d& z) {
  const double r = z.norm();
  const Eigen::Matrix3d newton_part =
      Eigen::Matrix3d::Identity() / (kFourPi * r);
  const Eigen::Matrix3d hessian_part =
      (Eigen::Matrix3d::Identity() / r - z * z.transpose() / (r * r * r)) /
      (2.0 * kFourPi);
  return newton_part - hessian_part;
}

Eigen::Vector3d oseen_sum(const VectorField& source, const Eigen::Vector3d& x) {
  const GridSpec& grid = source.grid;
  const double h3 = grid.cell_volume();
  const double skip = 0.5 * grid.spacing();
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  for (long idx = 0; idx < grid.size(); ++idx) {
    const Eigen::Vector3d z = x - grid.cell_center(idx);
    if (z.norm() < skip) continue;
    const Eigen::Vector3d s(source[0].values[idx], source[1].values[idx],
                            source[2].values[idx]);
    acc += oseen_tensor(z) * s;
  }
  return acc * h3;
}

Eigen::Vector3d grad_oseen_divergence_sum(
    const std::array<ScalarField, 9>& tensor, const Eigen::Vector3d& x) {
  const GridSpec& grid = tensor[0].grid;
  const double h3 = grid.cell_volume();
  const double skip = 0.5 * grid.spacing();
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  for (long idx = 0; idx < grid.size(); ++idx) {
    const Eigen::Vector3d z = x - grid.cell_center(idx);
    const double r = z.norm();
    if (r < skip) continue;
    Eigen::Matrix3d t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        t(i, j) = tensor[static_cast<size_t>(3 * i + j)].values[idx];
    const Eigen::Vector3d zh = z / r;
    // Gradient of the Oseen tensor contracted against T over both the
    // component and the derivative index.
    const Eigen::Vector3d contribution =
        (-t * zh + t.transpose() * zh + zh * t.trace() -
         3.0 * zh * zh.dot(t * zh)) /
        (2.0 * kFourPi * r * r);
    acc -= contribution;
  }
  return acc * h3;
}

double inv_laplacian_divergence_sum(const VectorField& w,
                                    const Eigen::Vector3d& x) {
  const GridSpec& grid = w.grid;
  const double h3 = grid.cell_volume();
  const double skip = 0.5 * grid.spacing();
  double acc = 0.0;
  for (long idx = 0; idx < grid.size(); ++idx) {
    const Eigen::Vector3d z = x - grid.cell_center(idx);
    const double r = z.norm();
    if (r < skip) continue;
    const Eigen::Vector3d s(w[0].values[idx], w[1].values[idx],
                            w[2].values[idx]);
    acc += z.dot(s) / (r * r * r);
  }
  return acc * h3 / kFourPi;
}

}  // namespace weakflow
