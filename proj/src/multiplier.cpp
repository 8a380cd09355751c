#include "weakflow/multiplier.hpp"

#include <cmath>
#include <stdexcept>

#include "weakflow/parallel.hpp"

namespace weakflow {

namespace {

using Complex = std::complex<double>;

void require_small_mean(const SpectralField& spec, const char* what) {
  const double scale = spec.coeff.abs().maxCoeff();
  if (scale > 0.0 && std::abs(spec.coeff[0]) > 1e-12 * scale)
    throw std::invalid_argument(std::string(what) +
                                ": input has a non-negligible mean mode");
}

SpectralField zero_mean_copy(SpectralField spec, double* projected_mean) {
  if (projected_mean) *projected_mean = std::abs(spec.coeff[0]);
  spec.coeff[0] = 0.0;
  return spec;
}

// inv_laplacian without the mean gate, for internal use where the zero mode
// has already been handled.
SpectralField inv_laplacian_unchecked(const SpectralField& spec) {
  SpectralField out(spec.grid);
  parallel_for(spec.grid.size(), [&](long idx) {
    const double k2 = wavevector(spec.grid, idx).squaredNorm();
    out.coeff[idx] = k2 == 0.0 ? Complex(0.0) : spec.coeff[idx] / k2;
  });
  return out;
}

// Contract the gradient index of a physical 3x3 tensor and apply
// -(-Delta)^-1 P; this is the shared tail of the bilinear maps.
VectorField project_tensor_divergence(const GridSpec& grid,
                                      const std::array<SpectralField, 9>& w) {
  SpectralVectorField div_w(grid);
  for (int i = 0; i < 3; ++i) {
    parallel_for(grid.size(), [&](long idx) {
      const Eigen::Vector3d k = wavevector(grid, idx);
      Complex acc(0.0);
      for (int j = 0; j < 3; ++j)
        acc += Complex(0.0, k[j]) * w[static_cast<size_t>(3 * i + j)].coeff[idx];
      div_w[i].coeff[idx] = acc;
    });
  }
  SpectralVectorField projected = leray_project(div_w);
  SpectralVectorField out(grid);
  for (int i = 0; i < 3; ++i)
    out[i] = -1.0 * inv_laplacian_unchecked(projected[i]);
  return inverse_transform(out);
}

}  // namespace

SpectralField MultiplierSymbol::apply(const SpectralField& spec) const {
  SpectralField out(spec.grid);
  parallel_for(spec.grid.size(), [&](long idx) {
    const Eigen::Vector3d k = wavevector(spec.grid, idx);
    out.coeff[idx] =
        k.squaredNorm() == 0.0 ? Complex(0.0) : symbol(k) * spec.coeff[idx];
  });
  return out;
}

SpectralVectorField MatrixMultiplierSymbol::apply(
    const SpectralVectorField& spec) const {
  SpectralVectorField out(spec.grid);
  parallel_for(spec.grid.size(), [&](long idx) {
    const Eigen::Vector3d k = wavevector(spec.grid, idx);
    if (k.squaredNorm() == 0.0) {
      for (int i = 0; i < 3; ++i) out[i].coeff[idx] = 0.0;
      return;
    }
    const Eigen::Matrix3cd m = symbol(k);
    Eigen::Vector3cd c;
    for (int i = 0; i < 3; ++i) c[i] = spec[i].coeff[idx];
    const Eigen::Vector3cd r = m * c;
    for (int i = 0; i < 3; ++i) out[i].coeff[idx] = r[i];
  });
  return out;
}

MultiplierSymbol inverse_laplacian_symbol() {
  return {"inv_laplacian",
          [](const Eigen::Vector3d& k) { return Complex(1.0 / k.squaredNorm()); }};
}

MultiplierSymbol heat_symbol(double t) {
  if (t < 0.0) throw std::invalid_argument("heat_symbol: t must be >= 0");
  return {"heat_semigroup",
          [t](const Eigen::Vector3d& k) {
            return Complex(std::exp(-t * k.squaredNorm()));
          }};
}

MatrixMultiplierSymbol leray_symbol() {
  return {"leray_project", [](const Eigen::Vector3d& k) {
            Eigen::Matrix3cd m = Eigen::Matrix3cd::Identity();
            const double k2 = k.squaredNorm();
            for (int i = 0; i < 3; ++i)
              for (int j = 0; j < 3; ++j) m(i, j) -= k[i] * k[j] / k2;
            return m;
          }};
}

Eigen::Vector3d wavevector(const GridSpec& grid, long idx) {
  const auto b = grid.unravel(idx);
  return {grid.wavenumber(b[0]), grid.wavenumber(b[1]), grid.wavenumber(b[2])};
}

SpectralField inv_laplacian(const SpectralField& spec) {
  require_small_mean(spec, "inv_laplacian");
  return inv_laplacian_unchecked(spec);
}

SpectralVectorField inv_laplacian(const SpectralVectorField& spec) {
  return {inv_laplacian(spec[0]), inv_laplacian(spec[1]),
          inv_laplacian(spec[2])};
}

SpectralField laplacian(const SpectralField& spec) {
  SpectralField out(spec.grid);
  parallel_for(spec.grid.size(), [&](long idx) {
    out.coeff[idx] = -wavevector(spec.grid, idx).squaredNorm() * spec.coeff[idx];
  });
  return out;
}

SpectralVectorField laplacian(const SpectralVectorField& spec) {
  return {laplacian(spec[0]), laplacian(spec[1]), laplacian(spec[2])};
}

SpectralVectorField gradient(const SpectralField& spec) {
  SpectralVectorField out(spec.grid);
  parallel_for(spec.grid.size(), [&](long idx) {
    const Eigen::Vector3d k = wavevector(spec.grid, idx);
    for (int j = 0; j < 3; ++j)
      out[j].coeff[idx] = Complex(0.0, k[j]) * spec.coeff[idx];
  });
  return out;
}

SpectralField divergence(const SpectralVectorField& spec) {
  SpectralField out(spec.grid);
  parallel_for(spec.grid.size(), [&](long idx) {
    const Eigen::Vector3d k = wavevector(spec.grid, idx);
    Complex acc(0.0);
    for (int j = 0; j < 3; ++j) acc += Complex(0.0, k[j]) * spec[j].coeff[idx];
    out.coeff[idx] = acc;
  });
  return out;
}

SpectralVectorField leray_project(const SpectralVectorField& spec) {
  SpectralVectorField out(spec.grid);
  parallel_for(spec.grid.size(), [&](long idx) {
    const Eigen::Vector3d k = wavevector(spec.grid, idx);
    const double k2 = k.squaredNorm();
    if (k2 == 0.0) {
      for (int i = 0; i < 3; ++i) out[i].coeff[idx] = 0.0;
      return;
    }
    Complex kc(0.0);
    for (int j = 0; j < 3; ++j) kc += k[j] * spec[j].coeff[idx];
    for (int i = 0; i < 3; ++i)
      out[i].coeff[idx] = spec[i].coeff[idx] - k[i] * kc / k2;
  });
  return out;
}

SpectralField heat_semigroup(const SpectralField& spec, double t) {
  if (t < 0.0) throw std::invalid_argument("heat_semigroup: t must be >= 0");
  SpectralField out(spec.grid);
  parallel_for(spec.grid.size(), [&](long idx) {
    const double k2 = wavevector(spec.grid, idx).squaredNorm();
    out.coeff[idx] = std::exp(-t * k2) * spec.coeff[idx];
  });
  return out;
}

SpectralVectorField heat_semigroup(const SpectralVectorField& spec, double t) {
  return {heat_semigroup(spec[0], t), heat_semigroup(spec[1], t),
          heat_semigroup(spec[2], t)};
}

SpectralField dealias_23(SpectralField spec) {
  const int n = spec.grid.points_per_axis;
  parallel_for(spec.grid.size(), [&](long idx) {
    const auto b = spec.grid.unravel(idx);
    for (int ax = 0; ax < 3; ++ax)
      if (3 * std::abs(spec.grid.signed_mode(b[ax])) > n) {
        spec.coeff[idx] = 0.0;
        return;
      }
  });
  return spec;
}

SpectralVectorField dealias_23(SpectralVectorField spec) {
  for (int i = 0; i < 3; ++i) spec[i] = dealias_23(std::move(spec[i]));
  return spec;
}

ScalarField dealiased(const ScalarField& field) {
  return inverse_transform(dealias_23(forward_transform(field)));
}

VectorField dealiased(const VectorField& field) {
  return {dealiased(field[0]), dealiased(field[1]), dealiased(field[2])};
}

double divergence_defect(const SpectralVectorField& spec) {
  double scale = 0.0;
  for (int i = 0; i < 3; ++i)
    scale = std::max(scale, spec[i].coeff.abs().maxCoeff());
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (long idx = 0; idx < spec.grid.size(); ++idx) {
    const Eigen::Vector3d k = wavevector(spec.grid, idx);
    const double kn = k.norm();
    if (kn == 0.0) continue;
    Complex acc(0.0);
    for (int j = 0; j < 3; ++j) acc += k[j] * spec[j].coeff[idx];
    worst = std::max(worst, std::abs(acc) / kn);
  }
  return worst / scale;
}

double divergence_defect(const VectorField& field) {
  return divergence_defect(forward_transform(field));
}

VectorField apply_m1(const std::array<ScalarField, 9>& tensor) {
  std::array<SpectralField, 9> w;
  for (size_t c = 0; c < 9; ++c) w[c] = forward_transform(tensor[c]);
  return project_tensor_divergence(tensor[0].grid, w);
}

VectorField apply_m3(const VectorField& w) {
  SpectralVectorField spec = forward_transform(w);
  for (int i = 0; i < 3; ++i) spec[i].coeff[0] = 0.0;
  SpectralVectorField projected = leray_project(spec);
  SpectralVectorField out(w.grid);
  for (int i = 0; i < 3; ++i) out[i] = inv_laplacian_unchecked(projected[i]);
  return inverse_transform(out);
}

VectorField bilinear_B(const VectorField& u, const VectorField& v) {
  require_same_grid(u.grid, v.grid, "bilinear_B");
  const VectorField ud = dealiased(u);
  const VectorField vd = (&u == &v) ? ud : dealiased(v);
  std::array<SpectralField, 9> w;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      ScalarField prod(u.grid);
      prod.values = ud[i].values * vd[j].values;
      w[static_cast<size_t>(3 * i + j)] =
          dealias_23(forward_transform(prod));
    }
  return project_tensor_divergence(u.grid, w);
}

ScalarField bilinear_B2(const ScalarField& theta, const VectorField& u) {
  require_same_grid(theta.grid, u.grid, "bilinear_B2");
  const ScalarField td = dealiased(theta);
  const VectorField ud = dealiased(u);
  SpectralField div_w(theta.grid);
  for (int j = 0; j < 3; ++j) {
    ScalarField prod(theta.grid);
    prod.values = td.values * ud[j].values;
    const SpectralField w = dealias_23(forward_transform(prod));
    parallel_for(theta.grid.size(), [&](long idx) {
      const Eigen::Vector3d k = wavevector(theta.grid, idx);
      div_w.coeff[idx] += Complex(0.0, k[j]) * w.coeff[idx];
    });
  }
  return inverse_transform(-1.0 * inv_laplacian_unchecked(div_w));
}

VectorField linear_L(const ScalarField& theta, const VectorField& gvec,
                     double* projected_mean) {
  require_same_grid(theta.grid, gvec.grid, "linear_L");
  const ScalarField td = dealiased(theta);
  const VectorField gd = dealiased(gvec);
  SpectralVectorField w(theta.grid);
  double logged = 0.0;
  for (int i = 0; i < 3; ++i) {
    ScalarField prod(theta.grid);
    prod.values = td.values * gd[i].values;
    double mean_i = 0.0;
    w[i] = zero_mean_copy(dealias_23(forward_transform(prod)), &mean_i);
    logged = std::max(logged, mean_i);
  }
  if (projected_mean) *projected_mean = logged;
  SpectralVectorField projected = leray_project(w);
  SpectralVectorField out(theta.grid);
  for (int i = 0; i < 3; ++i) out[i] = inv_laplacian_unchecked(projected[i]);
  return inverse_transform(out);
}

VectorField toy_bilinear(const VectorField& u, const ScalarField& phi) {
  require_same_grid(u.grid, phi.grid, "toy_bilinear");
  const VectorField ud = dealiased(u);
  std::array<SpectralField, 9> w;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      ScalarField prod(u.grid);
      prod.values = phi.values * ud[i].values * ud[j].values;
      w[static_cast<size_t>(3 * i + j)] =
          dealias_23(forward_transform(prod));
    }
  return project_tensor_divergence(u.grid, w);
}

ScalarField make_toy_localizer(const GridSpec& grid, double c) {
  ScalarField phi(grid);
  parallel_for(grid.size(), [&](long idx) {
    phi.values[idx] = c / (1.0 + grid.cell_center(idx).squaredNorm());
  });
  return phi;
}

WeightedSup semigroup_weighted_sup(const ScalarField& field, double p,
                                   const std::vector<double>& t_grid) {
  if (!(p >= 1.0))
    throw std::invalid_argument("semigroup_weighted_sup: p must be >= 1");
  const SpectralField spec = forward_transform(field);
  WeightedSup best;
  for (const double t : t_grid) {
    if (!(t > 0.0))
      throw std::invalid_argument("semigroup_weighted_sup: t grid must be > 0");
    const ScalarField evolved = inverse_transform(heat_semigroup(spec, t));
    const double weighted =
        std::pow(t, 1.5 / p) * evolved.values.abs().maxCoeff();
    if (weighted > best.sup) {
      best.sup = weighted;
      best.argmax_t = t;
    }
  }
  return best;
}

}  // namespace weakflow
