#include "weakflow/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace weakflow {

GridSpec GridSpec::make(int points_per_axis, double box_length) {
  if (points_per_axis < 8 || points_per_axis % 2 != 0)
    throw std::invalid_argument("GridSpec: N must be even and >= 8, got " +
                                std::to_string(points_per_axis));
  if (!(box_length > 0.0))
    throw std::invalid_argument("GridSpec: box length must be positive");
  GridSpec g;
  g.points_per_axis = points_per_axis;
  g.box_length = box_length;
  return g;
}

double GridSpec::torus_distance(long a, long b) const {
  const auto ia = unravel(a);
  const auto ib = unravel(b);
  const double h = spacing();
  double d2 = 0.0;
  for (int ax = 0; ax < 3; ++ax) {
    int di = std::abs(ia[ax] - ib[ax]);
    di = std::min(di, points_per_axis - di);
    const double d = di * h;
    d2 += d * d;
  }
  return std::sqrt(d2);
}

ScalarField::ScalarField(const GridSpec& g, Eigen::ArrayXd v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::invalid_argument("ScalarField: value count does not match N^3");
}

VectorField::VectorField(ScalarField c1, ScalarField c2, ScalarField c3)
    : grid(c1.grid), comp{std::move(c1), std::move(c2), std::move(c3)} {
  require_same_grid(comp[0].grid, comp[1].grid, "VectorField components");
  require_same_grid(comp[0].grid, comp[2].grid, "VectorField components");
}

ScalarField magnitude(const VectorField& v) {
  ScalarField out(v.grid);
  out.values = (v[0].values.square() + v[1].values.square() +
                v[2].values.square())
                   .sqrt();
  return out;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "ScalarField +");
  return {a.grid, a.values + b.values};
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "ScalarField -");
  return {a.grid, a.values - b.values};
}

ScalarField operator*(double c, const ScalarField& a) {
  return {a.grid, c * a.values};
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

VectorField operator*(double c, const VectorField& a) {
  return {c * a[0], c * a[1], c * a[2]};
}

double lp_norm(const ScalarField& f, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (std::isinf(p)) return f.values.abs().maxCoeff();
  return std::pow((f.values.abs().pow(p)).sum() * f.grid.cell_volume(),
                  1.0 / p);
}

double lp_norm(const VectorField& f, double p) {
  return lp_norm(magnitude(f), p);
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "inner");
  return (a.values * b.values).sum() * a.grid.cell_volume();
}

double inner(const VectorField& a, const VectorField& b) {
  return inner(a[0], b[0]) + inner(a[1], b[1]) + inner(a[2], b[2]);
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b))
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace weakflow
