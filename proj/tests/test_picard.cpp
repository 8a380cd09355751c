#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "weakflow/picard.hpp"

using namespace weakflow;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

// Golden unit-test configuration: well-prepared data scaled into the
// contraction regime, delta = epsilon_emp / 2.
struct GoldenRun {
  ProblemData data;
  EmpiricalConstants constants;
  PicardResult result;
  double delta = 0.0;
};

GoldenRun make_golden(int n, bool toy, std::uint64_t seed = 42) {
  const GridSpec grid = GridSpec::make(n, kTwoPi);
  ProblemData raw = well_prepared_data(grid, seed, 1, 3, 1.0);
  EmpiricalConstants constants =
      estimate_constants(grid, raw.gravity, 24, 1234);
  const double eps = epsilon_emp(constants);
  const double delta1 = pair_weak3(raw.lifted_u0, raw.lifted_theta0);
  const double gnorm1 =
      lorentz_quasi_norm(raw.gravity, LorentzParams::make(1.5, 1.0));
  ProblemData data =
      scaled(raw, 0.5 * eps / delta1, 0.5 * eps / gnorm1);
  if (toy) data = with_toy_localizer(std::move(data), 1.0);
  // the linear constant scales with gravity
  constants.C_L *= 0.5 * eps / gnorm1;

  GoldenRun run;
  run.delta = pair_weak3(data.lifted_u0, data.lifted_theta0);
  SolverConfig config;
  config.residual_tol = 1e-12;
  config.toy_mode = toy;
  run.result = picard_solve(data, config, constants);
  run.constants = constants;
  run.data = std::move(data);
  return run;
}

}  // namespace

TEST_CASE("probe constants are positive, prefix-stable and trend correctly") {
  const GridSpec grid = GridSpec::make(16, kTwoPi);
  const ProblemData data = well_prepared_data(grid, 5, 1, 3, 1.0);
  const EmpiricalConstants small =
      estimate_constants(grid, data.gravity, 12, 99);
  const EmpiricalConstants big =
      estimate_constants(grid, data.gravity, 24, 99);

  CHECK(small.C_B > 0.0);
  CHECK(small.C_L > 0.0);
  CHECK(small.C_L_slope > 0.0);

  // doubling the probe budget never decreases a max
  CHECK(big.C_B >= small.C_B);
  CHECK(big.C_L >= small.C_L);
  for (const auto& [p, value] : small.C1) CHECK(big.C1.at(p) >= value);
  for (const auto& [p, value] : small.C1p) CHECK(big.C1p.at(p) >= value);

  // the bilinear kernel constant blows up toward p = 3/2 on the fixed probes
  CHECK(big.C1.at(1.6) > big.C1.at(2.0));
  CHECK(big.C1.at(2.0) > big.C1.at(3.0));

  CHECK_THROWS_AS(estimate_constants(grid, data.gravity, 5, 99),
                  std::invalid_argument);
}

TEST_CASE("zero forces give the zero fixed point in one iteration") {
  const GridSpec grid = GridSpec::make(16, kTwoPi);
  ProblemData data = well_prepared_data(grid, 7, 1, 3, 1.0);
  data = scaled(data, 0.0, 1.0);  // zero forces, keep gravity
  const EmpiricalConstants constants =
      estimate_constants(grid, data.gravity, 12, 5);
  const PicardResult result = picard_solve(data, SolverConfig{}, constants);
  CHECK(result.converged);
  CHECK(result.iterations == 1);
  CHECK(lp_norm(result.u, 2.0) == 0.0);
  CHECK(lp_norm(result.theta, 2.0) == 0.0);
}

TEST_CASE("golden small-data run realizes the contraction regime") {
  const GoldenRun run = make_golden(16, /*toy=*/false);
  const SmallnessReport& smallness = run.result.smallness;

  CHECK(smallness.condition_3CL);
  CHECK(smallness.condition_9dCB);
  CHECK(smallness.condition_sum);
  CHECK(run.result.in_regime);
  CHECK(run.result.converged);
  CHECK(run.result.residual_rel <= 1e-10);

  // every iterate stays inside the 3 delta ball
  for (const auto& row : run.result.trace.rows) {
    CHECK(row.u_weak3 + row.theta_weak3 <= 3.0 * run.delta * (1.0 + 1e-9));
    CHECK(row.div_defect < 1e-12);
  }

  // measured contraction against the empirical bound plus slack
  const double bound = smallness.C_L_emp +
                       6.0 * run.delta * smallness.C_B_emp + 0.05;
  CHECK(run.result.trace.max_contraction_ratio(1e-13) <= bound);

  // increments decay geometrically after the first step
  const auto& rows = run.result.trace.rows;
  for (size_t r = 3; r < rows.size(); ++r)
    if (rows[r].increment > 1e-13 && rows[r - 1].increment > 1e-13)
      CHECK(rows[r].increment <= rows[r - 1].increment * (1.0 + 1e-9));

  SUBCASE("restart from the converged state moves at most the tolerance") {
    const VectorField b1 = bilinear_B(run.result.u, run.result.u);
    const ScalarField b2 = bilinear_B2(run.result.theta, run.result.u);
    const VectorField next_u =
        run.data.lifted_u0 + b1 + linear_L(run.result.theta, run.data.gravity);
    const ScalarField next_theta = run.data.lifted_theta0 + b2;
    const double moved = pair_weak3(next_u - run.result.u,
                                    next_theta - run.result.theta);
    CHECK(moved <= 1e-12 * pair_weak3(run.data.lifted_u0,
                                      run.data.lifted_theta0) * 1.001);
  }
}

TEST_CASE("toy-mode run converges under the same smallness conditions") {
  const GoldenRun run = make_golden(16, /*toy=*/true);
  CHECK(run.result.converged);
  CHECK(pair_weak3(run.result.u, run.result.theta) <=
        3.0 * run.delta * (1.0 + 1e-9));
  CHECK(run.result.trace.rows.back().div_defect < 1e-12);
}

TEST_CASE("toy mode without a localizer is rejected") {
  const GridSpec grid = GridSpec::make(16, kTwoPi);
  const ProblemData data = well_prepared_data(grid, 3, 1, 3, 1e-3);
  const EmpiricalConstants constants =
      estimate_constants(grid, data.gravity, 12, 5);
  SolverConfig config;
  config.toy_mode = true;
  CHECK_THROWS_AS(picard_solve(data, config, constants),
                  std::invalid_argument);
}

TEST_CASE("far-above-regime data is labeled and fails informatively") {
  const GridSpec grid = GridSpec::make(16, kTwoPi);
  const ProblemData data = well_prepared_data(grid, 11, 1, 3, 50.0);
  const EmpiricalConstants constants =
      estimate_constants(grid, data.gravity, 12, 5);
  SolverConfig config;
  config.max_iterations = 25;
  const PicardResult result = picard_solve(data, config, constants);
  CHECK_FALSE(result.in_regime);
  CHECK_FALSE(result.converged);
  CHECK(result.trace.rows.size() >= 2);  // trace intact on failure
  CHECK(result.trace.rows.size() <= 26);
}

TEST_CASE("persistence report realizes the geometric-series bound") {
  const GoldenRun run = make_golden(16, false);
  const auto rows = persistence_report(
      run.result.u, run.result.theta, run.data,
      {4.0, 5.0, 7.0, std::numeric_limits<double>::infinity()});
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(row.pass);
    CHECK(row.u_lp + row.theta_lp <= row.bound + 1e-8);
  }

  SUBCASE("zero solution passes trivially") {
    ProblemData zero = scaled(run.data, 0.0, 1.0);
    const auto zrows = persistence_report(VectorField(run.data.grid()),
                                          ScalarField(run.data.grid()), zero,
                                          {4.0});
    CHECK(zrows[0].pass);
    CHECK(zrows[0].u_lp == 0.0);
  }
}

TEST_CASE("pressure recovery closes the momentum balance") {
  const GoldenRun run = make_golden(16, false);
  const ScalarField pressure =
      recover_pressure(run.result.u, run.result.theta, run.data);
  CHECK(std::abs(pressure.mean()) < 1e-14 *
                                        (1.0 + pressure.values.abs().maxCoeff()));
  const double residual = momentum_residual(run.result.u, run.result.theta,
                                            pressure, run.data);
  CHECK(residual <= 1e-8);

  SUBCASE("zero fields give zero pressure") {
    ProblemData zero = scaled(run.data, 0.0, 1.0);
    const ScalarField p0 = recover_pressure(VectorField(run.data.grid()),
                                            ScalarField(run.data.grid()), zero);
    CHECK(p0.values.abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("smallness report is self-consistent") {
  const GridSpec grid = GridSpec::make(16, kTwoPi);
  const ProblemData data = well_prepared_data(grid, 13, 1, 3, 1e-3);
  const EmpiricalConstants constants =
      estimate_constants(grid, data.gravity, 12, 5);
  const SmallnessReport report = make_smallness_report(data, constants);
  CHECK(report.condition_3CL == (3.0 * report.C_L_emp < 1.0));
  CHECK(report.condition_9dCB == (9.0 * report.delta * report.C_B_emp < 1.0));
  CHECK(report.condition_sum ==
        (report.C_L_emp + 6.0 * report.delta * report.C_B_emp < 1.0));
  CHECK(report.delta ==
        doctest::Approx(pair_weak3(data.lifted_u0, data.lifted_theta0)));
}

TEST_CASE("well-prepared data invariants") {
  const GridSpec grid = GridSpec::make(16, kTwoPi);
  const double amplitude = 0.25;
  const ProblemData data = well_prepared_data(grid, 17, 1, 3, amplitude);

  SUBCASE("exactly zero mean and in-band support") {
    CHECK(std::abs(data.g_force.mean()) < 1e-14 * amplitude);
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(data.f_force[i].mean()) < 1e-14 * amplitude);
    const SpectralField spec = forward_transform(data.g_force);
    CHECK(std::abs(spec.coeff[0]) < 1e-15);
    for (long idx = 0; idx < grid.size(); ++idx) {
      const double k = wavevector(grid, idx).norm();
      if (k > 3.0 + 1e-12 || k < 1.0 - 1e-12)
        CHECK(std::abs(spec.coeff[idx]) < 1e-15);
    }
  }
  SUBCASE("non-degeneracy pairing is positive in every component") {
    for (int i = 0; i < 3; ++i) CHECK(nondegeneracy_pairing(data, i) > 0.0);
  }
  SUBCASE("amplitude acts linearly") {
    const ProblemData twice = well_prepared_data(grid, 17, 1, 3, 2.0 * amplitude);
    CHECK((twice.g_force.values - 2.0 * data.g_force.values).abs().maxCoeff() <
          1e-13 * amplitude);
    CHECK((twice.f_force[1].values - 2.0 * data.f_force[1].values)
              .abs()
              .maxCoeff() < 1e-13 * amplitude);
  }
  SUBCASE("lifts are consistent under the Laplacian") {
    CHECK(lift_consistency_defect(data) < 1e-10);
  }
  SUBCASE("band headroom is enforced") {
    CHECK_THROWS_AS(well_prepared_data(grid, 1, 0, 3, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(well_prepared_data(grid, 1, 1, 6, 1.0),
                    std::invalid_argument);
  }
  SUBCASE("the same seed describes the same modes on a refined grid") {
    const GridSpec fine = GridSpec::make(32, kTwoPi);
    const ProblemData refined = well_prepared_data(fine, 17, 1, 3, amplitude);
    const SpectralField coarse_spec = forward_transform(data.g_force);
    const SpectralField fine_spec = forward_transform(refined.g_force);
    const auto c_plus = coarse_spec.coeff[grid.index(1, 2, 0)];
    const auto f_plus = fine_spec.coeff[fine.index(1, 2, 0)];
    CHECK(std::abs(c_plus - f_plus) < 1e-12);
  }
}
