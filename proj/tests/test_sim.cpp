#include <gtest/gtest.h>

#include <cmath>

#include "shockstab/sim.hpp"

using namespace shockstab;

namespace {

const Model kElastic = Model::elastodynamics(1.0);

SimConfig base_config(int cells, double amplitude = 0.0) {
  SimConfig c;
  c.setup = ShockSetup::make(kElastic, 1, State(1.0, 0.0), 1.0, 0.1);
  ConstantsGridSpec g;
  g.rays = 64;
  g.box_points = 21;
  g.pia_points = 17;
  g.s_points = 32;
  g.sigma0_points = 20;
  g.pair_points = 7;
  const ConstantsReport k = estimate_constants(c.setup, g);
  c.C_star = k.C_star;
  c.L = k.L;
  c.cells = cells;
  c.t_end = 1.0;
  c.perturbation.amplitude = amplitude;
  return c;
}

}  // namespace

TEST(Sim, ConfigValidation) {
  SimConfig c = base_config(100);
  c.cfl = 1.5;
  EXPECT_THROW(c.validate(), UsageError);
  c = base_config(100);
  c.x_min = 1.0;
  EXPECT_THROW(c.validate(), UsageError);
  c = base_config(100);
  c.L = 0.0;
  EXPECT_THROW(run(c), UsageError);
  c = base_config(100, 20.0);
  EXPECT_THROW(initial_state(c), PreconditionError);
}

TEST(Sim, ConstantDataUnchanged) {
  const SimConfig c = base_config(200);
  SimState s;
  s.u.assign(200, c.setup.u_L);
  step(s, c, stable_dt(s, c));
  // The right ghost cell holds u_R, so only the last cell feels it.
  for (std::size_t i = 0; i + 1 < s.u.size(); ++i) EXPECT_EQ(s.u[i], c.setup.u_L) << i;
}

TEST(Sim, ShiftVelocity) {
  const SimConfig c = base_config(100);
  const ShockSetup& st = c.setup;
  EXPECT_EQ(shift_velocity(st, c.C_star, c.L, st.u_L), st.model.lambda(st.u_L, 1));
  EXPECT_EQ(shift_velocity(st, c.C_star, c.L, st.u_R), st.model.lambda(st.u_R, 1) - (c.C_star + 2 * c.L));
  for (double w = -4.5; w <= 4.5; w += 0.5)
    for (double v = -9; v <= 9; v += 1.5)
      EXPECT_LE(std::abs(shift_velocity(st, c.C_star, c.L, State(w, v))), c.L + c.C_star + 2 * c.L);
}

TEST(Sim, EnergyOfExactProfileVanishes) {
  const SimConfig c = base_config(400);
  const SimState s = initial_state(c);
  EXPECT_EQ(s.h, 0.0);
  // Face positions x_min + i dx miss h = 0 by rounding only.
  EXPECT_NEAR(energy(s, c), 0.0, 1e-13);
}

TEST(Sim, InitialEnergyBoundedByQuadraticBound) {
  const SimConfig c = base_config(400, 0.1);
  const SimState s = initial_state(c);
  const QuadraticBounds qb = quadratic_bounds(kElastic, kElastic.box(), 21);
  double l2 = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    const double x = c.x_min + (static_cast<double>(i) + 0.5) * c.dx();
    const State d = s.u[i] - (x < 0 ? c.setup.u_L : c.setup.u_R);
    l2 += dot(d, d) * c.dx();
  }
  const double E0 = energy(s, c);
  EXPECT_GT(E0, 0.0);
  EXPECT_LE(E0, qb.c_2star * l2);
}

TEST(Sim, UnperturbedShockTravelsAtShockSpeed) {
  const SimConfig c = base_config(400);
  const SimReport r = run(c);
  EXPECT_FALSE(r.aborted);
  EXPECT_FALSE(r.truncated);
  EXPECT_LT(r.front_speed_rel_error, 0.02);
  EXPECT_TRUE(r.E_bounded);
  EXPECT_LE(r.max_lipschitz_ratio, 1.0);
  EXPECT_LT(r.conservation_residual, 1e-10);
  EXPECT_LE(r.entropy_budget_excess, 1e-10);
  EXPECT_GT(r.diss_ok_fraction, 0.99);
  for (const StepRecord& s : r.series) EXPECT_GE(s.E, 0.0);
  EXPECT_NEAR(r.final_state.t, c.t_end, 1e-12);
}

TEST(Sim, PerturbedRunStaysBounded) {
  const SimConfig c = base_config(400, 0.1);
  const SimReport r = run(c);
  EXPECT_FALSE(r.aborted);
  EXPECT_TRUE(r.E_bounded);
  EXPECT_GE(r.diss_ok_fraction, 0.99);
  EXPECT_LT(r.conservation_residual, 1e-10);
}

TEST(Sim, Deterministic) {
  const SimConfig c = base_config(200, 0.1);
  const SimReport a = run(c), b = run(c);
  ASSERT_EQ(a.series.size(), b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    EXPECT_EQ(a.series[i].E, b.series[i].E);
    EXPECT_EQ(a.series[i].h, b.series[i].h);
  }
}

TEST(Sim, Snapshots) {
  SimConfig c = base_config(100);
  c.snapshot_every = 10;
  const SimReport r = run(c);
  EXPECT_EQ(r.snapshots.size(), static_cast<std::size_t>(r.steps / 10));
  for (const Snapshot& s : r.snapshots) EXPECT_EQ(s.u.size(), 100u);
}

TEST(Sim, ValueAtAveragesBracketingCells) {
  const SimConfig c = base_config(20);
  SimState s;
  for (int i = 0; i < 20; ++i) s.u.emplace_back(static_cast<double>(i), 0.0);
  // Centres sit at -9.5, -8.5, ...; h = 0 lies between cells 9 and 10.
  EXPECT_EQ(value_at(s, c, 0.0), State(9.5, 0.0));
  EXPECT_EQ(value_at(s, c, -100.0), State(0.5, 0.0));
}
