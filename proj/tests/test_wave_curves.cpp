#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "shockstab/wave_curves.hpp"

using namespace shockstab;

namespace {

double rh_residual(const Model& m, const State& u, const ShockPoint& p) {
  return norm(m.flux(p.state) - m.flux(u) - p.speed * (p.state - u));
}

struct Case {
  Model model;
  int family;
};

std::vector<Case> cases() {
  const Model e = Model::elastodynamics(1.0);
  return {{Model::scalar_cubic(), 1}, {e, 1}, {e, 2}, {e.reflect(), 1}, {e.reflect(), 2},
          {Model::elastodynamics(0.25), 1}};
}

// Random base well inside the box and a parameter keeping S(s) inside too.
std::pair<State, double> random_pair(const Model& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(-2.5, 2.5), v(-2.0, 2.0), s(-3.0, 3.0);
  const State u = m.dim() == 1 ? State(w(rng)) : State(w(rng), v(rng));
  return {u, s(rng)};
}

}  // namespace

TEST(ShockPoint, Examples) {
  const ShockPoint p = shock_point(Model::elastodynamics(1.0), 1, State(1.0, 0.0), -3.0);
  EXPECT_DOUBLE_EQ(p.state[0], -2.0);
  EXPECT_DOUBLE_EQ(p.state[1], -6.0);
  EXPECT_DOUBLE_EQ(p.speed, -2.0);
  const ShockPoint q = shock_point(Model::scalar_cubic(), 1, State(1.0), 1.0);
  EXPECT_DOUBLE_EQ(q.state[0], 2.0);
  EXPECT_DOUBLE_EQ(q.speed, -7.0);
}

TEST(ShockPoint, ZeroParameterIsBaseWithCharacteristicSpeed) {
  for (const auto& [m, fam] : cases()) {
    const State u = m.dim() == 1 ? State(0.7) : State(0.7, -0.4);
    const ShockPoint p = shock_point(m, fam, u, 0.0);
    EXPECT_EQ(p.state, u);
    EXPECT_NEAR(p.speed, m.lambda(u, fam), 1e-14);
  }
}

TEST(ShockPoint, OutsideBoxRejected) {
  EXPECT_THROW(shock_point(Model::scalar_cubic(), 1, State(1.0), 6.0), PreconditionError);
  EXPECT_THROW(shock_point(Model::scalar_cubic(), 1, State(7.0), 0.0), PreconditionError);
}

TEST(ShockPoint, RankineHugoniotResidual) {
  std::mt19937_64 rng(21);
  for (const auto& [m, fam] : cases()) {
    int checked = 0;
    while (checked < 1000) {
      const auto [u, s] = random_pair(m, rng);
      const ShockCurve c(m, fam, u);
      if (!m.box().contains(c.state(s))) continue;
      const ShockPoint p = shock_point(m, fam, u, s);
      ASSERT_LE(rh_residual(m, u, p), 1e-10) << m.name() << " " << u.str() << " s=" << s;
      ++checked;
    }
  }
}

TEST(ShockPoint, SpeedDerivativeMatchesFiniteDifferences) {
  std::mt19937_64 rng(22);
  for (const auto& [m, fam] : cases()) {
    for (int k = 0; k < 300; ++k) {
      const auto [u, s] = random_pair(m, rng);
      const ShockCurve c(m, fam, u);
      const double h = 1e-6;
      const double fd = (c.speed(s + h) - c.speed(s - h)) / (2 * h);
      EXPECT_NEAR(c.speed_deriv(s), fd, 1e-6 * (1.0 + std::abs(fd)));
    }
  }
}

TEST(CriticalParams, Examples) {
  const CriticalParams a = critical_params(Model::scalar_cubic(), 1, State(1.0));
  EXPECT_DOUBLE_EQ(a.s_natural, -1.5);
  ASSERT_TRUE(a.s_minus_natural);
  EXPECT_DOUBLE_EQ(*a.s_minus_natural, -3.0);
  const CriticalParams b = critical_params(Model::elastodynamics(1.0), 1, State(1.0, 0.0));
  EXPECT_DOUBLE_EQ(b.s_natural, -1.5);
  EXPECT_DOUBLE_EQ(*b.s_minus_natural, -3.0);
  const CriticalParams c = critical_params(Model::elastodynamics(1.0), 1, State(-2.0, 0.0));
  EXPECT_DOUBLE_EQ(c.s_natural, 3.0);
  EXPECT_DOUBLE_EQ(*c.s_minus_natural, 6.0);
  EXPECT_EQ(c.orientation, -1);
}

TEST(CriticalParams, DegenerateBaseRejected) {
  EXPECT_THROW(critical_params(Model::scalar_cubic(), 1, State(0.0)), PreconditionError);
  EXPECT_THROW(critical_params(Model::elastodynamics(1.0), 1, State(0.0, 3.0)), PreconditionError);
}

TEST(CriticalParams, SpeedReturnsToCharacteristic) {
  // sigma(0) = sigma(s_minus_natural) = lambda(u); sigma'(s_natural) = 0.
  for (const auto& [m, fam] : cases()) {
    for (double w : {-1.5, -0.6, 0.4, 1.0, 1.3}) {
      const State u = m.dim() == 1 ? State(w) : State(w, 0.5);
      const ShockCurve c(m, fam, u);
      const CriticalParams cp = critical_params(m, fam, u);
      EXPECT_NEAR(c.speed_deriv(cp.s_natural), 0.0, 1e-12);
      if (cp.s_minus_natural) { EXPECT_NEAR(c.speed(*cp.s_minus_natural), m.lambda(u, fam), 1e-8); }
    }
  }
}

TEST(CriticalParams, MonotonicityPattern) {
  // Oriented: sigma' has one sign for t > t_natural and the other below.
  for (const auto& [m, fam] : cases()) {
    for (double w : {-1.2, 0.8}) {
      const State u = m.dim() == 1 ? State(w) : State(w, 0.0);
      const ShockCurve c(m, fam, u);
      const double tn = c.t_natural();
      const double sign_above = c.speed_deriv(c.raw(tn + 0.5)) * c.orientation();
      for (double t = tn + 0.05; t < tn + 3.0; t += 0.05)
        EXPECT_GT(c.speed_deriv(c.raw(t)) * c.orientation() * sign_above, 0.0);
      for (double t = tn - 0.05; t > tn - 3.0; t -= 0.05)
        EXPECT_LT(c.speed_deriv(c.raw(t)) * c.orientation() * sign_above, 0.0);
    }
  }
}

TEST(Lax, Examples) {
  const Model s = Model::scalar_cubic();
  EXPECT_TRUE(lax_admissible(s, 1, State(1.0), 1.0));
  EXPECT_FALSE(lax_admissible(s, 1, State(1.0), -1.0));
  EXPECT_TRUE(lax_admissible(s, 1, State(1.0), 0.0));
  EXPECT_TRUE(lax_admissible(s, 1, State(1.0), -3.0));
  EXPECT_TRUE(lax_admissible(s, 1, State(1.0), -4.0));
  EXPECT_TRUE(lax_admissible(Model::elastodynamics(1.0), 1, State(-2.0, 0.0), 0.0));
}

TEST(Lax, DirectAgreesWithParameterCharacterization) {
  std::mt19937_64 rng(23);
  for (const auto& [m, fam] : cases()) {
    int checked = 0;
    while (checked < 10000) {
      const auto [u, s] = random_pair(m, rng);
      const ShockCurve c(m, fam, u);
      if (u[0] == 0.0 || !m.box().contains(c.state(s))) continue;
      if (c.distance_to_boundary(s) < 1e-9) continue;
      ASSERT_EQ(c.admissible_direct(s), c.admissible_by_parameter(s)) << m.name() << " " << u.str() << " s=" << s;
      ++checked;
    }
  }
}

TEST(Structure, FamiliesAndReflection) {
  const Model e = Model::elastodynamics(1.0);
  EXPECT_EQ(ShockCurve(e, 1, State(1.0, 0.0)).structure(), AdmissibleStructure::TwoBranch);
  EXPECT_EQ(ShockCurve(e, 2, State(1.0, 0.0)).structure(), AdmissibleStructure::TwoBranch);
  EXPECT_EQ(ShockCurve(Model::scalar_cubic().reflect(), 1, State(1.0)).structure(), AdmissibleStructure::SingleBranch);
}

TEST(Reflection, FamilyTwoEqualsReflectedFamilyOne) {
  // u(t,-x) maps a 2-shock with speed sigma to a 1-shock with speed -sigma.
  const Model e = Model::elastodynamics(1.0);
  const Model r = e.reflect();
  for (double w : {-1.3, 0.5, 1.0, 2.2}) {
    const State u(w, 0.3);
    const ShockCurve c2(e, 2, u), c1(r, 1, u);
    for (double s = -2.5; s <= 2.5; s += 0.25) {
      EXPECT_EQ(c2.state(s), c1.state(s));
      EXPECT_EQ(c2.speed(s), -c1.speed(s));
    }
    const CriticalParams a = critical_params(e, 2, u), b = critical_params(r, 1, u);
    EXPECT_EQ(a.s_natural, b.s_natural);
    EXPECT_EQ(*a.s_minus_natural, *b.s_minus_natural);
  }
}

TEST(Cap, StaysInsideBox) {
  const Model e = Model::elastodynamics(1.0);
  const ShockCurve c(e, 1, State(1.0, 0.0));
  for (int dir : {-1, 1}) {
    const double cap = c.cap(dir);
    EXPECT_GT(cap, 0.0);
    EXPECT_TRUE(e.box().contains(c.state(dir * cap), 1e-9));
    EXPECT_FALSE(e.box().contains(c.state(dir * (cap + 1e-6))));
  }
}
