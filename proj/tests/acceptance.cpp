// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "shockstab/certify.hpp"
#include "shockstab/dissipation.hpp"
#include "shockstab/numerics.hpp"
#include "shockstab/sim.hpp"

using namespace shockstab;

namespace {

const Model kElastic = Model::elastodynamics(1.0);
const Model kScalar = Model::scalar_cubic();

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

struct Criterion {
  int id;
  double budget_s;
  std::function<void(Outcome&)> body;
};

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void closed_form_anchors(Outcome& o) {
  const State uL(1.0, 0.0);
  const CriticalParams cp = critical_params(kElastic, 1, uL);
  o.check(cp.s_natural == -1.5, "s_natural = -1.5");
  o.check(cp.s_minus_natural && *cp.s_minus_natural == -3.0, "s_minus_natural = -3");
  const ShockCurve c(kElastic, 1, uL);
  const double sig = c.speed(-3.0);
  o.check(std::abs(sig - (-2.0)) <= 1e-8 && std::abs(kElastic.lambda(uL, 1) - (-2.0)) <= 1e-8,
          "sigma(s_minus_natural) = lambda_1 = -2");
  double worst = 0.0;
  for (double s : linspace(-c.cap(-1), c.cap(1), 4001)) {
    const ShockPoint p = shock_point(kElastic, 1, uL, s);
    worst = std::max(worst, norm(kElastic.flux(p.state) - kElastic.flux(uL) - p.speed * (p.state - uL)));
  }
  o.check(worst <= 1e-10, "RH residual <= 1e-10");
  o.detail << "sigma(-3)=" << sig << " max RH residual=" << worst;
}

void scalar_epsilon(Outcome& o) {
  const EpsilonResult e = compute_epsilon(kScalar, 1, State(1.0));
  o.check(std::abs(e.epsilon - 3.0) <= 1e-8, "epsilon = 3 +- 1e-8");
  o.check(!e.truncated, "not truncated");
  o.detail << "epsilon=" << e.epsilon;
}

void dissipation_identity(Outcome& o) {
  const std::vector<Model> models{kScalar, kElastic, kScalar.with_entropy(EntropySpec::piecewise(0.3, 1.0))};
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_real_distribution<double> w(-2.0, 2.0), s(-2.5, 2.5);
  double worst = 0.0, worst_v = 0.0;
  int done = 0;
  while (done < 1000) {
    const Model& m = models[pick(rng)];
    auto draw = [&] { return m.dim() == 1 ? State(w(rng)) : State(w(rng), w(rng)); };
    const State um = draw(), v = draw(), v2 = draw();
    const double ss = s(rng);
    if (!m.box().contains(ShockCurve(m, 1, um).state(ss))) continue;
    const IdentityValue a = dissipation_integral(m, v, um, ss);
    worst = std::max(worst, std::abs(a.lhs - a.rhs));
    worst_v = std::max(worst_v, std::abs(dissipation_integral(m, v2, um, ss).lhs - a.lhs));
    ++done;
  }
  o.check(worst <= 1e-8, "|LHS - RHS| <= 1e-8");
  o.check(worst_v <= 1e-10, "v-independence <= 1e-10");
  o.detail << "cases=" << done << " max|LHS-RHS|=" << worst << " max v-spread=" << worst_v;
}

void net_dissipation(Outcome& o) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> w(-1.6, 1.6), v(-2.0, 2.0);
  double worst = -INFINITY;
  for (const Model& m : {kScalar, kElastic}) {
    int done = 0;
    while (done < 100) {
      const State u = m.dim() == 1 ? State(w(rng)) : State(w(rng), v(rng));
      const ShockCurve c(m, 1, u);
      if (c.degenerate() || !m.box().contains(c.state(c.s_minus_natural()))) continue;
      worst = std::max(worst, dissipation_integral(m, u, u, c.s_minus_natural()).rhs);
      ++done;
    }
  }
  o.check(worst <= 1e-10, "net dissipation <= 1e-10");
  o.detail << "bases=200 max net=" << worst;
}

void pia_trend(Outcome& o) {
  const std::vector<double> as{1e-4, 1e-3, 1e-2};
  for (bool elastic : {false, true}) {
    std::vector<double> d;
    for (double a : as)
      d.push_back(pia_diameter(elastic ? ShockSetup::make(kElastic, 1, State(1.0, 0.0), 0.5, a)
                                       : ShockSetup::make(kScalar, 1, State(1.0), 1.0, a)));
    const double slope = loglog_slope(as, d);
    o.check(std::abs(slope - 0.5) <= 0.1, elastic ? "elastodynamics slope" : "scalar slope");
    o.detail << (elastic ? " elastodynamics" : "scalar") << " slope=" << slope;
  }
}

void check_certified(Outcome& o, const CertificationReport& r, const char* tag) {
  o.check(r.success && r.a_star > 0.0, std::string(tag) + " success");
  o.check(r.final_record && r.final_record->max_dcont <= 1e-12 && r.final_record->max_drh <= 1e-12,
          std::string(tag) + " maxima <= 1e-12");
  const StabilityCheck& s = r.stability;
  o.check(s.performed && s.sign_stable && s.rel_change_dcont < 0.1 && s.rel_change_drh < 0.1,
          std::string(tag) + " refinement stable");
  o.detail << tag << " a*=" << r.a_star;
  if (r.final_record) o.detail << " (max Dcont=" << r.final_record->max_dcont << ", max DRH=" << r.final_record->max_drh << ")";
  o.detail << " ";
}

void certification(Outcome& o) {
  check_certified(o, certify_weight(kScalar, 1, State(1.0), 1.0, CertifySearchSpec{}), "scalar");
  check_certified(o, certify_weight(kElastic, 1, State(1.0, 0.0), 0.5, CertifySearchSpec{}), "elastodynamics");
}

void strong_scalar_shock(Outcome& o) {
  const ScalarEntropyBuild b = build_scalar_entropy(1.0, 5.0);
  o.check(b.slope < 0.553, "slope < 0.553");
  o.check(b.epsilon > 4.0, "epsilon > 4");
  const CertificationReport r = certify_weight(kScalar.with_entropy(b.spec), 1, State(1.0), 4.0, CertifySearchSpec{});
  o.check(r.success, "certify with built entropy");
  o.detail << "slope=" << b.slope << " epsilon=" << b.epsilon << " a*=" << r.a_star;
}

void region_classes(Outcome& o) {
  const double lo = -5.5, hi = 5.5;
  const int n = 441;
  const double h = (hi - lo) / (n - 1);
  const RegionMap map = region_map(kScalar, 1, State(1.0), {{{lo, hi}}, {n}}, EntropyPolicy::Fixed);
  o.check(map.epsilon && std::abs(*map.epsilon - 3.0) <= 1e-8, "epsilon = 3");
  const double eps = map.epsilon ? *map.epsilon : 3.0;
  int wrong = 0;
  for (const RegionCell& c : map.cells) {
    const double s = c.s_param;
    if (std::abs(s + 3.0) <= h || std::abs(s) <= h || std::abs(s - eps) <= h) continue;
    RegionClass expect = RegionClass::AdmissibleNotCovered;
    if (s >= -3.0 && s < 0.0) expect = RegionClass::NotAdmissible;
    if (s >= 0.0 && s < eps) expect = RegionClass::CoveredStable;
    if (c.cls != expect) ++wrong;
  }
  o.check(wrong == 0, "class boundaries within one cell");
  o.detail << "cells=" << map.cells.size() << " misclassified=" << wrong << " cell=" << h;
}

SimConfig sim_config(const ConstantsReport& k, int cells, double amplitude) {
  SimConfig c;
  c.setup = ShockSetup::make(kElastic, 1, State(1.0, 0.0), 1.0, 0.1);
  c.C_star = k.C_star;
  c.L = k.L;
  c.cells = cells;
  c.cfl = 0.45;
  c.perturbation.amplitude = amplitude;
  return c;
}

void simulation(Outcome& o) {
  const ShockSetup st = ShockSetup::make(kElastic, 1, State(1.0, 0.0), 1.0, 0.1);
  const ConstantsReport k = estimate_constants(st, ConstantsGridSpec{});
  auto timed = [&](const SimConfig& c, SimReport& r) {
    const auto t0 = std::chrono::steady_clock::now();
    r = run(c);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(s < 120.0, "run under 2 min");
    o.check(!r.aborted, "no abort: " + r.abort_reason);
  };
  SimReport flat, pert2000, pert1000;
  timed(sim_config(k, 2000, 0.0), flat);
  o.check(flat.front_speed_rel_error <= 0.02, "front speed within 2%");
  o.check(flat.E_bounded, "E(t) <= E(0) + C_scheme dx");
  timed(sim_config(k, 2000, 0.1), pert2000);
  o.check(pert2000.diss_ok_fraction >= 0.99, "boundary dissipation at >= 99% of steps");
  timed(sim_config(k, 1000, 0.1), pert1000);
  const double ratio = pert2000.max_positive_jump / pert1000.max_positive_jump;
  o.check(std::abs(ratio - 0.5) <= 0.3 * 0.5, "jump halves under dx halving (+-30%)");
  o.detail << "front err=" << flat.front_speed_rel_error << " E excess=" << flat.max_E_excess << " (tol "
           << flat.tol_scheme << ") diss ok=" << pert2000.diss_ok_fraction
           << " (adjacent-cell traces, not gated: " << pert2000.diss_adjacent_ok_fraction << ") jump ratio=" << ratio;
}

void reflection(Outcome& o) {
  const Model r = kElastic.reflect();
  double worst = 0.0;
  auto upd = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };
  for (const State& u : {State(1.0, 0.0), State(-0.8, 0.5), State(2.0, -1.0)}) {
    const ShockCurve c2(kElastic, 2, u), c1(r, 1, u);
    for (double s : linspace(-2.0, 2.0, 81)) {
      upd(norm(c2.state(s) - c1.state(s)), 0.0);
      upd(c2.speed(s), -c1.speed(s));
    }
    const CriticalParams a = critical_params(kElastic, 2, u), b = critical_params(r, 1, u);
    upd(a.s_natural, b.s_natural);
    upd(*a.s_minus_natural, *b.s_minus_natural);
    upd(compute_epsilon(kElastic, 2, u).epsilon, compute_epsilon(r, 1, u).epsilon);

    const RegionGridSpec g{{{-3.0, 3.0}, {-8.0, 8.0}}, {31, 41}};
    const RegionMap m2 = region_map(kElastic, 2, u, g, EntropyPolicy::Fixed);
    const RegionMap m1 = region_map(r, 1, u, g, EntropyPolicy::Fixed);
    bool same = m2.cells.size() == m1.cells.size();
    for (std::size_t i = 0; same && i < m2.cells.size(); ++i) {
      same = m2.cells[i].cls == m1.cells[i].cls;
      if (std::isfinite(m2.cells[i].s_param)) upd(m2.cells[i].s_param, m1.cells[i].s_param);
    }
    o.check(same, "region map classes agree");
  }
  CertifySearchSpec spec;
  spec.grid_points = 33;
  spec.rays = 64;
  spec.stability_check = false;
  const CertificationReport c2 = certify_weight(kElastic, 2, State(1.0, 0.0), 0.5, spec);
  const CertificationReport c1 = certify_weight(r, 1, State(1.0, 0.0), 0.5, spec);
  upd(c2.a_star, c1.a_star);
  o.check(c2.success == c1.success, "certification outcome agrees");
  o.check(worst <= 1e-12, "max deviation <= 1e-12");
  o.detail << "max deviation=" << worst << " a*=" << c2.a_star;
}

}  // namespace

int main() {
  set_default_threads(std::max(1u, std::thread::hardware_concurrency()));
  const std::vector<Criterion> criteria{
      {1, 1.0, closed_form_anchors}, {2, 1.0, scalar_epsilon},       {3, 30.0, dissipation_identity},
      {4, 60.0, net_dissipation},    {5, 60.0, pia_trend},           {6, 300.0, certification},
      {7, 300.0, strong_scalar_shock}, {8, 60.0, region_classes},    {9, 480.0, simulation},
      {10, 120.0, reflection}};
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(secs < c.budget_s, "runtime budget");
    if (!o.pass) ++failed;
    std::string detail = o.detail.str();
    while (!detail.empty() && detail.back() == ' ') detail.pop_back();
    std::printf("criterion %d: %s  %s (%.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
