#include "shockstab/dissipation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "shockstab/numerics.hpp"

namespace shockstab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rh_residual(const Model& model, const State& l, const State& r, double sigma) {
  const State res = model.flux(r) - model.flux(l) - sigma * (r - l);
  return norm(res);
}

}  // namespace

ShockSetup ShockSetup::make(const Model& model, int family, const State& u_L, double s0, double a) {
  model.check_family(family);
  model.check_state(u_L, "shock setup");
  if (!(s0 > 0.0) || !std::isfinite(s0)) throw UsageError("shock setup: s0 must be positive");
  if (!(a > 0.0 && a < 1.0)) throw UsageError("shock setup: weight a must lie in (0, 1)");
  if (family != 1 && family != model.dim())
    throw UsageError("shock setup: only families 1 and n are supported");

  ShockSetup st;
  st.from_family_n = family != 1;
  st.model = st.from_family_n ? reflect(model) : model;
  st.family = 1;
  st.u_L = u_L;
  st.s0 = s0;
  st.a = a;
  if (!st.model.box().contains(u_L)) throw PreconditionError("shock setup: u_L lies outside the state box");

  const ShockCurve c = st.curve_at(u_L);
  if (c.degenerate()) throw PreconditionError("shock setup: u_L lies on the degenerate manifold");
  const double raw = c.raw(s0);
  if (!lax_admissible(st.model, 1, u_L, raw))
    throw PreconditionError("shock setup: (u_L, S(s0)) violates the Lax condition");
  st.u_R = c.state(raw);
  st.sigma_LR = c.speed(raw);
  if (!st.model.box().contains(st.u_R)) throw PreconditionError("shock setup: u_R lies outside the state box");
  const double res = rh_residual(st.model, st.u_L, st.u_R, st.sigma_LR);
  if (res > 1e-10 * (1.0 + norm(st.model.flux(st.u_R)) + norm(st.model.flux(st.u_L))))
    throw NumericalError("shock setup: Rankine-Hugoniot residual too large");
  return st;
}

ShockSetup ShockSetup::with_weight(double a_new) const {
  if (!(a_new > 0.0 && a_new < 1.0)) throw UsageError("shock setup: weight a must lie in (0, 1)");
  ShockSetup r = *this;
  r.a = a_new;
  return r;
}

double d_cont(const ShockSetup& st, const State& u) {
  const Model& m = st.model;
  const double lam = m.lambda(u, 1);
  return st.a * (m.rel_entropy_flux(u, st.u_R) - lam * m.rel_entropy(u, st.u_R)) -
         (m.rel_entropy_flux(u, st.u_L) - lam * m.rel_entropy(u, st.u_L));
}

double d_rh_on_curve(const ShockSetup& st, const ShockCurve& curve, double s) {
  const Model& m = st.model;
  const State& um = curve.base();
  const State up = curve.state(s);
  const double sig = curve.speed(s);
  return st.a * (m.rel_entropy_flux(up, st.u_R) - sig * m.rel_entropy(up, st.u_R)) -
         (m.rel_entropy_flux(um, st.u_L) - sig * m.rel_entropy(um, st.u_L));
}

double d_rh_unchecked(const ShockSetup& st, const State& u_minus, double s) {
  return d_rh_on_curve(st, st.curve_at(u_minus), s);
}

double d_rh(const ShockSetup& st, const State& u_minus, double s) {
  if (!lax_admissible(st.model, 1, u_minus, s))
    throw PreconditionError("d_rh: (u_-, s) = (" + u_minus.str() + ", " + std::to_string(s) +
                            ") is not Lax admissible");
  return d_rh_unchecked(st, u_minus, s);
}

double pia_function(const ShockSetup& st, const State& u) {
  return st.model.rel_entropy(u, st.u_L) - st.a * st.model.rel_entropy(u, st.u_R);
}

bool pia_contains(const ShockSetup& st, const State& u) { return pia_function(st, u) <= 0.0; }

std::vector<State> default_directions(int dim, int rays) {
  if (dim == 1) return {State(-1.0), State(1.0)};
  if (rays < 4) throw UsageError("Pi_a boundary needs at least 4 rays");
  std::vector<State> d;
  d.reserve(static_cast<std::size_t>(rays));
  for (int k = 0; k < rays; ++k) {
    const double th = 2.0 * std::numbers::pi * k / rays;
    d.emplace_back(std::cos(th), std::sin(th));
  }
  return d;
}

std::vector<PiaBoundarySample> pia_boundary(const ShockSetup& st, const std::vector<State>& directions) {
  const Box& box = st.model.box();
  std::vector<PiaBoundarySample> out;
  out.reserve(directions.size());
  for (const State& dir0 : directions) {
    st.model.check_state(dir0, "Pi_a direction");
    const State dir = (1.0 / norm(dir0)) * dir0;
    double t_max = kInf;
    for (int i = 0; i < box.n; ++i) {
      const auto [lo, hi] = box.range[static_cast<std::size_t>(i)];
      if (dir[i] > 0.0) t_max = std::min(t_max, (hi - st.u_L[i]) / dir[i]);
      if (dir[i] < 0.0) t_max = std::min(t_max, (lo - st.u_L[i]) / dir[i]);
    }
    PiaBoundarySample b;
    auto f = [&](double t) { return pia_function(st, st.u_L + t * dir); };
    if (f(t_max) <= 0.0) {
      b.radius = t_max;
      b.truncated = true;
    } else {
      b.radius = bisect_bracket(f, 0.0, t_max, 1e-12 * (1.0 + t_max)).first;
    }
    b.point = st.u_L + b.radius * dir;
    out.push_back(b);
  }
  return out;
}

double pia_diameter(const ShockSetup& st, int rays) {
  const auto b = pia_boundary(st, default_directions(st.model.dim(), rays));
  double d = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j) d = std::max(d, distance(b[i].point, b[j].point));
  return d;
}

Box pia_bounding_box(const std::vector<PiaBoundarySample>& boundary, const Box& model_box, double pad) {
  Box bb = model_box;
  for (int i = 0; i < model_box.n; ++i) {
    double lo = kInf, hi = -kInf;
    for (const auto& b : boundary) {
      lo = std::min(lo, b.point[i]);
      hi = std::max(hi, b.point[i]);
    }
    const double ext = std::max(hi - lo, 1e-12);
    auto& r = bb.range[static_cast<std::size_t>(i)];
    r.first = std::max(model_box.range[static_cast<std::size_t>(i)].first, lo - pad * ext);
    r.second = std::min(model_box.range[static_cast<std::size_t>(i)].second, hi + pad * ext);
  }
  return bb;
}

std::vector<State> pia_samples(const ShockSetup& st, int rays, int points_per_axis, bool* truncated) {
  const auto boundary = pia_boundary(st, default_directions(st.model.dim(), rays));
  std::vector<State> pts{st.u_L};
  bool trunc = false;
  for (const auto& b : boundary) {
    pts.push_back(b.point);
    trunc = trunc || b.truncated;
  }
  if (truncated) *truncated = trunc;
  const Box bb = pia_bounding_box(boundary, st.model.box(), 0.02);
  const auto xs = linspace(bb.range[0].first, bb.range[0].second, points_per_axis);
  if (bb.n == 1) {
    for (double x : xs)
      if (pia_contains(st, State(x))) pts.emplace_back(x);
  } else {
    const auto ys = linspace(bb.range[1].first, bb.range[1].second, points_per_axis);
    for (double x : xs)
      for (double y : ys)
        if (pia_contains(st, State(x, y))) pts.emplace_back(x, y);
  }
  return pts;
}

IdentityValue dissipation_integral(const Model& model, const State& v, const State& u_minus, double s) {
  const ShockCurve c(model, 1, u_minus);
  const State up = c.state(s);
  const double sig = c.speed(s);
  IdentityValue r;
  r.lhs = model.rel_entropy_flux(up, v) - sig * model.rel_entropy(up, v) - model.rel_entropy_flux(u_minus, v) +
          sig * model.rel_entropy(u_minus, v);
  const auto q = integrate([&](double t) { return c.speed_deriv(t) * model.rel_entropy(u_minus, c.state(t)); },
                           0.0, s, 1e-10);
  r.rhs = q.value;
  r.quad_error = q.error_estimate;
  return r;
}

CurveDissipation curve_dissipation(const ShockSetup& st, const State& u, double s) {
  if (!lax_admissible(st.model, 1, u, s))
    throw PreconditionError("curve_dissipation: (u, s) is not Lax admissible");
  const Model& m = st.model;
  const ShockCurve c = st.curve_at(u);
  const double s0 = c.raw(st.s0);
  const State S0 = c.state(s0);
  const State Ss = c.state(s);
  CurveDissipation r;
  r.direct = m.rel_entropy_flux(Ss, S0) - c.speed(s) * m.rel_entropy(Ss, S0);
  const double e0 = m.rel_entropy(u, S0);
  r.via_identity =
      integrate([&](double t) { return c.speed_deriv(t) * (m.rel_entropy(u, c.state(t)) - e0); }, s0, s, 1e-11).value;
  if (std::abs(r.direct - r.via_identity) > 1e-8 * std::max(1.0, std::abs(r.direct)))
    throw NumericalError("curve_dissipation: direct value " + std::to_string(r.direct) +
                         " and identity value " + std::to_string(r.via_identity) + " disagree");
  return r;
}

double s0_star(const ShockSetup& st) {
  const ShockCurve c = st.curve_at(st.u_L);
  return 2.0 * c.oriented(c.s_natural()) - st.s0;
}

namespace {

std::vector<State> box_grid(const Box& b, int n) {
  std::vector<State> pts;
  const auto xs = linspace(b.range[0].first, b.range[0].second, n);
  if (b.n == 1) {
    for (double x : xs) pts.emplace_back(x);
    return pts;
  }
  const auto ys = linspace(b.range[1].first, b.range[1].second, n);
  for (double x : xs)
    for (double y : ys) pts.emplace_back(x, y);
  return pts;
}

// Oriented branch grid for the kappa / delta fit.
std::vector<double> fit_params(const ShockCurve& c, double s0, int n) {
  std::vector<double> t;
  const double cap_pos = c.cap(c.orientation());
  for (double x : linspace(0.0, std::min(cap_pos, 3.0 * s0), n)) t.push_back(x);
  if (c.structure() == AdmissibleStructure::TwoBranch) {
    const double tm = c.t_minus_natural();
    const double cap_neg = c.cap(-c.orientation());
    const double lo = std::max(-cap_neg, tm - 3.0 * s0);
    if (lo < tm)
      for (double x : linspace(lo, tm, n)) t.push_back(x);
  }
  return t;
}

}  // namespace

ConstantsReport estimate_constants(const ShockSetup& st, const ConstantsGridSpec& grid) {
  if (grid.rays < 4 || grid.box_points < 3 || grid.pia_points < 3 || grid.s_points < 4 || grid.sigma0_points < 1 ||
      grid.pair_points < 2)
    throw UsageError("constants: grid spec too coarse");
  const Model& m = st.model;
  ConstantsReport r;
  r.grid = grid;

  const QuadraticBounds qb = quadratic_bounds(m, m.box(), grid.pair_points);
  r.c_star = qb.c_star;
  r.c_2star = qb.c_2star;

  // L and C* over the whole box plus a finer grid around Pi_a.
  const auto boundary = pia_boundary(st, default_directions(m.dim(), grid.rays));
  std::vector<State> outer = box_grid(m.box(), grid.box_points);
  {
    Box near = pia_bounding_box(boundary, m.box(), 1.0);
    const auto extra = box_grid(near, grid.box_points);
    outer.insert(outer.end(), extra.begin(), extra.end());
  }
  for (const State& u : outer) r.L = std::max(r.L, std::abs(m.lambda(u, 1)));
  for (const State& u : outer) {
    const double B = m.rel_entropy(u, st.u_L) / st.a - m.rel_entropy(u, st.u_R);
    if (!(B > 0.0)) continue;  // u in Pi_a
    const double A = m.rel_entropy_flux(u, st.u_L) / st.a - m.rel_entropy_flux(u, st.u_R);
    if (A > 0.0) continue;
    r.C_star = std::max(r.C_star, std::abs(A) / B);
    ++r.C_star_samples;
  }

  bool trunc = false;
  const std::vector<State> pia = pia_samples(st, grid.rays, grid.pia_points, &trunc);
  r.pia_truncated = trunc;
  r.pia_samples = static_cast<long>(pia.size());
  for (const auto& b : boundary)
    for (const auto& c : boundary) r.pia_diameter = std::max(r.pia_diameter, distance(b.point, c.point));

  for (const State& u : pia) r.C1 = std::max(r.C1, m.rel_entropy(u, st.u_R));

  // sigma0 / beta scan.
  const double lamL = m.lambda(st.u_L, 1);
  double min_lam = kInf;
  for (const State& u : pia) min_lam = std::min(min_lam, m.lambda(u, 1));
  r.beta = -kInf;
  for (int k = 1; k <= grid.sigma0_points; ++k) {
    const double s0v = st.sigma_LR + (lamL - st.sigma_LR) * k / (grid.sigma0_points + 1);
    if (s0v > min_lam) continue;
    double beta = kInf;
    for (const State& u : pia) {
      const double eL = m.rel_entropy(u, st.u_L);
      const double eR = m.rel_entropy(u, st.u_R);
      if (eL > 1e-14) beta = std::min(beta, (m.rel_entropy_flux(u, st.u_L) - s0v * eL) / eL);
      if (eR > 1e-14) beta = std::min(beta, (s0v * eR - m.rel_entropy_flux(u, st.u_R)) / eR);
    }
    if (beta > r.beta) {
      r.beta = beta;
      r.sigma0 = s0v;
    }
  }
  r.sigma0_beta_feasible = r.beta > 0.0;

  // Theta and nu over Pi_a samples.
  const double t0s = s0_star(st);
  r.Theta = kInf;
  r.nu = kInf;
  for (const State& u : pia) {
    const ShockCurve c = st.curve_at(u);
    const double sig0 = c.speed(c.raw(st.s0));
    double th = std::abs(c.speed(c.raw(0.5 * st.s0)) - sig0);
    if (c.structure() == AdmissibleStructure::TwoBranch) {
      const double mid = 0.5 * (c.t_minus_natural() + t0s);
      th = std::min(th, std::abs(c.speed(c.raw(mid)) - sig0));
      const double nu = m.rel_entropy(u, c.state(c.s_minus_natural())) - m.rel_entropy(u, c.state(c.raw(st.s0)));
      r.nu = std::min(r.nu, nu);
    }
    r.Theta = std::min(r.Theta, th);
  }
  if (!std::isfinite(r.nu)) r.nu = kNaN;

  // kappa / delta_loc from the curve dissipation at u_L and along the boundary.
  struct Sample {
    double dist, F, dsig;
  };
  std::vector<Sample> samples;
  std::vector<State> fit_bases{st.u_L};
  const std::size_t stride = std::max<std::size_t>(1, boundary.size() / 16);
  for (std::size_t i = 0; i < boundary.size(); i += stride) fit_bases.push_back(boundary[i].point);
  for (const State& u : fit_bases) {
    const ShockCurve c = st.curve_at(u);
    if (c.degenerate()) continue;
    const State S0 = c.state(c.raw(st.s0));
    const double sig0 = c.speed(c.raw(st.s0));
    for (double t : fit_params(c, st.s0, grid.s_points)) {
      const double s = c.raw(t);
      const double dsig = std::abs(c.speed(s) - sig0);
      if (dsig < 1e-14) continue;
      const State Ss = c.state(s);
      const double F = m.rel_entropy_flux(Ss, S0) - c.speed(s) * m.rel_entropy(Ss, S0);
      samples.push_back({std::abs(t - st.s0), F, dsig});
    }
  }
  r.kappa = kNaN;
  r.delta_loc = kNaN;
  for (int j = 1; j < 20; ++j) {
    const double delta = 0.5 * st.s0 * (1.0 - j / 20.0);
    double kap = kInf;
    for (const auto& smp : samples) {
      const double ratio = smp.dist <= delta ? -smp.F / (smp.dsig * smp.dsig) : -smp.F / smp.dsig;
      kap = std::min(kap, ratio);
    }
    if (kap > 0.0) {
      r.kappa = kap;
      r.delta_loc = delta;
      break;
    }
  }
  return r;
}

}  // namespace shockstab
