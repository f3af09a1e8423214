#include "shockstab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shockstab {

double Perturbation::operator()(double x) const {
  const double d = x - center;
  if (std::abs(d) >= 0.5 * width) return 0.0;
  const double c = std::cos(std::numbers::pi * d / width);
  return amplitude * c * c;
}

void SimConfig::validate() const {
  if (!(x_min < 0.0 && x_max > 0.0)) throw UsageError("simulate: domain must contain x = 0");
  if (cells < 10) throw UsageError("simulate: need at least 10 cells");
  if (!(cfl > 0.0 && cfl < 1.0)) throw UsageError("simulate: cfl must lie in (0, 1)");
  if (!(t_end > 0.0)) throw UsageError("simulate: t_end must be positive");
  if (!(perturbation.width > 0.0)) throw UsageError("simulate: perturbation width must be positive");
  if (!(C_star >= 0.0) || !(L > 0.0)) throw UsageError("simulate: shift constants C_star >= 0 and L > 0 required");
  if (!(c_scheme > 0.0)) throw UsageError("simulate: c_scheme must be positive");
  if (snapshot_every < 0) throw UsageError("simulate: snapshot_every must be >= 0");
}

SimState initial_state(const SimConfig& cfg) {
  cfg.validate();
  const ShockSetup& st = cfg.setup;
  const double dx = cfg.dx();
  SimState s;
  s.u.reserve(static_cast<std::size_t>(cfg.cells));
  for (int i = 0; i < cfg.cells; ++i) {
    const double xl = cfg.x_min + i * dx, xr = xl + dx;
    State u;
    if (xr <= 0.0)
      u = st.u_L;
    else if (xl >= 0.0)
      u = st.u_R;
    else
      u = (-xl / dx) * st.u_L + (xr / dx) * st.u_R;
    const double p = cfg.perturbation(xl + 0.5 * dx);
    for (int k = 0; k < u.dim(); ++k) u[k] += p;
    if (!st.model.box().contains(u))
      throw PreconditionError("simulate: perturbed initial data leaves the state box at x = " +
                              std::to_string(xl + 0.5 * dx));
    s.u.push_back(u);
  }
  return s;
}

double stable_dt(const SimState& s, const SimConfig& cfg) {
  double smax = 0.0;
  for (const State& u : s.u) smax = std::max(smax, cfg.setup.model.max_wave_speed(u));
  smax = std::max({smax, cfg.setup.model.max_wave_speed(cfg.setup.u_L), cfg.setup.model.max_wave_speed(cfg.setup.u_R)});
  return cfg.cfl * cfg.dx() / smax;
}

std::pair<State, State> step(SimState& s, const SimConfig& cfg, double dt) {
  const Model& m = cfg.setup.model;
  const std::size_t n = s.u.size();
  auto at = [&](std::ptrdiff_t i) -> const State& {
    if (i < 0) return cfg.setup.u_L;
    if (i >= static_cast<std::ptrdiff_t>(n)) return cfg.setup.u_R;
    return s.u[static_cast<std::size_t>(i)];
  };
  // Face k sits between cells k-1 and k.
  std::vector<State> F(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const State& a = at(static_cast<std::ptrdiff_t>(k) - 1);
    const State& b = at(static_cast<std::ptrdiff_t>(k));
    const double alpha = std::max(m.max_wave_speed(a), m.max_wave_speed(b));
    F[k] = 0.5 * (m.flux(a) + m.flux(b)) - (0.5 * alpha) * (b - a);
  }
  const double r = dt / cfg.dx();
  for (std::size_t i = 0; i < n; ++i) s.u[i] -= r * (F[i + 1] - F[i]);
  s.t += dt;
  return {F[0], F[n]};
}

double shift_velocity(const ShockSetup& st, double C_star, double L, const State& u_at_h) {
  const double lam = st.model.lambda(u_at_h, 1);
  return pia_contains(st, u_at_h) ? lam : lam - (C_star + 2.0 * L);
}

namespace {

// Index k with cell centres x_k <= h < x_{k+1}, clamped to the grid.
std::size_t left_neighbour(const SimConfig& cfg, double h) {
  const double pos = (h - cfg.x_min) / cfg.dx() - 0.5;
  const auto k = static_cast<long>(std::floor(pos));
  return static_cast<std::size_t>(std::clamp<long>(k, 0, cfg.cells - 2));
}

}  // namespace

State value_at(const SimState& s, const SimConfig& cfg, double h) {
  const std::size_t k = left_neighbour(cfg, h);
  return 0.5 * (s.u[k] + s.u[k + 1]);
}

double advance_shift(SimState& s, const SimConfig& cfg, double dt) {
  const double V = shift_velocity(cfg.setup, cfg.C_star, cfg.L, value_at(s, cfg, s.h));
  s.h += dt * V;
  return V;
}

double energy(const SimState& s, const SimConfig& cfg) {
  const ShockSetup& st = cfg.setup;
  const double dx = cfg.dx();
  double E = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    const double xl = cfg.x_min + static_cast<double>(i) * dx, xr = xl + dx;
    const double eL = st.model.rel_entropy(s.u[i], st.u_L);
    const double eR = st.a * st.model.rel_entropy(s.u[i], st.u_R);
    if (xr <= s.h)
      E += eL * dx;
    else if (xl >= s.h)
      E += eR * dx;
    else
      E += eL * (s.h - xl) + eR * (xr - s.h);
  }
  return E;
}

namespace {

double boundary_dissipation(const ShockSetup& st, double hdot, const State& um, const State& up) {
  const Model& m = st.model;
  return hdot * m.rel_entropy(um, st.u_L) - m.rel_entropy_flux(um, st.u_L) -
         st.a * (hdot * m.rel_entropy(up, st.u_R) - m.rel_entropy_flux(up, st.u_R));
}

// Crossing of the first component through the mid value, nearest to h.
double front_position(const SimState& s, const SimConfig& cfg) {
  const double mid = 0.5 * (cfg.setup.u_L[0] + cfg.setup.u_R[0]);
  const double dx = cfg.dx();
  double best = s.h, best_d = 1e300;
  for (std::size_t i = 0; i + 1 < s.u.size(); ++i) {
    const double a = s.u[i][0] - mid, b = s.u[i + 1][0] - mid;
    if ((a <= 0.0) == (b <= 0.0)) continue;
    const double x = cfg.x_min + (static_cast<double>(i) + 0.5) * dx + dx * a / (a - b);
    if (std::abs(x - s.h) < best_d) {
      best_d = std::abs(x - s.h);
      best = x;
    }
  }
  return best;
}

State total(const SimState& s, double dx) {
  State m = State::zero(s.u.front().dim());
  for (const State& u : s.u) m += dx * u;
  return m;
}

double total_entropy(const SimState& s, const Model& model, double dx) {
  double e = 0.0;
  for (const State& u : s.u) e += model.entropy(u) * dx;
  return e;
}

}  // namespace

SimReport run(const SimConfig& cfg) {
  cfg.validate();
  const ShockSetup& st = cfg.setup;
  const Model& m = st.model;
  SimReport rep;
  rep.dx = cfg.dx();
  rep.tol_scheme = cfg.c_scheme * rep.dx;

  SimState s = initial_state(cfg);
  {
    const double dx = rep.dx;
    for (int i = 0; i < cfg.cells; ++i) {
      const double x = cfg.x_min + (i + 0.5) * dx;
      const State d = s.u[static_cast<std::size_t>(i)] - (x < 0.0 ? st.u_L : st.u_R);
      rep.initial_l2_sq += dot(d, d) * dx;
    }
  }
  rep.E0 = energy(s, cfg);
  const State mass0 = total(s, rep.dx);
  State flux_in = State::zero(m.dim());
  const double budget0 = total_entropy(s, m, rep.dx);
  const double q_jump = m.entropy_flux(st.u_R) - m.entropy_flux(st.u_L);
  // ||V||_inf <= sup|lambda_1| + C* + 2L = C* + 3L.
  const double vmax = cfg.C_star + 3.0 * cfg.L;
  double lam_inf = 1e300;

  double E_prev = rep.E0;
  long ok = 0, ok_adj = 0;
  std::vector<std::pair<double, double>> fronts;
  rep.max_diss_boundary = -1e300;

  while (s.t < cfg.t_end * (1.0 - 1e-14)) {
    double dt = stable_dt(s, cfg);
    if (s.t + dt > cfg.t_end) dt = cfg.t_end - s.t;

    const std::size_t k = left_neighbour(cfg, s.h);
    const State um = s.u[k], up = s.u[k + 1];
    const State uh = 0.5 * (um + up);
    const SimState before = s;
    const double V = advance_shift(s, cfg, dt);
    const auto [fl, fr] = step(s, cfg, dt);
    flux_in += dt * (fl - fr);

    for (const State& u : s.u) {
      if (!all_finite(u) || !m.box().contains(u, 1e-9)) {
        rep.aborted = true;
        rep.abort_reason = "state left the box or became non-finite at t = " + std::to_string(s.t);
        break;
      }
      lam_inf = std::min(lam_inf, m.lambda(u, 1));
    }
    if (rep.aborted) {
      s = before;
      break;
    }

    StepRecord r;
    r.t = s.t;
    r.h = s.h;
    r.hdot = V;
    r.E = energy(s, cfg);
    r.dE = r.E - E_prev;
    E_prev = r.E;
    r.diss_boundary = boundary_dissipation(st, V, uh, uh);
    r.diss_adjacent = boundary_dissipation(st, V, um, up);
    r.u_h_in_pia = pia_contains(st, uh);
    r.adjacent_both_outside = !pia_contains(st, um) && !pia_contains(st, up);
    r.front = front_position(s, cfg);
    rep.series.push_back(r);
    ++rep.steps;

    if (r.diss_boundary <= rep.tol_scheme) ++ok;
    if (r.diss_adjacent <= rep.tol_scheme) ++ok_adj;
    rep.max_diss_boundary = std::max(rep.max_diss_boundary, r.diss_boundary);
    rep.max_E_excess = std::max(rep.max_E_excess, r.E - rep.E0);
    rep.max_positive_jump = std::max(rep.max_positive_jump, r.dE);
    rep.max_lipschitz_ratio = std::max(rep.max_lipschitz_ratio, std::abs(V) / vmax);
    if (r.adjacent_both_outside) {
      ++rep.case1_steps;
      if (V < lam_inf) ++rep.case1_ok;
    }
    const State mass = total(s, rep.dx);
    rep.conservation_residual = std::max(rep.conservation_residual, norm(mass - mass0 - flux_in));
    rep.entropy_budget_excess =
        std::max(rep.entropy_budget_excess, total_entropy(s, m, rep.dx) + s.t * q_jump - budget0);
    if (s.t >= 0.25 * cfg.t_end) fronts.emplace_back(s.t, r.front);
    if (cfg.snapshot_every > 0 && rep.steps % cfg.snapshot_every == 0) rep.snapshots.push_back({rep.steps, s.t, s.u});

    if (s.h <= cfg.x_min + rep.dx || s.h >= cfg.x_max - rep.dx) {
      rep.truncated = true;
      break;
    }
  }

  rep.final_state = s;
  if (rep.steps > 0) {
    rep.diss_ok_fraction = static_cast<double>(ok) / rep.steps;
    rep.diss_adjacent_ok_fraction = static_cast<double>(ok_adj) / rep.steps;
  }
  rep.E_bounded = rep.max_E_excess <= rep.tol_scheme;
  if (fronts.size() >= 2) {
    double st_ = 0, sx = 0, stt = 0, stx = 0;
    for (auto [t, x] : fronts) {
      st_ += t;
      sx += x;
      stt += t * t;
      stx += t * x;
    }
    const double n = static_cast<double>(fronts.size());
    rep.front_speed = (n * stx - st_ * sx) / (n * stt - st_ * st_);
    rep.front_speed_rel_error = std::abs(rep.front_speed - st.sigma_LR) / std::abs(st.sigma_LR);
  }
  rep.h_drift = std::abs(s.h - st.sigma_LR * s.t);
  return rep;
}

}  // namespace shockstab
