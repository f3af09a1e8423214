#include "shockstab/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shockstab/numerics.hpp"

namespace shockstab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Family-n objects live on family 1 of the reflected model.
std::pair<Model, int> route(const Model& model, int family) {
  model.check_family(family);
  if (family != 1 && family == model.dim()) return {reflect(model), 1};
  if (family != 1) throw UsageError("only families 1 and n are supported");
  return {model, 1};
}

}  // namespace

EpsilonResult compute_epsilon_on_curve(const ShockCurve& c) {
  if (c.degenerate()) throw PreconditionError("compute_epsilon: base lies on the degenerate manifold");
  if (c.structure() != AdmissibleStructure::TwoBranch)
    throw PreconditionError("compute_epsilon: epsilon is only defined for two-branch (convex-concave type) families");
  const Model& m = c.model();
  const State& u = c.base();
  EpsilonResult r;
  r.level = m.rel_entropy(u, c.state(c.s_minus_natural()));
  auto h = [&](double t) { return m.rel_entropy(u, c.state(c.raw(t))) - r.level; };
  const double cap = c.cap(c.orientation());
  if (h(cap) < 0.0) {
    r.epsilon = cap;
    r.truncated = true;
  } else {
    r.epsilon = bisect_root(h, 0.0, cap, 1e-12 * (1.0 + cap));
  }
  r.residual = h(r.epsilon);
  return r;
}

EpsilonResult compute_epsilon(const Model& model, int family, const State& u_L) {
  const auto [m, k] = route(model, family);
  return compute_epsilon_on_curve(ShockCurve(m, k, u_L));
}

EpsilonResult compute_epsilon(const Model& model, int family, const State& u_L, const EntropySpec& entropy) {
  return compute_epsilon(model.with_entropy(entropy), family, u_L);
}

CertifySearchSpec CertifySearchSpec::refined() const {
  CertifySearchSpec r = *this;
  r.rays = 2 * rays;
  r.grid_points = 0;  // resolved below from the base spec
  r.s_pos_points = 2 * s_pos_points;
  r.s_neg_points = 2 * s_neg_points;
  return r;
}

namespace {

struct Branches {
  double pos_hi = 0.0;
  bool has_neg = false;
  double neg_lo = 0.0, neg_hi = 0.0;
};

Branches branches(const ShockCurve& c, double s_extent) {
  Branches b;
  const double cap_pos = c.cap(c.orientation());
  if (c.structure() == AdmissibleStructure::TwoBranch) {
    b.pos_hi = std::min(s_extent, cap_pos);
    const double tm = c.t_minus_natural();
    const double lo = std::max(-c.cap(-c.orientation()), tm - s_extent);
    if (lo <= tm) {
      b.has_neg = true;
      b.neg_lo = lo;
      b.neg_hi = tm;
    }
  } else {
    b.pos_hi = std::min(c.t_natural(), cap_pos);
  }
  return b;
}

bool in_branches(const Branches& b, double t) {
  if (t >= 0.0 && t <= b.pos_hi) return true;
  return b.has_neg && t >= b.neg_lo && t <= b.neg_hi;
}

struct Candidate {
  double value = kNegInf;
  State u;
  double t = 0.0;
  double ht = 0.0;  // s spacing of the branch it came from
};

struct MemberResult {
  double dcont = kNegInf;
  Candidate best;
  long evals = 0;
};

std::vector<Candidate> top_k(std::vector<Candidate> v, std::size_t k) {
  std::stable_sort(v.begin(), v.end(), [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  if (v.size() > k) v.resize(k);
  return v;
}

std::vector<State> offsets(int dim, double h) {
  std::vector<State> o;
  for (int i = -2; i <= 2; ++i) {
    if (dim == 1) {
      o.emplace_back(i * h);
    } else {
      for (int j = -2; j <= 2; ++j) o.emplace_back(i * h, j * h);
    }
  }
  return o;
}

}  // namespace

ScanRecord scan_weight(const ShockSetup& st, const CertifySearchSpec& spec, double s_extent) {
  const Model& m = st.model;
  const int dim = m.dim();
  const int gp = spec.resolved_grid_points(dim);
  if (gp < 3 || spec.s_pos_points < 2 || spec.s_neg_points < 2 || spec.refine_levels < 0 || spec.refine_factor < 2 ||
      spec.refine_centers < 1)
    throw UsageError("certify: search grid too coarse");

  ScanRecord rec;
  rec.a = st.a;
  const auto boundary = pia_boundary(st, default_directions(dim, spec.rays));
  std::vector<State> members{st.u_L};
  for (const auto& b : boundary) {
    members.push_back(b.point);
    rec.pia_truncated = rec.pia_truncated || b.truncated;
  }
  const Box bb = pia_bounding_box(boundary, m.box(), 0.02);
  const auto xs = linspace(bb.range[0].first, bb.range[0].second, gp);
  double h_u = xs.size() > 1 ? xs[1] - xs[0] : 0.0;
  if (dim == 1) {
    for (double x : xs)
      if (pia_contains(st, State(x))) members.emplace_back(x);
  } else {
    const auto ys = linspace(bb.range[1].first, bb.range[1].second, gp);
    h_u = std::min(h_u, ys[1] - ys[0]);
    for (double x : xs)
      for (double y : ys)
        if (pia_contains(st, State(x, y))) members.emplace_back(x, y);
  }
  rec.members = static_cast<long>(members.size());

  const auto results = parallel_map<MemberResult>(members.size(), [&](std::size_t i) {
    const State& u = members[i];
    MemberResult r;
    r.dcont = d_cont(st, u);
    const ShockCurve c = st.curve_at(u);
    const Branches br = branches(c, s_extent);
    auto eval = [&](double t, double ht) {
      const double v = d_rh_on_curve(st, c, c.raw(t));
      ++r.evals;
      if (v > r.best.value) r.best = {v, u, t, ht};
    };
    const double hp = br.pos_hi / (spec.s_pos_points - 1);
    for (double t : linspace(0.0, br.pos_hi, spec.s_pos_points)) eval(t, hp);
    if (st.s0 <= br.pos_hi) eval(st.s0, hp);
    if (br.has_neg) {
      const double hn = (br.neg_hi - br.neg_lo) / (spec.s_neg_points - 1);
      for (double t : linspace(br.neg_lo, br.neg_hi, spec.s_neg_points)) eval(t, hn);
    }
    return r;
  });

  std::vector<Candidate> dc_cands, rh_cands;
  rec.max_dcont = kNegInf;
  rec.max_drh = kNegInf;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    rec.drh_evaluations += r.evals;
    dc_cands.push_back({r.dcont, members[i], 0.0, 0.0});
    rh_cands.push_back(r.best);
    if (r.dcont > rec.max_dcont) {
      rec.max_dcont = r.dcont;
      rec.argmax_dcont = members[i];
    }
    if (r.best.value > rec.max_drh) {
      rec.max_drh = r.best.value;
      rec.argmax_drh_u = r.best.u;
      rec.argmax_drh_s = st.curve_at(r.best.u).raw(r.best.t);
    }
  }
  rec.levels.push_back({0, rec.max_dcont, rec.max_drh, rec.drh_evaluations});

  const std::size_t k =
      std::min<std::size_t>(static_cast<std::size_t>(spec.refine_centers), std::max<std::size_t>(1, members.size() / 10));
  std::vector<Candidate> dc_top = top_k(dc_cands, k), rh_top = top_k(rh_cands, k);
  double scale = 1.0;
  for (int level = 1; level <= spec.refine_levels; ++level) {
    scale /= spec.refine_factor;
    long evals = 0;
    std::vector<Candidate> dc_new = dc_top, rh_new = rh_top;
    for (const Candidate& cnd : dc_top) {
      for (const State& off : offsets(dim, h_u * scale)) {
        const State u = cnd.u + off;
        if (!m.box().contains(u) || !pia_contains(st, u)) continue;
        const double v = d_cont(st, u);
        dc_new.push_back({v, u, 0.0, 0.0});
        if (v > rec.max_dcont) {
          rec.max_dcont = v;
          rec.argmax_dcont = u;
        }
      }
    }
    for (const Candidate& cnd : rh_top) {
      const double ht = cnd.ht * scale;
      for (const State& off : offsets(dim, h_u * scale)) {
        const State u = cnd.u + off;
        if (!m.box().contains(u) || !pia_contains(st, u)) continue;
        const ShockCurve c = st.curve_at(u);
        const Branches br = branches(c, s_extent);
        for (int j = -2; j <= 2; ++j) {
          const double t = cnd.t + j * ht;
          if (!in_branches(br, t) || !c.admissible_by_parameter(c.raw(t))) continue;
          const double v = d_rh_on_curve(st, c, c.raw(t));
          ++evals;
          rh_new.push_back({v, u, t, cnd.ht});
          if (v > rec.max_drh) {
            rec.max_drh = v;
            rec.argmax_drh_u = u;
            rec.argmax_drh_s = c.raw(t);
          }
        }
      }
    }
    rec.drh_evaluations += evals;
    rec.levels.push_back({level, rec.max_dcont, rec.max_drh, evals});
    dc_top = top_k(std::move(dc_new), k);
    rh_top = top_k(std::move(rh_new), k);
  }

  rec.pass = !rec.pia_truncated && rec.max_dcont <= spec.tolerance && rec.max_drh <= spec.tolerance;
  return rec;
}

namespace {

int sign_with_tol(double x, double tol) { return x > tol ? 1 : (x < -tol ? -1 : 0); }

double rel_change(double a, double b, double tol) {
  if (std::abs(a) <= tol && std::abs(b) <= tol) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

StabilityCheck stability_check(const ShockSetup& st, const CertifySearchSpec& spec, double s_extent,
                               const ScanRecord& coarse) {
  StabilityCheck sc;
  sc.performed = true;
  sc.coarse = coarse;
  CertifySearchSpec fine = spec.refined();
  fine.grid_points = 2 * spec.resolved_grid_points(st.model.dim()) - 1;
  sc.refined = scan_weight(st, fine, s_extent);
  const double z = 1e-12;
  sc.sign_stable = sign_with_tol(coarse.max_dcont, z) == sign_with_tol(sc.refined.max_dcont, z) &&
                   sign_with_tol(coarse.max_drh, z) == sign_with_tol(sc.refined.max_drh, z);
  sc.rel_change_dcont = rel_change(coarse.max_dcont, sc.refined.max_dcont, z);
  sc.rel_change_drh = rel_change(coarse.max_drh, sc.refined.max_drh, z);
  sc.ok = sc.sign_stable && sc.rel_change_dcont < 0.1 && sc.rel_change_drh < 0.1 && sc.refined.pass;
  return sc;
}

}  // namespace

CertificationReport certify_weight(const Model& model, int family, const State& u_L, double s0,
                                   const CertifySearchSpec& spec) {
  if (!(spec.a_min > 0.0 && spec.a_min < spec.a_max && spec.a_max < 1.0) || spec.steps < 1)
    throw UsageError("certify: invalid weight search range");
  CertificationReport rep;
  rep.spec = spec;
  rep.family = family;
  ShockSetup st = ShockSetup::make(model, family, u_L, s0, 0.5);
  rep.model = st.model.name();
  rep.from_family_n = st.from_family_n;
  rep.u_L = st.u_L;
  rep.u_R = st.u_R;
  rep.s0 = s0;
  rep.sigma_LR = st.sigma_LR;

  const ShockCurve cL = st.curve_at(u_L);
  if (cL.structure() == AdmissibleStructure::TwoBranch) {
    rep.epsilon = compute_epsilon_on_curve(cL);
    rep.moderate_strength_ok = s0 < rep.epsilon->epsilon;
    rep.s_extent = spec.s_extent > 0.0 ? spec.s_extent : 2.0 * rep.epsilon->epsilon;
  } else {
    rep.moderate_strength_ok = s0 < cL.t_natural();
    rep.s_extent = spec.s_extent > 0.0 ? spec.s_extent : cL.t_natural();
  }

  auto scan = [&](double a) {
    ScanRecord r = scan_weight(st.with_weight(a), spec, rep.s_extent);
    rep.history.push_back(r);
    return r;
  };

  ScanRecord lo_rec = scan(spec.a_min);
  if (!lo_rec.pass) {
    rep.success = false;
    rep.final_record = lo_rec;
    rep.failure_reason = lo_rec.pia_truncated ? "Pi_a reaches the state box boundary at a_min"
                                              : "sampled maxima positive at a_min";
    return rep;
  }
  ScanRecord best = lo_rec;
  const ScanRecord hi_rec = scan(spec.a_max);
  if (hi_rec.pass) {
    best = hi_rec;
  } else {
    double lo = std::log(spec.a_min), hi = std::log(spec.a_max);
    for (int i = 0; i < spec.steps; ++i) {
      const double mid = 0.5 * (lo + hi);
      ScanRecord r = scan(std::exp(mid));
      if (r.pass) {
        lo = mid;
        best = r;
      } else {
        hi = mid;
      }
    }
  }

  double a_star = best.a;
  if (spec.stability_check) {
    StabilityCheck sc = stability_check(st.with_weight(a_star), spec, rep.s_extent, best);
    while (!sc.ok && rep.backoffs < spec.max_backoffs) {
      ++rep.backoffs;
      a_star *= spec.backoff;
      if (a_star < spec.a_min) break;
      best = scan(a_star);
      if (!best.pass) continue;
      sc = stability_check(st.with_weight(a_star), spec, rep.s_extent, best);
    }
    rep.stability = sc;
    if (!sc.ok) {
      rep.success = false;
      rep.a_star = a_star;
      rep.final_record = best;
      rep.failure_reason = "refinement changed the sampled maxima beyond tolerance";
      return rep;
    }
  }
  rep.success = true;
  rep.a_star = a_star;
  rep.final_record = best;
  if (rep.from_family_n) rep.a_star_reciprocal = 1.0 / a_star;
  return rep;
}

ScalarEntropyBuild build_scalar_entropy(double u_L, double u_R, const Box& box) {
  if (!(u_L > 0.0) || !(u_R > u_L)) throw PreconditionError("build_scalar_entropy: requires 0 < u_L < u_R");
  const Model canon = Model::scalar_cubic(box);
  if (!box.contains(State(u_L)) || !box.contains(State(u_R)))
    throw PreconditionError("build_scalar_entropy: states outside the state box");
  ScalarEntropyBuild b;
  b.s0 = u_R - u_L;
  const EpsilonResult e0 = compute_epsilon(canon, 1, State(u_L));
  // A truncated epsilon is a lower bound: eps > box cap >= s0.
  if (e0.truncated || e0.epsilon > b.s0) {
    b.spec = EntropySpec::canonical();
    b.canonical_sufficient = true;
    b.epsilon = e0.epsilon;
    b.epsilon_truncated = e0.truncated;
    b.eta_LR = canon.rel_entropy(State(u_L), State(u_R));
    b.eta_level = e0.level;
    b.derivative_sign_ok = b.eta_LR_formula_ok = b.level_ok = true;
    return b;
  }

  const ShockCurve c0(canon, 1, State(u_L));
  const double sm = c0.state(c0.s_minus_natural())[0];
  double slope = 0.5 * std::min(1.0, sm * sm / (b.s0 * b.s0));
  for (int iter = 0; iter < 60; ++iter, slope *= 0.5) {
    const EntropySpec spec = EntropySpec::piecewise(slope, u_L);
    const Model m = canon.with_entropy(spec);
    const State L(u_L), R(u_R);

    // d/dv eta(u|v) = -eta''(v)(u - v): compare with central differences and
    // check the sign pattern on a grid over the box.
    bool sign_ok = true;
    for (double x : linspace(box.range[0].first, box.range[0].second, 25)) {
      for (double y : linspace(box.range[0].first, box.range[0].second, 25)) {
        const double h = 1e-5 * (1.0 + std::abs(y));
        // eta''' jumps at the breakpoints; central differences straddling them are O(h) off.
        if (std::abs(y) < 10 * h || std::abs(y - u_L) < 10 * h) continue;
        const double fd = (m.rel_entropy(State(x), State(y + h)) - m.rel_entropy(State(x), State(y - h))) / (2 * h);
        const double exact = -m.entropy_hessian_diag(State(y))[0] * (x - y);
        if (std::abs(fd - exact) > 1e-6 * (1.0 + std::abs(exact))) sign_ok = false;
        if (x != y && (exact < 0.0) != (x > y)) sign_ok = false;
      }
    }
    const double eta_lr = m.rel_entropy(L, R);
    const bool formula_ok = std::abs(eta_lr - 0.5 * slope * b.s0 * b.s0) <= 1e-9 * (1.0 + eta_lr);
    const ShockCurve c(m, 1, L);
    const double level = m.rel_entropy(L, c.state(c.s_minus_natural()));
    const bool level_ok = eta_lr < level;
    const EpsilonResult e = compute_epsilon_on_curve(c);
    if (sign_ok && formula_ok && level_ok && (e.truncated || e.epsilon > b.s0)) {
      b.spec = spec;
      b.slope = slope;
      b.epsilon = e.epsilon;
      b.epsilon_truncated = e.truncated;
      b.eta_LR = eta_lr;
      b.eta_level = level;
      b.derivative_sign_ok = sign_ok;
      b.eta_LR_formula_ok = formula_ok;
      b.level_ok = level_ok;
      b.halvings = iter;
      return b;
    }
  }
  throw NumericalError("build_scalar_entropy: no admissible slope found");
}

std::string to_string(RegionClass c) {
  switch (c) {
    case RegionClass::NotAdmissible: return "NOT_ADMISSIBLE";
    case RegionClass::AdmissibleNotCovered: return "ADMISSIBLE_NOT_COVERED";
    case RegionClass::CoveredStable: return "COVERED_STABLE";
  }
  return "?";
}

namespace {

std::vector<State> region_grid(const Model& model, const RegionGridSpec& g, double* half_dv) {
  const int n = model.dim();
  if (static_cast<int>(g.ranges.size()) != n || static_cast<int>(g.points.size()) != n)
    throw UsageError("region_map: grid needs one range and one point count per state component");
  for (int i = 0; i < n; ++i)
    if (g.points[static_cast<std::size_t>(i)] < 2 || !(g.ranges[static_cast<std::size_t>(i)].first <
                                                       g.ranges[static_cast<std::size_t>(i)].second))
      throw UsageError("region_map: degenerate grid");
  std::vector<State> pts;
  const auto xs = linspace(g.ranges[0].first, g.ranges[0].second, g.points[0]);
  if (n == 1) {
    for (double x : xs) pts.emplace_back(x);
    *half_dv = 0.0;
    return pts;
  }
  const auto ys = linspace(g.ranges[1].first, g.ranges[1].second, g.points[1]);
  *half_dv = 0.5 * (ys[1] - ys[0]);
  for (double x : xs)
    for (double y : ys) pts.emplace_back(x, y);
  return pts;
}

bool adaptive_covers(double base, double cand) {
  // f(u) = -u^3 is odd, so bases below zero are handled by u -> -u.
  double uL = base, uR = cand;
  if (uL < 0.0) {
    uL = -uL;
    uR = -uR;
  }
  if (!(uR > uL)) return false;
  try {
    const ScalarEntropyBuild b = build_scalar_entropy(uL, uR, Box::interval(-std::abs(uR) - std::abs(uL) * 3.0 - 1.0,
                                                                             std::abs(uR) + std::abs(uL) * 3.0 + 1.0));
    return b.epsilon > b.s0;
  } catch (const std::exception&) {
    return false;
  }
}

RegionMap classify_cells(const ShockCurve& c, const RegionGridSpec& grid, EntropyPolicy policy) {
  const Model& model = c.model();
  if (c.degenerate()) throw PreconditionError("region_map: base lies on the degenerate manifold");
  if (policy == EntropyPolicy::Adaptive && model.kind() != ModelKind::ScalarCubic)
    throw UsageError("region_map: the adaptive entropy policy is only available for the scalar model");
  RegionMap map;
  map.family = c.family();
  if (c.structure() == AdmissibleStructure::TwoBranch) map.epsilon = compute_epsilon_on_curve(c).epsilon;

  double half_dv = 0.0;
  const auto pts = region_grid(model, grid, &half_dv);
  map.cells.reserve(pts.size());
  for (const State& u : pts) {
    RegionCell cell;
    cell.u = u;
    const double s = u[0] - c.base()[0];
    cell.s_param = s;
    if (model.dim() == 2 && std::abs(c.state(s)[1] - u[1]) > half_dv * (1.0 + 1e-12)) {
      cell.cls = RegionClass::NotAdmissible;
      cell.off_curve = true;
      cell.s_param = kNaN;
      cell.reason = "off_curve";
      map.cells.push_back(cell);
      continue;
    }
    const double t = c.oriented(s);
    if (!lax_admissible(model, c.family(), c.base(), s)) {
      cell.cls = RegionClass::NotAdmissible;
      cell.reason = c.structure() == AdmissibleStructure::TwoBranch ? "excluded_band" : "beyond_natural";
    } else if (t == 0.0) {
      cell.cls = RegionClass::CoveredStable;
      cell.reason = "base_state";
    } else if (t < 0.0) {
      cell.cls = RegionClass::AdmissibleNotCovered;
      cell.reason = "negative_branch";
    } else if (c.structure() == AdmissibleStructure::SingleBranch) {
      const bool critical = t >= c.t_natural();
      cell.cls = critical ? RegionClass::AdmissibleNotCovered : RegionClass::CoveredStable;
      cell.reason = critical ? "critical_endpoint" : "below_natural";
    } else if (policy == EntropyPolicy::Adaptive) {
      const bool ok = adaptive_covers(c.base()[0], u[0]);
      cell.cls = ok ? RegionClass::CoveredStable : RegionClass::AdmissibleNotCovered;
      cell.reason = ok ? "adaptive_entropy" : "adaptive_entropy_failed";
    } else if (t < *map.epsilon) {
      cell.cls = RegionClass::CoveredStable;
      cell.reason = "below_epsilon";
    } else {
      cell.cls = RegionClass::AdmissibleNotCovered;
      cell.reason = "beyond_epsilon";
    }
    map.cells.push_back(cell);
  }
  return map;
}

}  // namespace

RegionMap region_map_reflected(const Model& model, int family, const State& u_base, const RegionGridSpec& grid,
                               EntropyPolicy policy) {
  const auto [m, k] = route(model, family);
  RegionMap map = classify_cells(ShockCurve(m, k, u_base), grid, policy);
  map.family = family;
  return map;
}

RegionMap region_map(const Model& model, int family, const State& u_base, const RegionGridSpec& grid,
                     EntropyPolicy policy) {
  model.check_state(u_base, "region_map");
  RegionMap map = classify_cells(ShockCurve(model, family, u_base), grid, policy);
  if (family != 1) {
    const RegionMap ref = region_map_reflected(model, family, u_base, grid, policy);
    bool same = ref.cells.size() == map.cells.size() && ref.epsilon.has_value() == map.epsilon.has_value();
    if (same && map.epsilon) same = std::abs(*ref.epsilon - *map.epsilon) <= 1e-12 * (1.0 + std::abs(*map.epsilon));
    for (std::size_t i = 0; same && i < map.cells.size(); ++i) {
      const auto& a = map.cells[i];
      const auto& b = ref.cells[i];
      same = a.cls == b.cls && a.off_curve == b.off_curve &&
             (a.off_curve || std::abs(a.s_param - b.s_param) <= 1e-12 * (1.0 + std::abs(a.s_param)));
    }
    if (!same) throw NumericalError("region_map: family-n map disagrees with the reflected family-1 map");
    map.cross_checked = true;
  }
  return map;
}

}  // namespace shockstab
