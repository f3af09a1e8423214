#include "shockstab/config_io.hpp"

#include <algorithm>
#include <cmath>

namespace shockstab {

namespace {

// NaN and infinities become null so the output stays valid JSON.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

void reject_unknown(const json& obj, const std::vector<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw UsageError(where + ": expected a JSON object");
  for (const auto& [key, _] : obj.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw UsageError(where + ": unknown field '" + key + "'");
}

State state_from_json(const json& j, int dim, const std::string& what) {
  if (j.is_number() && dim == 1) return State(j.get<double>());
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw UsageError(what + ": expected " + std::to_string(dim) + " component(s)");
  return dim == 1 ? State(j[0].get<double>()) : State(j[0].get<double>(), j[1].get<double>());
}

json state_to_json(const State& u) {
  json a = json::array();
  for (int i = 0; i < u.dim(); ++i) a.push_back(num(u[i]));
  return a;
}

Box box_from_json(const json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw UsageError("box: expected " + std::to_string(dim) + " [lo, hi] pair(s)");
  auto pair = [](const json& p) {
    if (!p.is_array() || p.size() != 2) throw UsageError("box: each range must be [lo, hi]");
    return std::pair{p[0].get<double>(), p[1].get<double>()};
  };
  if (dim == 1) {
    const auto [lo, hi] = pair(j[0]);
    return Box::interval(lo, hi);
  }
  const auto [wl, wh] = pair(j[0]);
  const auto [vl, vh] = pair(j[1]);
  return Box::rect(wl, wh, vl, vh);
}

json box_to_json(const Box& b) {
  json a = json::array();
  for (int i = 0; i < b.n; ++i) a.push_back({b.range[static_cast<std::size_t>(i)].first,
                                             b.range[static_cast<std::size_t>(i)].second});
  return a;
}

EntropySpec entropy_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "canonical") return EntropySpec::canonical();
    throw UsageError("entropy: unknown entropy '" + j.get<std::string>() + "'");
  }
  reject_unknown(j, {"kind", "slope", "anchor"}, "entropy");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "canonical") return EntropySpec::canonical();
  if (kind != "piecewise") throw UsageError("entropy: unknown kind '" + kind + "'");
  return EntropySpec::piecewise(j.at("slope").get<double>(), j.at("anchor").get<double>());
}

json entropy_to_json(const EntropySpec& e) {
  if (e.kind == EntropyKind::Canonical) return "canonical";
  return {{"kind", "piecewise"}, {"slope", e.slope}, {"anchor", e.anchor}};
}

Model model_from_json(const json& j) {
  reject_unknown(j, {"kind", "m", "box", "entropy", "reflected"}, "model");
  const std::string kind = j.at("kind").get<std::string>();
  Model model = Model::scalar_cubic();
  if (kind == "scalar_cubic") {
    if (j.contains("m")) throw UsageError("model: 'm' only applies to elastodynamics");
    const Box box = j.contains("box") ? box_from_json(j.at("box"), 1) : Model::default_scalar_box();
    const EntropySpec e = j.contains("entropy") ? entropy_from_json(j.at("entropy")) : EntropySpec::canonical();
    model = Model::scalar_cubic(box, e);
  } else if (kind == "elastodynamics") {
    const Box box = j.contains("box") ? box_from_json(j.at("box"), 2) : Model::default_elastic_box();
    if (j.contains("entropy") && entropy_from_json(j.at("entropy")).kind != EntropyKind::Canonical)
      throw UsageError("model: elastodynamics only carries the canonical entropy");
    model = Model::elastodynamics(get_or(j, "m", 1.0), box);
  } else {
    throw UsageError("model: unknown kind '" + kind + "'");
  }
  return get_or(j, "reflected", false) ? model.reflect() : model;
}

json model_to_json(const Model& m) {
  json j;
  j["kind"] = to_string(m.kind());
  if (m.kind() == ModelKind::Elastodynamics) j["m"] = m.modulus();
  j["box"] = box_to_json(m.box());
  j["entropy"] = entropy_to_json(m.entropy_spec());
  j["reflected"] = m.reflected();
  return j;
}

CertifySearchSpec search_from_json(const json& j) {
  CertifySearchSpec s;
  if (j.is_null()) return s;
  reject_unknown(j,
                 {"a_min", "a_max", "steps", "rays", "grid_points", "s_pos_points", "s_neg_points", "refine_levels",
                  "refine_factor", "refine_centers", "tolerance", "s_extent", "stability_check", "max_backoffs",
                  "backoff"},
                 "search");
  s.a_min = get_or(j, "a_min", s.a_min);
  s.a_max = get_or(j, "a_max", s.a_max);
  s.steps = get_or(j, "steps", s.steps);
  s.rays = get_or(j, "rays", s.rays);
  s.grid_points = get_or(j, "grid_points", s.grid_points);
  s.s_pos_points = get_or(j, "s_pos_points", s.s_pos_points);
  s.s_neg_points = get_or(j, "s_neg_points", s.s_neg_points);
  s.refine_levels = get_or(j, "refine_levels", s.refine_levels);
  s.refine_factor = get_or(j, "refine_factor", s.refine_factor);
  s.refine_centers = get_or(j, "refine_centers", s.refine_centers);
  s.tolerance = get_or(j, "tolerance", s.tolerance);
  s.s_extent = get_or(j, "s_extent", s.s_extent);
  s.stability_check = get_or(j, "stability_check", s.stability_check);
  s.max_backoffs = get_or(j, "max_backoffs", s.max_backoffs);
  s.backoff = get_or(j, "backoff", s.backoff);
  return s;
}

json search_to_json(const CertifySearchSpec& s) {
  return {{"a_min", s.a_min},
          {"a_max", s.a_max},
          {"steps", s.steps},
          {"rays", s.rays},
          {"grid_points", s.grid_points},
          {"s_pos_points", s.s_pos_points},
          {"s_neg_points", s.s_neg_points},
          {"refine_levels", s.refine_levels},
          {"refine_factor", s.refine_factor},
          {"refine_centers", s.refine_centers},
          {"tolerance", s.tolerance},
          {"s_extent", s.s_extent},
          {"stability_check", s.stability_check},
          {"max_backoffs", s.max_backoffs},
          {"backoff", s.backoff}};
}

ConstantsGridSpec constants_grid_from_json(const json& j) {
  ConstantsGridSpec g;
  if (j.is_null()) return g;
  reject_unknown(j, {"rays", "box_points", "pia_points", "s_points", "sigma0_points", "pair_points"}, "grid");
  g.rays = get_or(j, "rays", g.rays);
  g.box_points = get_or(j, "box_points", g.box_points);
  g.pia_points = get_or(j, "pia_points", g.pia_points);
  g.s_points = get_or(j, "s_points", g.s_points);
  g.sigma0_points = get_or(j, "sigma0_points", g.sigma0_points);
  g.pair_points = get_or(j, "pair_points", g.pair_points);
  return g;
}

json constants_grid_to_json(const ConstantsGridSpec& g) {
  return {{"rays", g.rays},         {"box_points", g.box_points},       {"pia_points", g.pia_points},
          {"s_points", g.s_points}, {"sigma0_points", g.sigma0_points}, {"pair_points", g.pair_points}};
}

json to_json(const EpsilonResult& e) {
  return {{"epsilon", num(e.epsilon)},
          {"level", num(e.level)},
          {"residual", num(e.residual)},
          {"truncated", e.truncated}};
}

json to_json(const ScanRecord& r) {
  json levels = json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"level", l.level},
                      {"max_dcont", num(l.max_dcont)},
                      {"max_drh", num(l.max_drh)},
                      {"evaluations", l.evaluations}});
  return {{"a", r.a},
          {"pass", r.pass},
          {"pia_truncated", r.pia_truncated},
          {"max_dcont", num(r.max_dcont)},
          {"argmax_dcont", state_to_json(r.argmax_dcont)},
          {"max_drh", num(r.max_drh)},
          {"argmax_drh_u", state_to_json(r.argmax_drh_u)},
          {"argmax_drh_s", num(r.argmax_drh_s)},
          {"members", r.members},
          {"drh_evaluations", r.drh_evaluations},
          {"levels", levels}};
}

json to_json(const CertificationReport& r) {
  json j;
  j["model"] = r.model;
  j["family"] = r.family;
  j["from_family_n"] = r.from_family_n;
  j["u_L"] = state_to_json(r.u_L);
  j["u_R"] = state_to_json(r.u_R);
  j["s0"] = r.s0;
  j["sigma_LR"] = num(r.sigma_LR);
  j["epsilon"] = r.epsilon ? to_json(*r.epsilon) : json(nullptr);
  j["moderate_strength_ok"] = r.moderate_strength_ok;
  j["s_extent"] = num(r.s_extent);
  j["success"] = r.success;
  j["a_star"] = r.a_star;
  j["a_star_reciprocal"] = r.a_star_reciprocal ? json(*r.a_star_reciprocal) : json(nullptr);
  j["backoffs"] = r.backoffs;
  j["failure_reason"] = r.failure_reason;
  j["final"] = r.final_record ? to_json(*r.final_record) : json(nullptr);
  j["stability"] = {{"performed", r.stability.performed},
                    {"ok", r.stability.ok},
                    {"sign_stable", r.stability.sign_stable},
                    {"rel_change_dcont", num(r.stability.rel_change_dcont)},
                    {"rel_change_drh", num(r.stability.rel_change_drh)},
                    {"coarse", to_json(r.stability.coarse)},
                    {"refined", to_json(r.stability.refined)}};
  json hist = json::array();
  for (const auto& h : r.history)
    hist.push_back({{"a", h.a}, {"pass", h.pass}, {"max_dcont", num(h.max_dcont)}, {"max_drh", num(h.max_drh)}});
  j["history"] = hist;
  j["search"] = search_to_json(r.spec);
  return j;
}

json to_json(const ConstantsReport& r) {
  return {{"c_star", num(r.c_star)},
          {"c_2star", num(r.c_2star)},
          {"C_star", num(r.C_star)},
          {"C_star_samples", r.C_star_samples},
          {"L", num(r.L)},
          {"kappa", num(r.kappa)},
          {"delta_loc", num(r.delta_loc)},
          {"sigma0", num(r.sigma0)},
          {"beta", num(r.beta)},
          {"sigma0_beta_feasible", r.sigma0_beta_feasible},
          {"Theta", num(r.Theta)},
          {"nu", num(r.nu)},
          {"C1", num(r.C1)},
          {"pia_diameter", num(r.pia_diameter)},
          {"pia_truncated", r.pia_truncated},
          {"pia_samples", r.pia_samples},
          {"grid", constants_grid_to_json(r.grid)}};
}

json to_json(const ScalarEntropyBuild& b) {
  return {{"entropy", entropy_to_json(b.spec)},
          {"canonical_sufficient", b.canonical_sufficient},
          {"slope", b.slope},
          {"s0", b.s0},
          {"epsilon", num(b.epsilon)},
          {"epsilon_truncated", b.epsilon_truncated},
          {"eta_LR", num(b.eta_LR)},
          {"eta_level", num(b.eta_level)},
          {"derivative_sign_ok", b.derivative_sign_ok},
          {"eta_LR_formula_ok", b.eta_LR_formula_ok},
          {"level_ok", b.level_ok},
          {"halvings", b.halvings}};
}

json to_json(const FieldClassificationReport& r) {
  return {{"family", r.family},
          {"expected", to_string(r.expected)},
          {"observed", to_string(r.observed)},
          {"consistent", r.consistent},
          {"samples", r.samples},
          {"positive_m_derivative", r.positive_m_derivative},
          {"negative_m_derivative", r.negative_m_derivative},
          {"manifold_estimate", num(r.manifold_estimate)},
          {"manifold_error", num(r.manifold_error)},
          {"grid_step", r.grid_step},
          {"manifold_ok", r.manifold_ok}};
}

json to_json(const CriticalParams& c) {
  return {{"s_natural", num(c.s_natural)},
          {"s_minus_natural", c.s_minus_natural ? json(*c.s_minus_natural) : json(nullptr)},
          {"orientation", c.orientation},
          {"structure", to_string(c.structure)}};
}

json summary_to_json(const SimReport& r) {
  return {{"steps", r.steps},
          {"dx", r.dx},
          {"tol_scheme", r.tol_scheme},
          {"E0", num(r.E0)},
          {"max_E_excess", num(r.max_E_excess)},
          {"max_positive_jump", num(r.max_positive_jump)},
          {"E_bounded", r.E_bounded},
          {"diss_ok_fraction", r.diss_ok_fraction},
          {"diss_adjacent_ok_fraction", r.diss_adjacent_ok_fraction},
          {"max_diss_boundary", num(r.max_diss_boundary)},
          {"front_speed", num(r.front_speed)},
          {"front_speed_rel_error", num(r.front_speed_rel_error)},
          {"h_final", num(r.final_state.h)},
          {"t_final", num(r.final_state.t)},
          {"h_drift", num(r.h_drift)},
          {"max_lipschitz_ratio", num(r.max_lipschitz_ratio)},
          {"conservation_residual", num(r.conservation_residual)},
          {"entropy_budget_excess", num(r.entropy_budget_excess)},
          {"case1_steps", r.case1_steps},
          {"case1_ok", r.case1_ok},
          {"initial_l2_sq", num(r.initial_l2_sq)},
          {"truncated", r.truncated},
          {"aborted", r.aborted},
          {"abort_reason", r.abort_reason}};
}

}  // namespace shockstab
