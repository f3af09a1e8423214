#include "shockstab/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "shockstab/config_io.hpp"
#include "shockstab/numerics.hpp"

namespace shockstab {

namespace {

class CertificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> component_names(int dim) {
  return dim == 1 ? std::vector<std::string>{"u"} : std::vector<std::string>{"w", "v"};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("write to '" + path + "' failed");
}

void write_json(const std::string& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

json read_config(const RunConfig& rc) {
  if (rc.input.empty()) return json::object();
  std::ifstream f(rc.input);
  if (!f) throw UsageError("cannot read config '" + rc.input + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  json j = json::parse(ss.str());  // throws json::parse_error
  if (!j.is_object()) throw UsageError("config: top level must be a JSON object");
  return j;
}

json run_info(const RunConfig& rc) {
  return {{"command", rc.command}, {"threads", rc.threads}, {"seed", rc.seed}};
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw UsageError(std::string("config: missing field '") + key + "'");
  return j.at(key);
}

Model config_model(const json& j) { return model_from_json(require(j, "model")); }

// ---------------------------------------------------------------- commands

json cmd_models(const json& cfg, json& resolved) {
  reject_unknown(cfg, {"models"}, "models");
  std::vector<Model> models;
  if (cfg.contains("models")) {
    for (const json& d : cfg.at("models")) models.push_back(model_from_json(d));
  } else {
    models = {Model::scalar_cubic(), Model::elastodynamics(1.0)};
  }
  json list = json::array(), descs = json::array();
  for (const Model& m : models) {
    descs.push_back(model_to_json(m));
    json fams = json::array();
    for (int k = 1; k <= m.dim(); ++k) {
      const bool two = (k == 1 && m.field_class(k) == FieldClass::ConvexConcave) ||
                       (k == m.dim() && k > 1 && m.field_class(k) == FieldClass::ConcaveConvex);
      fams.push_back({{"family", k},
                      {"field_class", to_string(m.field_class(k))},
                      {"admissible_structure", to_string(two ? AdmissibleStructure::TwoBranch
                                                             : AdmissibleStructure::SingleBranch)}});
    }
    list.push_back({{"name", m.name()}, {"dim", m.dim()}, {"descriptor", model_to_json(m)}, {"families", fams}});
  }
  resolved["models"] = descs;
  return {{"models", list}};
}

std::string cmd_curve(const json& cfg, json& resolved) {
  reject_unknown(cfg, {"model", "family", "base", "s_min", "s_max", "points"}, "curve");
  const Model m = config_model(cfg);
  const int family = get_or(cfg, "family", 1);
  m.check_family(family);
  const State base = state_from_json(require(cfg, "base"), m.dim(), "base");
  const double s_min = require(cfg, "s_min").get<double>(), s_max = require(cfg, "s_max").get<double>();
  const int points = get_or(cfg, "points", 201);
  if (!(s_min < s_max) || points < 2) throw UsageError("curve: need s_min < s_max and points >= 2");
  resolved.update({{"model", model_to_json(m)},
                   {"family", family},
                   {"base", state_to_json(base)},
                   {"s_min", s_min},
                   {"s_max", s_max},
                   {"points", points}});

  std::ostringstream os;
  os << "s";
  for (const auto& n : component_names(m.dim())) os << "," << n;
  os << ",sigma,sigma_prime,lax_admissible\n";
  for (double s : linspace(s_min, s_max, points)) {
    const ShockPoint p = shock_point(m, family, base, s);
    os << fmt(s);
    for (int i = 0; i < m.dim(); ++i) os << "," << fmt(p.state[i]);
    os << "," << fmt(p.speed) << "," << fmt(p.speed_deriv) << ","
       << (lax_admissible(m, family, base, s) ? 1 : 0) << "\n";
  }
  return os.str();
}

json cmd_classify(const json& cfg, json& resolved) {
  reject_unknown(cfg, {"model", "samples", "base"}, "classify");
  const Model m = config_model(cfg);
  const int samples = get_or(cfg, "samples", 101);
  resolved.update({{"model", model_to_json(m)}, {"samples", samples}});
  json fams = json::array();
  for (int k = 1; k <= m.dim(); ++k) {
    json f = to_json(field_classification(m, k, samples));
    if (cfg.contains("base")) {
      const State base = state_from_json(cfg.at("base"), m.dim(), "base");
      resolved["base"] = state_to_json(base);
      f["critical"] = to_json(critical_params(m, k, base));
    }
    fams.push_back(f);
  }
  bool all_ok = true;
  for (const auto& f : fams) all_ok = all_ok && f["consistent"].get<bool>() && f["manifold_ok"].get<bool>();
  return {{"model", m.name()}, {"families", fams}, {"consistent", all_ok}};
}

struct SetupFields {
  Model model = Model::scalar_cubic();
  int family = 1;
  State u_L;
  double s0 = 0.0;
};

SetupFields setup_fields(const json& cfg, json& resolved) {
  SetupFields f;
  f.model = config_model(cfg);
  f.family = get_or(cfg, "family", 1);
  f.model.check_family(f.family);
  f.u_L = state_from_json(require(cfg, "u_L"), f.model.dim(), "u_L");
  f.s0 = require(cfg, "s0").get<double>();
  resolved.update({{"model", model_to_json(f.model)},
                   {"family", f.family},
                   {"u_L", state_to_json(f.u_L)},
                   {"s0", f.s0}});
  return f;
}

json cmd_constants(const json& cfg, json& resolved) {
  reject_unknown(cfg, {"model", "family", "u_L", "s0", "a", "grid"}, "constants");
  const SetupFields f = setup_fields(cfg, resolved);
  const double a = require(cfg, "a").get<double>();
  const ConstantsGridSpec grid = constants_grid_from_json(cfg.contains("grid") ? cfg.at("grid") : json());
  resolved.update({{"a", a}, {"grid", constants_grid_to_json(grid)}});
  const ShockSetup st = ShockSetup::make(f.model, f.family, f.u_L, f.s0, a);
  json r = to_json(estimate_constants(st, grid));
  r["u_R"] = state_to_json(st.u_R);
  r["sigma_LR"] = st.sigma_LR;
  return r;
}

json cmd_certify(const json& cfg, json& resolved, bool& failed) {
  reject_unknown(cfg, {"model", "family", "u_L", "s0", "search"}, "certify");
  const SetupFields f = setup_fields(cfg, resolved);
  const CertifySearchSpec spec = search_from_json(cfg.contains("search") ? cfg.at("search") : json());
  resolved["search"] = search_to_json(spec);
  const CertificationReport rep = certify_weight(f.model, f.family, f.u_L, f.s0, spec);
  failed = !rep.success;
  return to_json(rep);
}

json cmd_entropy_build(const json& cfg, json& resolved) {
  reject_unknown(cfg, {"u_L", "u_R", "box"}, "entropy-build");
  const double uL = require(cfg, "u_L").get<double>(), uR = require(cfg, "u_R").get<double>();
  const Box box = cfg.contains("box") ? box_from_json(cfg.at("box"), 1) : Model::default_scalar_box();
  resolved.update({{"u_L", uL}, {"u_R", uR}, {"box", box_to_json(box)}});
  return to_json(build_scalar_entropy(uL, uR, box));
}

std::string cmd_region_map(const json& cfg, json& resolved, json& extra) {
  reject_unknown(cfg, {"model", "family", "base", "ranges", "points", "policy"}, "region-map");
  const Model m = config_model(cfg);
  const int family = get_or(cfg, "family", 1);
  m.check_family(family);
  const State base = state_from_json(require(cfg, "base"), m.dim(), "base");
  RegionGridSpec grid;
  for (const json& r : require(cfg, "ranges")) {
    if (!r.is_array() || r.size() != 2) throw UsageError("region-map: each range must be [lo, hi]");
    grid.ranges.emplace_back(r[0].get<double>(), r[1].get<double>());
  }
  grid.points = require(cfg, "points").get<std::vector<int>>();
  const std::string pol = get_or<std::string>(cfg, "policy", "fixed");
  if (pol != "fixed" && pol != "adaptive") throw UsageError("region-map: policy must be 'fixed' or 'adaptive'");
  const EntropyPolicy policy = pol == "fixed" ? EntropyPolicy::Fixed : EntropyPolicy::Adaptive;
  resolved.update({{"model", model_to_json(m)},
                   {"family", family},
                   {"base", state_to_json(base)},
                   {"ranges", cfg.at("ranges")},
                   {"points", grid.points},
                   {"policy", pol}});

  const RegionMap map = region_map(m, family, base, grid, policy);
  extra = {{"epsilon", map.epsilon ? json(*map.epsilon) : json(nullptr)},
           {"cells", map.cells.size()},
           {"cross_checked", map.cross_checked}};
  std::ostringstream os;
  for (const auto& n : component_names(m.dim())) os << n << ",";
  os << "class,s_param,covered_reason\n";
  for (const RegionCell& c : map.cells) {
    for (int i = 0; i < m.dim(); ++i) os << fmt(c.u[i]) << ",";
    os << to_string(c.cls) << "," << (std::isfinite(c.s_param) ? fmt(c.s_param) : std::string("nan")) << ","
       << c.reason << "\n";
  }
  return os.str();
}

struct SimOutputs {
  std::string series;
  std::string snapshots;
  json summary;
  bool aborted = false;
};

SimOutputs cmd_simulate(const json& cfg, json& resolved) {
  reject_unknown(cfg,
                 {"model", "family", "u_L", "s0", "a", "cells", "cfl", "t_end", "x_min", "x_max", "perturbation",
                  "snapshot_every", "C_star", "L", "c_scheme", "constants_grid"},
                 "simulate");
  const SetupFields f = setup_fields(cfg, resolved);
  const double a = require(cfg, "a").get<double>();
  SimConfig sc;
  sc.setup = ShockSetup::make(f.model, f.family, f.u_L, f.s0, a);
  sc.cells = get_or(cfg, "cells", sc.cells);
  sc.cfl = get_or(cfg, "cfl", sc.cfl);
  sc.t_end = get_or(cfg, "t_end", sc.t_end);
  sc.x_min = get_or(cfg, "x_min", sc.x_min);
  sc.x_max = get_or(cfg, "x_max", sc.x_max);
  sc.snapshot_every = get_or(cfg, "snapshot_every", sc.snapshot_every);
  sc.c_scheme = get_or(cfg, "c_scheme", sc.c_scheme);
  if (cfg.contains("perturbation")) {
    const json& p = cfg.at("perturbation");
    reject_unknown(p, {"amplitude", "center", "width"}, "perturbation");
    sc.perturbation.amplitude = get_or(p, "amplitude", sc.perturbation.amplitude);
    sc.perturbation.center = get_or(p, "center", sc.perturbation.center);
    sc.perturbation.width = get_or(p, "width", sc.perturbation.width);
  }
  if (cfg.contains("C_star") != cfg.contains("L"))
    throw UsageError("simulate: give both C_star and L, or neither");
  if (cfg.contains("C_star")) {
    sc.C_star = cfg.at("C_star").get<double>();
    sc.L = cfg.at("L").get<double>();
  } else {
    const ConstantsGridSpec g =
        constants_grid_from_json(cfg.contains("constants_grid") ? cfg.at("constants_grid") : json());
    const ConstantsReport cr = estimate_constants(sc.setup, g);
    sc.C_star = cr.C_star;
    sc.L = cr.L;
    resolved["constants_grid"] = constants_grid_to_json(g);
  }
  resolved.update({{"a", a},
                   {"cells", sc.cells},
                   {"cfl", sc.cfl},
                   {"t_end", sc.t_end},
                   {"x_min", sc.x_min},
                   {"x_max", sc.x_max},
                   {"perturbation",
                    {{"amplitude", sc.perturbation.amplitude},
                     {"center", sc.perturbation.center},
                     {"width", sc.perturbation.width}}},
                   {"snapshot_every", sc.snapshot_every},
                   {"C_star", sc.C_star},
                   {"L", sc.L},
                   {"c_scheme", sc.c_scheme}});

  const SimReport rep = run(sc);
  SimOutputs out;
  out.aborted = rep.aborted;
  out.summary = summary_to_json(rep);
  std::ostringstream os;
  os << "t,E,dE,h,hdot,diss_boundary\n";
  for (const StepRecord& r : rep.series)
    os << fmt(r.t) << "," << fmt(r.E) << "," << fmt(r.dE) << "," << fmt(r.h) << "," << fmt(r.hdot) << ","
       << fmt(r.diss_boundary) << "\n";
  out.series = os.str();
  if (!rep.snapshots.empty()) {
    std::ostringstream ss;
    ss << "step,t,x";
    for (const auto& n : component_names(sc.setup.model.dim())) ss << "," << n;
    ss << "\n";
    for (const Snapshot& snap : rep.snapshots)
      for (std::size_t i = 0; i < snap.u.size(); ++i) {
        ss << snap.step << "," << fmt(snap.t) << "," << fmt(sc.x_min + (static_cast<double>(i) + 0.5) * sc.dx());
        for (int k = 0; k < snap.u[i].dim(); ++k) ss << "," << fmt(snap.u[i][k]);
        ss << "\n";
      }
    out.snapshots = ss.str();
  }
  return out;
}

int run_command(const RunConfig& rc) {
  const json cfg = read_config(rc);
  if (rc.command != "models" && rc.input.empty()) throw UsageError(rc.command + ": --config is required");
  const std::string prefix = rc.output.empty() ? rc.command : rc.output;
  if (!rc.input.empty()) {
    std::error_code ec;
    for (const char* ext : {".json", ".csv", ".meta.json", ".snapshots.csv"})
      if (std::filesystem::equivalent(rc.input, prefix + ext, ec))
        throw UsageError("output " + prefix + ext + " would overwrite the config file");
  }
  json resolved = json::object();
  json report;
  auto finish = [&](json body) {
    json r = json::object();
    r["run"] = run_info(rc);
    r["config"] = resolved;
    r["report"] = std::move(body);
    return r;
  };
  auto write_meta = [&](json extra) {
    json meta = {{"run", run_info(rc)}, {"config", resolved}};
    if (!extra.is_null()) meta["summary"] = std::move(extra);
    write_json(prefix + ".meta.json", meta);
  };

  const std::string& c = rc.command;
  if (c == "models") {
    write_json(prefix + ".json", finish(cmd_models(cfg, resolved)));
  } else if (c == "curve") {
    const std::string csv = cmd_curve(cfg, resolved);
    write_file(prefix + ".csv", csv);
    write_meta(json());
  } else if (c == "classify") {
    write_json(prefix + ".json", finish(cmd_classify(cfg, resolved)));
  } else if (c == "constants") {
    write_json(prefix + ".json", finish(cmd_constants(cfg, resolved)));
  } else if (c == "certify") {
    bool failed = false;
    json body = cmd_certify(cfg, resolved, failed);
    write_json(prefix + ".json", finish(body));
    if (failed) throw CertificationFailed("certification failed: " + body["failure_reason"].get<std::string>());
  } else if (c == "entropy-build") {
    write_json(prefix + ".json", finish(cmd_entropy_build(cfg, resolved)));
  } else if (c == "region-map") {
    json extra;
    const std::string csv = cmd_region_map(cfg, resolved, extra);
    write_file(prefix + ".csv", csv);
    write_meta(extra);
  } else if (c == "simulate") {
    const SimOutputs out = cmd_simulate(cfg, resolved);
    write_file(prefix + ".csv", out.series);
    if (!out.snapshots.empty()) write_file(prefix + ".snapshots.csv", out.snapshots);
    write_json(prefix + ".json", finish(out.summary));
    write_meta(json());
    if (out.aborted) throw NumericalError("simulation aborted: " + out.summary["abort_reason"].get<std::string>());
  } else {
    throw UsageError("unknown command '" + c + "'");
  }
  return kExitOk;
}

int report_error(std::ostream& err, const char* kind, const std::string& msg, int code) {
  err << json{{"error", kind}, {"message", msg}, {"exit_code", code}}.dump() << "\n";
  return code;
}

}  // namespace

const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> cmds = {"models",       "curve",         "classify",   "constants",
                                                "certify",      "entropy-build", "region-map", "simulate"};
  return cmds;
}

int dispatch(const RunConfig& config, std::ostream& err) {
  const unsigned previous = default_threads();
  set_default_threads(config.threads == 0 ? 1 : config.threads);
  int code = kExitOk;
  try {
    code = run_command(config);
  } catch (const CertificationFailed& e) {
    code = report_error(err, "certification_failed", e.what(), kExitCertificationFailed);
  } catch (const json::exception& e) {
    code = report_error(err, "invalid_json", e.what(), kExitUsage);
  } catch (const UsageError& e) {
    code = report_error(err, "usage", e.what(), kExitUsage);
  } catch (const PreconditionError& e) {
    code = report_error(err, "precondition", e.what(), kExitUsage);
  } catch (const IoError& e) {
    code = report_error(err, "io", e.what(), kExitUsage);
  } catch (const NumericalError& e) {
    code = report_error(err, "numerical", e.what(), kExitNumerical);
  } catch (const std::exception& e) {
    code = report_error(err, "numerical", e.what(), kExitNumerical);
  }
  set_default_threads(previous);
  return code;
}

}  // namespace shockstab
