#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shockstab/dissipation.hpp"

namespace shockstab {

struct EpsilonResult {
  double epsilon = 0.0;   // oriented parameter
  double level = 0.0;     // eta(u_L | S(s_minus_natural))
  double residual = 0.0;  // eta(u_L | S(epsilon)) - level
  bool truncated = false; // level not reached before the box cap
};

/// Solves eta(u_L|S(eps)) = eta(u_L|S(s_minus_natural)) for eps > 0 by
/// bisection (tolerance 1e-12 in eps). Family n routes through the reflected
/// model. Only defined for two-branch families.
EpsilonResult compute_epsilon(const Model& model, int family, const State& u_L);
EpsilonResult compute_epsilon(const Model& model, int family, const State& u_L, const EntropySpec& entropy);
EpsilonResult compute_epsilon_on_curve(const ShockCurve& curve);

struct CertifySearchSpec {
  double a_min = 1e-8;
  double a_max = 1.0 - 1e-8;
  int steps = 30;
  int rays = 256;
  int grid_points = 0;       // per axis over the Pi_a bounding box; 0 picks 65 (2-D) / 401 (1-D)
  int s_pos_points = 256;
  int s_neg_points = 128;
  int refine_levels = 3;
  int refine_factor = 4;
  int refine_centers = 32;
  double tolerance = 1e-12;
  double s_extent = 0.0;     // positive-branch cap; 0 picks min(2 eps, box cap)
  bool stability_check = true;
  int max_backoffs = 20;
  double backoff = 0.9;

  int resolved_grid_points(int dim) const { return grid_points > 0 ? grid_points : (dim == 2 ? 65 : 401); }
  CertifySearchSpec refined() const;
};

struct RefinementLevel {
  int level = 0;
  double max_dcont = 0.0;
  double max_drh = 0.0;
  long evaluations = 0;
};

struct ScanRecord {
  double a = 0.0;
  bool pass = false;
  bool pia_truncated = false;
  double max_dcont = 0.0;
  State argmax_dcont;
  double max_drh = 0.0;
  State argmax_drh_u;
  double argmax_drh_s = 0.0;  // raw parameter
  long members = 0;
  long drh_evaluations = 0;
  std::vector<RefinementLevel> levels;
};

/// Scans D_cont over Pi_a samples and D_RH over Pi_a x admissible s-grid at
/// one weight, with local refinement around the largest values.
ScanRecord scan_weight(const ShockSetup& st, const CertifySearchSpec& spec, double s_extent);

struct StabilityCheck {
  bool performed = false;
  ScanRecord coarse;
  ScanRecord refined;
  bool sign_stable = false;
  double rel_change_dcont = 0.0;
  double rel_change_drh = 0.0;
  bool ok = false;
};

struct CertificationReport {
  std::string model;
  int family = 1;
  bool from_family_n = false;
  State u_L, u_R;
  double s0 = 0.0;
  double sigma_LR = 0.0;
  std::optional<EpsilonResult> epsilon;
  bool moderate_strength_ok = false;
  double s_extent = 0.0;
  bool success = false;
  double a_star = 0.0;
  std::optional<double> a_star_reciprocal;  // weight for the original n-shock
  int backoffs = 0;
  std::vector<ScanRecord> history;
  std::optional<ScanRecord> final_record;
  StabilityCheck stability;
  CertifySearchSpec spec;
  std::string failure_reason;
};

/// Log-scale bisection for the largest weight a at which both sampled maxima
/// are <= tolerance, followed by a refinement-stability check (with back-off
/// a -> 0.9 a when the refined grid changes the picture).
CertificationReport certify_weight(const Model& model, int family, const State& u_L, double s0,
                                   const CertifySearchSpec& spec);

struct ScalarEntropyBuild {
  EntropySpec spec;
  bool canonical_sufficient = false;
  double slope = 1.0;
  double s0 = 0.0;
  double epsilon = 0.0;
  bool epsilon_truncated = false;  // epsilon is the box cap, a lower bound
  double eta_LR = 0.0;        // eta(u_L|u_R)
  double eta_level = 0.0;     // eta(u_L|S(s_minus_natural))
  bool derivative_sign_ok = false;
  bool eta_LR_formula_ok = false;
  bool level_ok = false;
  int halvings = 0;
};

/// Custom scalar entropy making the shock (u_L, u_R) satisfy s0 < eps.
/// Requires 0 < u_L < u_R.
ScalarEntropyBuild build_scalar_entropy(double u_L, double u_R, const Box& box = Model::default_scalar_box());

enum class RegionClass { NotAdmissible, AdmissibleNotCovered, CoveredStable };
enum class EntropyPolicy { Fixed, Adaptive };

std::string to_string(RegionClass c);

struct RegionGridSpec {
  std::vector<std::pair<double, double>> ranges;  // one per component
  std::vector<int> points;
};

struct RegionCell {
  State u;
  RegionClass cls = RegionClass::NotAdmissible;
  double s_param = 0.0;  // raw parameter (NaN off the curve)
  std::string reason;
  bool off_curve = false;
};

struct RegionMap {
  std::vector<RegionCell> cells;
  std::optional<double> epsilon;
  int family = 1;
  bool cross_checked = false;  // family-n map matched the reflected family-1 map
};

RegionMap region_map(const Model& model, int family, const State& u_base, const RegionGridSpec& grid,
                     EntropyPolicy policy);

/// Region map computed through reflect(model), family 1, on the same grid.
RegionMap region_map_reflected(const Model& model, int family, const State& u_base, const RegionGridSpec& grid,
                               EntropyPolicy policy);

}  // namespace shockstab
