#pragma once

#include <vector>

#include "shockstab/model.hpp"
#include "shockstab/wave_curves.hpp"

namespace shockstab {

/// Fixed reference shock u_R = S_{u_L}(s0) with weight a.
///
/// `s0` is an oriented parameter (> 0, positive branch). A family-n setup is
/// stored as the family-1 setup of the reflected model; `from_family_n`
/// records this so reports can quote the weight 1/a that applies to the
/// original n-shock.
struct ShockSetup {
  Model model = Model::scalar_cubic();
  int family = 1;
  bool from_family_n = false;
  State u_L;
  double s0 = 0.0;
  State u_R;
  double sigma_LR = 0.0;
  double a = 0.0;

  static ShockSetup make(const Model& model, int family, const State& u_L, double s0, double a);
  ShockSetup with_weight(double a_new) const;
  ShockCurve curve_at(const State& u) const { return ShockCurve(model, 1, u); }
  double lambda1(const State& u) const { return model.lambda(u, 1); }
};

/// a(q(u;u_R) - lambda_1(u) eta(u|u_R)) - (q(u;u_L) - lambda_1(u) eta(u|u_L)).
double d_cont(const ShockSetup& st, const State& u);

/// D_RH(u_-, S_{u_-}(s)) for a raw parameter s. Throws PreconditionError when
/// (u_-, s) is not Lax admissible.
double d_rh(const ShockSetup& st, const State& u_minus, double s);
/// Same without the admissibility check (hot loops that build admissible grids).
double d_rh_unchecked(const ShockSetup& st, const State& u_minus, double s);
/// Same for a curve already built at u_minus.
double d_rh_on_curve(const ShockSetup& st, const ShockCurve& curve, double s);

/// eta(u|u_L) - a eta(u|u_R); Pi_a is where this is <= 0.
double pia_function(const ShockSetup& st, const State& u);
bool pia_contains(const ShockSetup& st, const State& u);

struct PiaBoundarySample {
  State point;      // last point inside Pi_a along the ray
  double radius = 0.0;
  bool truncated = false;  // no sign change before the box boundary
};

/// Boundary of Pi_a along `directions` rays from u_L (bisection to 1e-12).
std::vector<PiaBoundarySample> pia_boundary(const ShockSetup& st, const std::vector<State>& directions);
/// 256 equally spaced unit directions in 2-D, {-1, +1} in 1-D (or `rays` in 2-D).
std::vector<State> default_directions(int dim, int rays = 256);
double pia_diameter(const ShockSetup& st, int rays = 256);
/// Bounding box of the boundary samples (clipped to the model box).
Box pia_bounding_box(const std::vector<PiaBoundarySample>& boundary, const Box& model_box, double pad);

struct IdentityValue {
  double lhs = 0.0;
  double rhs = 0.0;
  double quad_error = 0.0;
};

/// Entropy lost along the shock curve of u_minus (family 1 of `model`):
///   lhs = q(u+;v) - sigma eta(u+|v) - q(u-;v) + sigma eta(u-|v)
///   rhs = int_0^s sigma'(t) eta(u-|S(t)) dt   (adaptive quadrature)
IdentityValue dissipation_integral(const Model& model, const State& v, const State& u_minus, double s);

struct CurveDissipation {
  double direct = 0.0;
  double via_identity = 0.0;
};

/// q(S(s); S(s0)) - sigma(s) eta(S(s)|S(s0)) along the curve of u, with s0
/// taken in the orientation of u. Both routes are computed; throws
/// NumericalError when they differ by more than 1e-8 (relative to
/// max(1, |direct|)). Throws PreconditionError for inadmissible s.
CurveDissipation curve_dissipation(const ShockSetup& st, const State& u, double s);

struct ConstantsGridSpec {
  int rays = 256;
  int box_points = 41;        // per axis over the model box
  int pia_points = 33;        // per axis over the Pi_a bounding box
  int s_points = 96;          // per branch for kappa / delta fits
  int sigma0_points = 200;
  int pair_points = 15;       // per axis for c_star / c_2star
};

struct ConstantsReport {
  double c_star = 0.0, c_2star = 0.0;
  double C_star = 0.0;
  long C_star_samples = 0;
  double L = 0.0;
  double kappa = 0.0, delta_loc = 0.0;
  double sigma0 = 0.0, beta = 0.0;
  bool sigma0_beta_feasible = false;
  double Theta = 0.0;
  double nu = 0.0;
  double C1 = 0.0;
  double pia_diameter = 0.0;
  bool pia_truncated = false;
  long pia_samples = 0;
  ConstantsGridSpec grid;
};

/// Sampled estimates of the constants used in the stability argument.
ConstantsReport estimate_constants(const ShockSetup& st, const ConstantsGridSpec& grid);

/// Samples of Pi_a: u_L, the boundary samples and the members of a regular
/// grid over the bounding box.
std::vector<State> pia_samples(const ShockSetup& st, int rays, int points_per_axis, bool* truncated = nullptr);

/// s0* is the unique oriented parameter below t_minus_natural(u_L) with
/// sigma = sigma_LR (closed form: 2 t_natural - s0).
double s0_star(const ShockSetup& st);

}  // namespace shockstab
