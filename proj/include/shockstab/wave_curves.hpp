#pragma once

#include <optional>

#include "shockstab/model.hpp"

namespace shockstab {

struct ShockPoint {
  State base;
  double s = 0.0;  // raw parameter (offset of the first component)
  State state;
  double speed = 0.0;
  double speed_deriv = 0.0;
};

/// Shape of the Lax-admissible parameter set, in oriented coordinates t.
///   TwoBranch:    t >= 0 or t <= t_minus_natural  (convex-concave 1-field,
///                 concave-convex n-field)
///   SingleBranch: 0 <= t <= t_natural_end         (the opposite classes)
enum class AdmissibleStructure { TwoBranch, SingleBranch };

struct CriticalParams {
  double s_natural = 0.0;                    // raw; sign change of sigma'
  std::optional<double> s_minus_natural;     // raw; re-entry of admissibility (TwoBranch only)
  int orientation = 1;
  AdmissibleStructure structure = AdmissibleStructure::TwoBranch;
};

/// Hugoniot curve of one characteristic family through a base state.
///
/// Every curve of the two models has the closed form
///   g(s) = s^2 + 3 w s + 3 w^2 + m          (m = 0 for the scalar law)
///   scalar:   S = u + s,                 sigma = -g
///   elastic1: S = (w + s, v + s sqrt(g)), sigma = -sqrt(g)
///   elastic2: S = (w + s, v - s sqrt(g)), sigma = +sqrt(g)
/// (reflection swaps families and negates sigma). The divided difference of
/// the flux is expanded exactly, so s = 0 is not a special case.
///
/// Raw parameters s are offsets of the first component. The oriented
/// parameter t = orientation * s is chosen so that t > 0 is the branch on
/// which sigma moves away from the characteristic speed of the base; with it
/// the admissible set always has the shape described by AdmissibleStructure.
class ShockCurve {
 public:
  ShockCurve(const Model& model, int family, const State& base);

  const Model& model() const { return model_; }
  int family() const { return family_; }
  const State& base() const { return base_; }

  State state(double s) const;
  double speed(double s) const;
  double speed_deriv(double s) const;
  ShockPoint point(double s) const;

  int orientation() const { return orientation_; }
  double raw(double t) const { return orientation_ * t; }
  double oriented(double s) const { return orientation_ * s; }
  AdmissibleStructure structure() const { return structure_; }
  /// Base lies on the degenerate manifold (w = 0, resp. u = 0).
  bool degenerate() const { return base_[0] == 0.0; }

  /// Raw critical parameters from the closed form: s_natural = -3w/2 and
  /// s_minus_natural = -3w.
  double s_natural() const { return -1.5 * base_[0]; }
  double s_minus_natural() const { return -3.0 * base_[0]; }

  /// Oriented bounds of the admissible set: t_minus_natural (TwoBranch) or
  /// the upper end t_natural (SingleBranch).
  double t_minus_natural() const { return -3.0 * std::abs(base_[0]); }
  double t_natural() const { return oriented(s_natural()); }

  /// Parameter characterization of the Lax condition.
  bool admissible_by_parameter(double s) const;
  /// Direct check of the Lax inequalities at S(s).
  bool admissible_direct(double s) const;
  /// Distance (in s) from s to the nearest boundary of the admissible set.
  double distance_to_boundary(double s) const;

  /// Largest |s| >= 0 such that S(s) stays in the model box when moving in
  /// raw direction `dir` (+1 or -1).
  double cap(int dir) const;

 private:
  double g(double s) const;

  Model model_;
  int family_;
  int base_family_;
  double sigma_sign_;
  State base_;
  int orientation_ = 1;
  AdmissibleStructure structure_ = AdmissibleStructure::TwoBranch;
};

/// Closed-form shock point. Throws PreconditionError if the base or S(s)
/// lies outside the model box.
ShockPoint shock_point(const Model& model, int family, const State& u, double s);

/// Closed form cross-validated against bisection (tolerance 1e-12) on
/// sigma' = 0 and sigma = lambda(u). Throws PreconditionError on the degenerate
/// manifold and NumericalError if the two routes disagree.
CriticalParams critical_params(const Model& model, int family, const State& u);

/// Direct Lax check, asserted against the parameter characterization away
/// from the boundary of the admissible set (1e-10 in s). Throws
/// NumericalError on disagreement.
bool lax_admissible(const Model& model, int family, const State& u, double s);

std::string to_string(AdmissibleStructure s);

}  // namespace shockstab
