#include "shockstab/wave_curves.hpp"

#include <algorithm>
#include <cmath>

#include "shockstab/numerics.hpp"

namespace shockstab {

std::string to_string(AdmissibleStructure s) {
  return s == AdmissibleStructure::TwoBranch ? "two_branch" : "single_branch";
}

ShockCurve::ShockCurve(const Model& model, int family, const State& base)
    : model_(model), family_(family), base_(base) {
  model_.check_family(family);
  model_.check_state(base, "shock curve base");
  if (!all_finite(base)) throw UsageError("shock curve base must be finite");
  base_family_ = model_.reflected() ? model_.dim() + 1 - family : family;
  sigma_sign_ = model_.reflected() ? -1.0 : 1.0;

  const double d0 = speed_deriv(0.0);
  int sgn = d0 > 0.0 ? 1 : (d0 < 0.0 ? -1 : 0);
  if (sgn == 0)
    orientation_ = 1;
  else
    orientation_ = family == 1 ? -sgn : sgn;

  const FieldClass fc = model_.field_class(family);
  const bool two = family == 1 ? fc == FieldClass::ConvexConcave : fc == FieldClass::ConcaveConvex;
  structure_ = two ? AdmissibleStructure::TwoBranch : AdmissibleStructure::SingleBranch;
}

double ShockCurve::g(double s) const {
  const double w = base_[0];
  return s * s + 3.0 * w * s + 3.0 * w * w + model_.modulus();
}

State ShockCurve::state(double s) const {
  if (model_.kind() == ModelKind::ScalarCubic) return State(base_[0] + s);
  const double root = std::sqrt(g(s));
  const double dv = base_family_ == 1 ? s * root : -s * root;
  return State(base_[0] + s, base_[1] + dv);
}

double ShockCurve::speed(double s) const {
  double sigma;
  if (model_.kind() == ModelKind::ScalarCubic)
    sigma = -g(s);
  else
    sigma = base_family_ == 1 ? -std::sqrt(g(s)) : std::sqrt(g(s));
  return sigma_sign_ * sigma;
}

double ShockCurve::speed_deriv(double s) const {
  const double gp = 2.0 * s + 3.0 * base_[0];
  double d;
  if (model_.kind() == ModelKind::ScalarCubic)
    d = -gp;
  else
    d = (base_family_ == 1 ? -gp : gp) / (2.0 * std::sqrt(g(s)));
  return sigma_sign_ * d;
}

ShockPoint ShockCurve::point(double s) const { return {base_, s, state(s), speed(s), speed_deriv(s)}; }

bool ShockCurve::admissible_by_parameter(double s) const {
  const double t = oriented(s);
  if (structure_ == AdmissibleStructure::TwoBranch) return t >= 0.0 || t <= t_minus_natural();
  return t >= 0.0 && t <= t_natural();
}

double ShockCurve::distance_to_boundary(double s) const {
  const double t = oriented(s);
  const double other = structure_ == AdmissibleStructure::TwoBranch ? t_minus_natural() : t_natural();
  return std::min(std::abs(t), std::abs(t - other));
}

namespace {

struct LaxMargins {
  double left = 0.0;   // must be >= 0
  double right = 0.0;  // must be >= 0
  double tol = 0.0;
};

LaxMargins lax_margins(const ShockCurve& c, double s) {
  const double sigma = c.speed(s);
  const State S = c.state(s);
  const Model& m = c.model();
  const int k = c.family();
  LaxMargins r;
  r.tol = 1e-12 * (1.0 + std::abs(sigma));
  if (k == 1) {
    r.left = m.lambda(c.base(), k) - sigma;
    r.right = sigma - m.lambda(S, k);
  } else {
    r.left = m.lambda(S, k) - sigma;
    r.right = sigma - m.lambda(c.base(), k);
  }
  return r;
}

}  // namespace

bool ShockCurve::admissible_direct(double s) const {
  const LaxMargins r = lax_margins(*this, s);
  return r.left >= -r.tol && r.right >= -r.tol;
}

double ShockCurve::cap(int dir) const {
  const Box& box = model_.box();
  if (!box.contains(base_)) return 0.0;
  const double w = base_[0];
  const double cap_w = dir > 0 ? box.range[0].second - w : w - box.range[0].first;
  if (cap_w <= 0.0) return 0.0;
  if (box.n == 1) return cap_w;

  const auto [vlo, vhi] = box.range[1];
  auto v_at = [&](double mag) { return state(dir * mag)[1]; };
  const double v_end = v_at(cap_w);
  if (v_end >= vlo && v_end <= vhi) return cap_w;
  // The v-component is strictly monotone in s, so exactly one bound is hit.
  const double bound = v_end > vhi ? vhi : vlo;
  return bisect_root([&](double mag) { return v_at(mag) - bound; }, 0.0, cap_w, 1e-13 * (1.0 + cap_w));
}

ShockPoint shock_point(const Model& model, int family, const State& u, double s) {
  const ShockCurve c(model, family, u);
  const double slack = 1e-9;
  if (!model.box().contains(u, slack))
    throw PreconditionError("shock_point: base state " + u.str() + " lies outside the state box");
  ShockPoint p = c.point(s);
  if (!model.box().contains(p.state, slack))
    throw PreconditionError("shock_point: parameter s = " + std::to_string(s) + " leaves the state box");
  return p;
}

CriticalParams critical_params(const Model& model, int family, const State& u) {
  const ShockCurve c(model, family, u);
  if (c.degenerate())
    throw PreconditionError("critical_params: base state " + u.str() + " lies on the degenerate manifold");

  CriticalParams cp;
  cp.orientation = c.orientation();
  cp.structure = c.structure();
  cp.s_natural = c.s_natural();
  const double scale = 1.0 + std::abs(u[0]);

  const double half = 1.0 + std::abs(u[0]);
  const double sn = bisect_root([&](double s) { return c.speed_deriv(s); }, cp.s_natural - half,
                                cp.s_natural + half, 1e-12);
  if (std::abs(sn - cp.s_natural) > 1e-9 * scale)
    throw NumericalError("critical_params: closed-form s_natural disagrees with root finding");

  if (cp.structure == AdmissibleStructure::TwoBranch) {
    const double smn = c.s_minus_natural();
    const double d = smn - cp.s_natural;
    const double a = cp.s_natural + 0.5 * d, b = cp.s_natural + 2.0 * d;
    const double lam = c.speed(0.0);
    const double root = bisect_root([&](double s) { return c.speed(s) - lam; }, std::min(a, b), std::max(a, b),
                                    1e-12);
    if (std::abs(root - smn) > 1e-9 * scale)
      throw NumericalError("critical_params: closed-form s_minus_natural disagrees with root finding");
    cp.s_minus_natural = smn;
  }
  return cp;
}

bool lax_admissible(const Model& model, int family, const State& u, double s) {
  const ShockCurve c(model, family, u);
  const LaxMargins r = lax_margins(c, s);
  const bool direct = r.left >= -r.tol && r.right >= -r.tol;
  const bool decided = (r.left > r.tol && r.right > r.tol) || r.left < -r.tol || r.right < -r.tol;
  if (decided && c.distance_to_boundary(s) > 1e-10) {
    if (direct != c.admissible_by_parameter(s))
      throw NumericalError("lax_admissible: direct Lax check and parameter characterization disagree at u = " +
                           u.str() + ", s = " + std::to_string(s));
  }
  return direct;
}

}  // namespace shockstab
