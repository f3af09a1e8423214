#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>

#include "shockstab/polynomial.hpp"
#include "shockstab/state.hpp"

namespace shockstab {

/// Axis-aligned compact box standing in for the state space.
struct Box {
  int n = 1;
  std::array<std::pair<double, double>, State::kMaxDim> range{};

  static Box interval(double lo, double hi);
  static Box rect(double w_lo, double w_hi, double v_lo, double v_hi);

  bool contains(const State& u, double slack = 0.0) const;
  State lower() const;
  State upper() const;
  State center() const;
  double diameter() const;
};

enum class EntropyKind { Canonical, PiecewiseScalar };

/// Which strictly convex entropy the model carries. PiecewiseScalar is the
/// scalar entropy whose second derivative is 1 on x <= 0, decreases affinely
/// to `slope` on [0, anchor] and equals `slope` for x >= anchor.
struct EntropySpec {
  EntropyKind kind = EntropyKind::Canonical;
  double slope = 1.0;
  double anchor = 1.0;

  static EntropySpec canonical() { return {}; }
  static EntropySpec piecewise(double slope, double anchor);
};

enum class ModelKind { ScalarCubic, Elastodynamics };

enum class FieldClass { ConcaveConvex, ConvexConcave };

std::string to_string(ModelKind k);
std::string to_string(FieldClass c);

struct Eigenpair {
  double lambda = 0.0;
  State r;
};

struct EntropyPair {
  double eta = 0.0;
  double q = 0.0;
};

/// Exact tables for the piecewise scalar entropy: eta'' is piecewise affine,
/// so eta, eta' and the flux q (with q' = eta' f') are piecewise polynomials.
struct ScalarEntropyTables {
  PiecewisePolynomial d2eta;
  PiecewisePolynomial deta;
  PiecewisePolynomial eta;
  PiecewisePolynomial q;  // flux for f(u) = -u^3 (unreflected orientation)
};

/// One concrete hyperbolic system together with its entropy pair.
///
/// Models are immutable values. `reflect()` negates the flux (the system for
/// u(t, -x)); reflecting twice gives back the original model exactly. The
/// scalar model is u_t + (-u^3)_x = 0; the elastodynamics model is the
/// p-system w_t - v_x = 0, v_t + p(w)_x = 0 with p(w) = -w^3 - m w.
class Model {
 public:
  static Model scalar_cubic(Box box = default_scalar_box(), EntropySpec entropy = EntropySpec::canonical());
  static Model elastodynamics(double m, Box box = default_elastic_box());

  static Box default_scalar_box() { return Box::interval(-6.0, 6.0); }
  static Box default_elastic_box() { return Box::rect(-5.0, 5.0, -10.0, 10.0); }

  ModelKind kind() const { return kind_; }
  bool reflected() const { return reflected_; }
  int dim() const { return kind_ == ModelKind::ScalarCubic ? 1 : 2; }
  double modulus() const { return m_; }
  const Box& box() const { return box_; }
  const EntropySpec& entropy_spec() const { return entropy_; }
  std::string name() const;

  Model reflect() const;
  Model with_entropy(EntropySpec spec) const;
  Model with_box(Box box) const;

  State flux(const State& u) const;
  double entropy(const State& u) const;
  State entropy_gradient(const State& u) const;
  double entropy_flux(const State& u) const;
  EntropyPair entropy_pair(const State& u) const { return {entropy(u), entropy_flux(u)}; }
  /// Hessian of the entropy (diagonal for both models).
  std::array<double, 2> entropy_hessian_diag(const State& u) const;

  /// eta(u|v) = eta(u) - eta(v) - eta'(v)(u - v).
  double rel_entropy(const State& u, const State& v) const;
  /// q(u;v) = q(u) - q(v) - eta'(v)(f(u) - f(v)).
  double rel_entropy_flux(const State& u, const State& v) const;

  /// Eigenvalue and right eigenvector of f'(u) for family 1..n.
  Eigenpair eig(const State& u, int family) const;
  double lambda(const State& u, int family) const { return eig(u, family).lambda; }
  double max_wave_speed(const State& u) const;

  /// Analytic class of a characteristic field (verified numerically by
  /// `field_classification`).
  FieldClass field_class(int family) const;
  void check_state(const State& u, const char* what) const;
  void check_family(int family) const;

 private:
  Model(ModelKind kind, double m, Box box, EntropySpec entropy);

  double flux_sign() const { return reflected_ ? -1.0 : 1.0; }
  Eigenpair eig_unreflected(const State& u, int family) const;

  ModelKind kind_;
  bool reflected_ = false;
  double m_ = 0.0;
  Box box_;
  EntropySpec entropy_;
  std::shared_ptr<const ScalarEntropyTables> tables_;
};

/// Flux reflection u(t,x) -> u(t,-x). Family-n objects of the model are the
/// family-1 objects of the reflection.
inline Model reflect(const Model& m) { return m.reflect(); }

ScalarEntropyTables build_scalar_entropy_tables(double slope, double anchor);

struct FieldClassificationReport {
  int family = 1;
  FieldClass expected{};
  FieldClass observed{};
  bool consistent = false;
  int samples = 0;
  int positive_m_derivative = 0;  // samples with m_i' . r_i > 0
  int negative_m_derivative = 0;
  double manifold_estimate = 0.0;  // location of {m_i = 0} along the first coordinate
  double manifold_error = 0.0;     // distance to the analytic manifold
  double grid_step = 0.0;
  bool manifold_ok = false;
};

/// Samples m_i(u) = lambda_i'(u) . r_i(u) and its derivative along r_i on a
/// grid over the model box (finite differences of lambda_i), checks the sign
/// pattern of the field and locates the degenerate manifold.
FieldClassificationReport field_classification(const Model& model, int family, int sample_count);

struct QuadraticBounds {
  double c_star = 0.0;
  double c_2star = 0.0;
  long pairs = 0;
};

/// Sampled min/max of eta(u|v)/|u-v|^2 over grid pairs u != v in `region`.
QuadraticBounds quadratic_bounds(const Model& model, const Box& region, int points_per_axis);

}  // namespace shockstab
