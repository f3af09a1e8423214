#include "shockstab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace shockstab {

Box Box::interval(double lo, double hi) {
  if (!(lo < hi)) throw UsageError("box: empty interval");
  Box b;
  b.n = 1;
  b.range[0] = {lo, hi};
  return b;
}

Box Box::rect(double w_lo, double w_hi, double v_lo, double v_hi) {
  if (!(w_lo < w_hi) || !(v_lo < v_hi)) throw UsageError("box: empty rectangle");
  Box b;
  b.n = 2;
  b.range[0] = {w_lo, w_hi};
  b.range[1] = {v_lo, v_hi};
  return b;
}

bool Box::contains(const State& u, double slack) const {
  if (u.dim() != n) return false;
  for (int i = 0; i < n; ++i) {
    const auto& [lo, hi] = range[static_cast<std::size_t>(i)];
    if (!(u[i] >= lo - slack && u[i] <= hi + slack)) return false;
  }
  return true;
}

State Box::lower() const {
  return n == 1 ? State(range[0].first) : State(range[0].first, range[1].first);
}

State Box::upper() const {
  return n == 1 ? State(range[0].second) : State(range[0].second, range[1].second);
}

State Box::center() const { return 0.5 * (lower() + upper()); }

double Box::diameter() const { return distance(lower(), upper()); }

EntropySpec EntropySpec::piecewise(double slope, double anchor) {
  if (!(slope > 0.0 && slope <= 1.0)) throw UsageError("piecewise entropy: slope must lie in (0, 1]");
  if (!(anchor > 0.0)) throw UsageError("piecewise entropy: anchor must be positive");
  return {EntropyKind::PiecewiseScalar, slope, anchor};
}

std::string to_string(ModelKind k) {
  return k == ModelKind::ScalarCubic ? "scalar_cubic" : "elastodynamics";
}

std::string to_string(FieldClass c) {
  return c == FieldClass::ConcaveConvex ? "concave_convex" : "convex_concave";
}

ScalarEntropyTables build_scalar_entropy_tables(double slope, double anchor) {
  ScalarEntropyTables t;
  t.d2eta = PiecewisePolynomial({0.0, anchor},
                                {Polynomial{1.0}, Polynomial{1.0, (slope - 1.0) / anchor}, Polynomial{slope}});
  t.deta = t.d2eta.antiderivative(0.0);
  t.eta = t.deta.antiderivative(0.0);
  // q' = eta' f' with f'(u) = -3u^2.
  t.q = t.deta.times(Polynomial{0.0, 0.0, -3.0}).antiderivative(0.0);
  return t;
}

Model::Model(ModelKind kind, double m, Box box, EntropySpec entropy)
    : kind_(kind), m_(m), box_(box), entropy_(entropy) {
  if (box_.n != dim()) throw UsageError("model box dimension does not match the model");
  if (entropy_.kind == EntropyKind::PiecewiseScalar) {
    if (kind_ != ModelKind::ScalarCubic)
      throw UsageError("piecewise entropy is only defined for the scalar model");
    tables_ = std::make_shared<const ScalarEntropyTables>(
        build_scalar_entropy_tables(entropy_.slope, entropy_.anchor));
  }
}

Model Model::scalar_cubic(Box box, EntropySpec entropy) {
  return Model(ModelKind::ScalarCubic, 0.0, box, entropy);
}

Model Model::elastodynamics(double m, Box box) {
  if (!(m > 0.0)) throw UsageError("elastodynamics: modulus m must be positive");
  return Model(ModelKind::Elastodynamics, m, box, EntropySpec::canonical());
}

std::string Model::name() const {
  std::string s = to_string(kind_);
  if (entropy_.kind == EntropyKind::PiecewiseScalar) s += "+piecewise_entropy";
  if (reflected_) s = "reflected(" + s + ")";
  return s;
}

Model Model::reflect() const {
  Model r = *this;
  r.reflected_ = !reflected_;
  return r;
}

Model Model::with_entropy(EntropySpec spec) const {
  Model r(kind_, m_, box_, spec);
  r.reflected_ = reflected_;
  return r;
}

Model Model::with_box(Box box) const {
  Model r(kind_, m_, box, entropy_);
  r.reflected_ = reflected_;
  return r;
}

void Model::check_state(const State& u, const char* what) const {
  if (u.dim() != dim())
    throw UsageError(std::string(what) + ": state has dimension " + std::to_string(u.dim()) + ", model " +
                     name() + " needs " + std::to_string(dim()));
}

void Model::check_family(int family) const {
  if (family < 1 || family > dim())
    throw UsageError("invalid characteristic family " + std::to_string(family) + " for " + name());
}

namespace {

double stress(double w, double m) { return -w * w * w - m * w; }

}  // namespace

State Model::flux(const State& u) const {
  check_state(u, "flux");
  const double sg = flux_sign();
  if (kind_ == ModelKind::ScalarCubic) return State(sg * -(u[0] * u[0] * u[0]));
  return State(sg * -u[1], sg * stress(u[0], m_));
}

double Model::entropy(const State& u) const {
  check_state(u, "entropy");
  if (kind_ == ModelKind::ScalarCubic) {
    if (tables_) return tables_->eta(u[0]);
    return 0.5 * u[0] * u[0];
  }
  const double w = u[0], v = u[1];
  return 0.5 * v * v + 0.25 * w * w * w * w + 0.5 * m_ * w * w;
}

State Model::entropy_gradient(const State& u) const {
  check_state(u, "entropy_gradient");
  if (kind_ == ModelKind::ScalarCubic) return State(tables_ ? tables_->deta(u[0]) : u[0]);
  return State(u[0] * u[0] * u[0] + m_ * u[0], u[1]);
}

double Model::entropy_flux(const State& u) const {
  check_state(u, "entropy_flux");
  const double sg = flux_sign();
  if (kind_ == ModelKind::ScalarCubic) {
    if (tables_) return sg * tables_->q(u[0]);
    const double u2 = u[0] * u[0];
    return sg * -0.75 * u2 * u2;
  }
  return sg * u[1] * stress(u[0], m_);
}

std::array<double, 2> Model::entropy_hessian_diag(const State& u) const {
  check_state(u, "entropy_hessian");
  if (kind_ == ModelKind::ScalarCubic) return {tables_ ? tables_->d2eta(u[0]) : 1.0, 0.0};
  return {3.0 * u[0] * u[0] + m_, 1.0};
}

double Model::rel_entropy(const State& u, const State& v) const {
  check_state(u, "rel_entropy");
  check_state(v, "rel_entropy");
  if (kind_ == ModelKind::ScalarCubic) {
    if (tables_) {
      const double x = u[0], y = v[0];
      return tables_->eta(x) - tables_->eta(y) - tables_->deta(y) * (x - y);
    }
    const double d = u[0] - v[0];
    return 0.5 * d * d;
  }
  // Factored form of the quartic remainder keeps eta(u|v) >= 0 exactly.
  const double w = u[0], W = v[0];
  const double dw = w - W, dv = u[1] - v[1];
  return dw * dw * (0.25 * (w * w + 2.0 * w * W + 3.0 * W * W) + 0.5 * m_) + 0.5 * dv * dv;
}

double Model::rel_entropy_flux(const State& u, const State& v) const {
  check_state(u, "rel_entropy_flux");
  check_state(v, "rel_entropy_flux");
  const double sg = flux_sign();
  if (kind_ == ModelKind::ScalarCubic) {
    const double x = u[0], y = v[0];
    if (tables_) {
      const double fx = -x * x * x, fy = -y * y * y;
      return sg * (tables_->q(x) - tables_->q(y) - tables_->deta(y) * (fx - fy));
    }
    const double d = x - y;
    return sg * -0.25 * d * d * (3.0 * x * x + 2.0 * x * y + y * y);
  }
  // q(u;v) = (v_u - v_v)(p(w_u) - p(w_v)) for the p-system.
  return sg * (u[1] - v[1]) * (stress(u[0], m_) - stress(v[0], m_));
}

Eigenpair Model::eig_unreflected(const State& u, int family) const {
  if (kind_ == ModelKind::ScalarCubic) return {-3.0 * u[0] * u[0], State(1.0)};
  const double c = std::sqrt(3.0 * u[0] * u[0] + m_);
  if (family == 1) return {-c, State(1.0, c)};
  return {c, State(-1.0, c)};
}

Eigenpair Model::eig(const State& u, int family) const {
  check_state(u, "eig");
  check_family(family);
  if (!reflected_) return eig_unreflected(u, family);
  Eigenpair e = eig_unreflected(u, dim() + 1 - family);
  e.lambda = -e.lambda;
  return e;
}

double Model::max_wave_speed(const State& u) const {
  double s = 0.0;
  for (int k = 1; k <= dim(); ++k) s = std::max(s, std::abs(lambda(u, k)));
  return s;
}

FieldClass Model::field_class(int family) const {
  check_family(family);
  // Unreflected: scalar -u^3 and the elastic 1-field are convex-concave, the
  // elastic 2-field concave-convex. Reflection maps family i to n+1-i and
  // negates lambda, which flips the class.
  const int base_family = reflected_ ? dim() + 1 - family : family;
  bool convex_concave = kind_ == ModelKind::ScalarCubic || base_family == 1;
  if (reflected_) convex_concave = !convex_concave;
  return convex_concave ? FieldClass::ConvexConcave : FieldClass::ConcaveConvex;
}

namespace {

State axis_point(const Box& box, int i, int j, int count) {
  auto lerp = [count](std::pair<double, double> r, int k) {
    return r.first + (r.second - r.first) * static_cast<double>(k) / static_cast<double>(count - 1);
  };
  if (box.n == 1) return State(lerp(box.range[0], i));
  return State(lerp(box.range[0], i), lerp(box.range[1], j));
}

double directional_lambda_derivative(const Model& model, const State& u, int family, const State& dir) {
  const double h = 1e-5 * (1.0 + norm(u));
  const double lp = model.lambda(u + h * dir, family);
  const double lm = model.lambda(u - h * dir, family);
  return (lp - lm) / (2.0 * h);
}

// m_i(u) = grad lambda_i(u) . r_i(u)
double m_field(const Model& model, const State& u, int family) {
  const State r = model.eig(u, family).r;
  return directional_lambda_derivative(model, u, family, r);
}

}  // namespace

FieldClassificationReport field_classification(const Model& model, int family, int sample_count) {
  model.check_family(family);
  if (sample_count < 10) throw UsageError("field_classification: sample_count must be at least 10");

  FieldClassificationReport rep;
  rep.family = family;
  rep.expected = model.field_class(family);
  const Box& box = model.box();
  const int nj = box.n == 1 ? 1 : sample_count;
  rep.grid_step = (box.range[0].second - box.range[0].first) / (sample_count - 1);

  double worst_manifold_err = 0.0;
  double manifold_sum = 0.0;
  int manifold_hits = 0;
  for (int j = 0; j < nj; ++j) {
    double prev_m = std::numeric_limits<double>::quiet_NaN();
    double prev_w = 0.0;
    for (int i = 0; i < sample_count; ++i) {
      const State u = axis_point(box, i, j, sample_count);
      const State r = model.eig(u, family).r;
      const double hm = 1e-4 * (1.0 + norm(u));
      const double dm = (m_field(model, u + hm * r, family) - m_field(model, u - hm * r, family)) / (2.0 * hm);
      ++rep.samples;
      if (dm > 0.0) ++rep.positive_m_derivative;
      if (dm < 0.0) ++rep.negative_m_derivative;

      const double mval = m_field(model, u, family);
      if (i > 0 && std::isfinite(prev_m) && prev_m * mval <= 0.0 && prev_m != mval) {
        const double zero = prev_w + (u[0] - prev_w) * prev_m / (prev_m - mval);
        manifold_sum += zero;
        ++manifold_hits;
        worst_manifold_err = std::max(worst_manifold_err, std::abs(zero));
      }
      prev_m = mval;
      prev_w = u[0];
    }
  }

  if (rep.positive_m_derivative == rep.samples)
    rep.observed = FieldClass::ConcaveConvex;
  else if (rep.negative_m_derivative == rep.samples)
    rep.observed = FieldClass::ConvexConcave;
  else
    rep.observed = rep.expected == FieldClass::ConcaveConvex ? FieldClass::ConvexConcave : FieldClass::ConcaveConvex;

  if (manifold_hits > 0) {
    rep.manifold_estimate = manifold_sum / manifold_hits;
    rep.manifold_error = worst_manifold_err;
    rep.manifold_ok = worst_manifold_err <= rep.grid_step;
  } else {
    rep.manifold_estimate = std::numeric_limits<double>::quiet_NaN();
    rep.manifold_error = std::numeric_limits<double>::infinity();
    rep.manifold_ok = false;
  }
  rep.consistent = rep.observed == rep.expected &&
                   (rep.positive_m_derivative == rep.samples || rep.negative_m_derivative == rep.samples) &&
                   rep.manifold_ok;
  return rep;
}

QuadraticBounds quadratic_bounds(const Model& model, const Box& region, int points_per_axis) {
  if (region.n != model.dim()) throw UsageError("quadratic_bounds: region dimension mismatch");
  if (points_per_axis < 2) throw UsageError("quadratic_bounds: degenerate region sampling");
  for (int i = 0; i < region.n; ++i)
    if (!(region.range[static_cast<std::size_t>(i)].first < region.range[static_cast<std::size_t>(i)].second))
      throw UsageError("quadratic_bounds: degenerate region");

  std::vector<State> pts;
  const int nj = region.n == 1 ? 1 : points_per_axis;
  for (int i = 0; i < points_per_axis; ++i)
    for (int j = 0; j < nj; ++j) pts.push_back(axis_point(region, i, j, points_per_axis));

  QuadraticBounds qb;
  qb.c_star = std::numeric_limits<double>::infinity();
  qb.c_2star = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (i == k) continue;
      const double d2 = dot(pts[i] - pts[k], pts[i] - pts[k]);
      if (d2 == 0.0) continue;
      const double ratio = model.rel_entropy(pts[i], pts[k]) / d2;
      qb.c_star = std::min(qb.c_star, ratio);
      qb.c_2star = std::max(qb.c_2star, ratio);
      ++qb.pairs;
    }
  }
  return qb;
}

}  // namespace shockstab
