#include "shockstab/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace shockstab {

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial{0.0};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  std::vector<double> a(c_.size() + 1, 0.0);
  for (std::size_t k = 0; k < c_.size(); ++k) a[k + 1] = c_[k] / static_cast<double>(k + 1);
  return Polynomial(std::move(a));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> r(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
  return Polynomial(std::move(r));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.c_.empty() || b.c_.empty()) return Polynomial{};
  std::vector<double> r(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(r));
}

Polynomial operator*(double k, const Polynomial& a) {
  std::vector<double> r = a.c_;
  for (double& x : r) x *= k;
  return Polynomial(std::move(r));
}

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breaks, std::vector<Polynomial> pieces)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
  if (pieces_.size() != breaks_.size() + 1)
    throw std::invalid_argument("piecewise polynomial: need exactly one more piece than breaks");
  if (!std::is_sorted(breaks_.begin(), breaks_.end()))
    throw std::invalid_argument("piecewise polynomial: breaks must be sorted");
}

std::size_t PiecewisePolynomial::piece_index(double x) const {
  return static_cast<std::size_t>(std::lower_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin());
}

double PiecewisePolynomial::operator()(double x) const { return pieces_[piece_index(x)](x); }

PiecewisePolynomial PiecewisePolynomial::derivative() const {
  std::vector<Polynomial> d;
  d.reserve(pieces_.size());
  for (const auto& p : pieces_) d.push_back(p.derivative());
  return {breaks_, std::move(d)};
}

PiecewisePolynomial PiecewisePolynomial::antiderivative(double anchor) const {
  std::vector<Polynomial> a;
  a.reserve(pieces_.size());
  for (const auto& p : pieces_) a.push_back(p.antiderivative());

  // Fix the additive constant of the anchor piece, then propagate continuity
  // outwards across every break.
  const std::size_t k0 = piece_index(anchor);
  a[k0] = a[k0] - Polynomial{a[k0](anchor)};
  for (std::size_t k = k0 + 1; k < a.size(); ++k) {
    const double b = breaks_[k - 1];
    a[k] = a[k] + Polynomial{a[k - 1](b) - a[k](b)};
  }
  for (std::size_t k = k0; k-- > 0;) {
    const double b = breaks_[k];
    a[k] = a[k] + Polynomial{a[k + 1](b) - a[k](b)};
  }
  return {breaks_, std::move(a)};
}

PiecewisePolynomial PiecewisePolynomial::times(const Polynomial& p) const {
  std::vector<Polynomial> r;
  r.reserve(pieces_.size());
  for (const auto& q : pieces_) r.push_back(q * p);
  return {breaks_, std::move(r)};
}

}  // namespace shockstab
