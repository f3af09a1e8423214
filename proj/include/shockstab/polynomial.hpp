#pragma once

#include <initializer_list>
#include <vector>

namespace shockstab {

/// Dense polynomial with coefficients in ascending order of degree.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) {}
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

  double operator()(double x) const;
  Polynomial derivative() const;
  /// Antiderivative vanishing at x = 0.
  Polynomial antiderivative() const;
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<double>& coeffs() const { return c_; }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double k, const Polynomial& a);

 private:
  std::vector<double> c_;
};

/// Piecewise polynomial on the real line. Piece k is used on
/// (breaks[k-1], breaks[k]]; the first and last pieces extend to -inf/+inf.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() = default;
  PiecewisePolynomial(std::vector<double> breaks, std::vector<Polynomial> pieces);

  double operator()(double x) const;
  PiecewisePolynomial derivative() const;
  /// Continuous antiderivative with value zero at `anchor`.
  PiecewisePolynomial antiderivative(double anchor = 0.0) const;
  /// Pointwise product with a single polynomial.
  PiecewisePolynomial times(const Polynomial& p) const;

  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<Polynomial>& pieces() const { return pieces_; }

 private:
  std::size_t piece_index(double x) const;

  std::vector<double> breaks_;
  std::vector<Polynomial> pieces_;
};

}  // namespace shockstab
