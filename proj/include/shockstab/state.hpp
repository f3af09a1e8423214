#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace shockstab {

/// Thrown for malformed input: wrong dimensions, out-of-range parameters,
/// unknown config fields. Maps to CLI exit status 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold (inadmissible
/// shock, degenerate base state, ...). Maps to CLI exit status 2.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed or two independent routes disagree.
/// Maps to CLI exit status 4.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point of the state space. Holds one (scalar law) or two (w, v)
/// components; stored inline so states are cheap to copy.
class State {
 public:
  static constexpr int kMaxDim = 2;

  State() = default;
  explicit State(double u) : c_{u, 0.0}, n_(1) {}
  State(double w, double v) : c_{w, v}, n_(2) {}

  static State zero(int n);

  int dim() const { return n_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  State& operator+=(const State& o);
  State& operator-=(const State& o);
  State& operator*=(double k);

  std::string str() const;

 private:
  std::array<double, kMaxDim> c_{0.0, 0.0};
  int n_ = 1;
};

State operator+(State a, const State& b);
State operator-(State a, const State& b);
State operator*(double k, State a);
State operator*(State a, double k);
bool operator==(const State& a, const State& b);

double dot(const State& a, const State& b);
double norm(const State& a);
double distance(const State& a, const State& b);
bool all_finite(const State& a);

/// Throws UsageError unless both states have the same dimension.
void require_same_dim(const State& a, const State& b, const char* what);

}  // namespace shockstab
