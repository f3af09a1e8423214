#include "shockstab/state.hpp"

#include <sstream>

namespace shockstab {

State State::zero(int n) {
  if (n == 1) return State(0.0);
  if (n == 2) return State(0.0, 0.0);
  throw UsageError("state dimension must be 1 or 2, got " + std::to_string(n));
}

State& State::operator+=(const State& o) {
  require_same_dim(*this, o, "state addition");
  for (int i = 0; i < n_; ++i) (*this)[i] += o[i];
  return *this;
}

State& State::operator-=(const State& o) {
  require_same_dim(*this, o, "state subtraction");
  for (int i = 0; i < n_; ++i) (*this)[i] -= o[i];
  return *this;
}

State& State::operator*=(double k) {
  for (int i = 0; i < n_; ++i) (*this)[i] *= k;
  return *this;
}

std::string State::str() const {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int i = 0; i < n_; ++i) os << (i ? ", " : "") << (*this)[i];
  os << ')';
  return os.str();
}

State operator+(State a, const State& b) { return a += b; }
State operator-(State a, const State& b) { return a -= b; }
State operator*(double k, State a) { return a *= k; }
State operator*(State a, double k) { return a *= k; }

bool operator==(const State& a, const State& b) {
  if (a.dim() != b.dim()) return false;
  for (int i = 0; i < a.dim(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

double dot(const State& a, const State& b) {
  require_same_dim(a, b, "dot product");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const State& a) { return std::sqrt(dot(a, a)); }

double distance(const State& a, const State& b) { return norm(a - b); }

bool all_finite(const State& a) {
  for (int i = 0; i < a.dim(); ++i)
    if (!std::isfinite(a[i])) return false;
  return true;
}

void require_same_dim(const State& a, const State& b, const char* what) {
  if (a.dim() != b.dim())
    throw UsageError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                     " vs " + std::to_string(b.dim()) + ")");
}

}  // namespace shockstab
