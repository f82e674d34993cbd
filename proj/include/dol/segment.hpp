#pragma once

// History segments: sampled functions on [-1, 0] with optional derivative
// data, their norms, sign-change counting and the cone-order primitives
// built on "at most one sign change".

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "dol/common.hpp"

namespace dol {

enum class OrderRelation { Equal, Ordered, Unordered };

inline const char* to_string(OrderRelation r) {
  switch (r) {
    case OrderRelation::Equal: return "Equal";
    case OrderRelation::Ordered: return "Ordered";
    default: return "Unordered";
  }
}

/// A sampled history function psi on [-1, 0]: values[i] = psi(theta_i) at
/// theta_i = -1 + i/n, plus optional derivative samples. Segments are value
/// types and treated as immutable once built.
struct Segment {
  int n = default_grid_n;
  std::vector<double> values;  // size n + 1
  std::vector<double> derivs;  // empty, or size n + 1
  // False when the derivative samples are finite-difference surrogates or
  // the underlying function is not C^1 across the sampled window.
  bool exact_derivs = true;

  [[nodiscard]] bool has_derivs() const { return !derivs.empty(); }
  [[nodiscard]] int size() const { return n + 1; }
  [[nodiscard]] double theta(int i) const { return -1.0 + static_cast<double>(i) / n; }
};

inline Segment make_segment(int n, const std::function<double(double)>& f) {
  Segment s;
  s.n = n;
  s.values.resize(n + 1);
  for (int i = 0; i <= n; ++i) s.values[i] = f(s.theta(i));
  return s;
}

inline Segment make_segment(int n, const std::function<double(double)>& f,
                            const std::function<double(double)>& fprime) {
  Segment s = make_segment(n, f);
  s.derivs.resize(n + 1);
  for (int i = 0; i <= n; ++i) s.derivs[i] = fprime(s.theta(i));
  return s;
}

inline Segment constant_segment(int n, double c) {
  Segment s;
  s.n = n;
  s.values.assign(n + 1, c);
  s.derivs.assign(n + 1, 0.0);
  return s;
}

inline double sup_norm(const Segment& s) {
  double m = 0.0;
  for (double v : s.values) m = std::max(m, std::abs(v));
  return m;
}

inline double deriv_sup_norm(const Segment& s) {
  if (!s.has_derivs()) throw std::invalid_argument("segment has no derivative samples");
  double m = 0.0;
  for (double d : s.derivs) m = std::max(m, std::abs(d));
  return m;
}

/// C^1-norm: sup of values plus sup of derivatives.
inline double c1_norm(const Segment& s) { return sup_norm(s) + deriv_sup_norm(s); }

/// Dead band below which a sample counts as zero for sign bookkeeping.
inline double default_deadband(const Segment& s) { return 1e-9 * (1.0 + sup_norm(s)); }

/// Check finiteness and, when derivatives are present, midpoint consistency
/// between values and derivatives. The tolerance allows local curvature
/// (|d_{i+1}-d_i|/2) so smooth data resolved by the grid passes, while
/// garbled (value, derivative) pairs do not.
inline void validate_segment(const Segment& s, double rel_tol = 1e-3) {
  if (static_cast<int>(s.values.size()) != s.n + 1)
    throw std::invalid_argument("segment value count does not match grid");
  for (double v : s.values)
    if (!std::isfinite(v)) throw std::invalid_argument("segment has non-finite value");
  if (!s.has_derivs()) return;
  if (static_cast<int>(s.derivs.size()) != s.n + 1)
    throw std::invalid_argument("segment derivative count does not match grid");
  for (double d : s.derivs)
    if (!std::isfinite(d)) throw std::invalid_argument("segment has non-finite derivative");
  if (!s.exact_derivs) return;  // surrogate data is not held to C^1 consistency
  const double scale = 1.0 + deriv_sup_norm(s);
  for (int i = 0; i < s.n; ++i) {
    const double slope = (s.values[i + 1] - s.values[i]) * s.n;
    const double mid = 0.5 * (s.derivs[i] + s.derivs[i + 1]);
    const double allow = rel_tol * scale + 0.5 * std::abs(s.derivs[i + 1] - s.derivs[i]);
    if (std::abs(slope - mid) > allow)
      throw std::invalid_argument("segment values and derivatives are inconsistent near theta = " +
                                  std::to_string(s.theta(i)));
  }
}

namespace detail {

inline void require_same_grid(const Segment& a, const Segment& b) {
  if (a.n != b.n) throw std::invalid_argument("segment grid mismatch");
}

// Cubic Hermite on one subinterval; u in [0, 1], h = subinterval width.
inline double hermite_value(double y0, double y1, double d0, double d1, double h, double u) {
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * h * d0 + (-2 * u3 + 3 * u2) * y1 +
         (u3 - u2) * h * d1;
}

inline double hermite_deriv(double y0, double y1, double d0, double d1, double h, double u) {
  const double u2 = u * u;
  return ((6 * u2 - 6 * u) * y0 + (3 * u2 - 4 * u + 1) * h * d0 + (-6 * u2 + 6 * u) * y1 +
          (3 * u2 - 2 * u) * h * d1) /
         h;
}

}  // namespace detail

/// Number of sign alternations after compressing out dead-band samples.
/// Empty (all samples in the dead band) means the count is undefined: the
/// cone of interest excludes the zero function.
inline std::optional<int> sign_changes(const Segment& s, double eta) {
  if (eta < 0) throw std::invalid_argument("eta must be nonnegative");
  int count = 0;
  int prev = 0;  // last nonzero sign seen
  for (double v : s.values) {
    if (std::abs(v) <= eta) continue;
    const int sig = v > 0 ? 1 : -1;
    if (prev != 0 && sig != prev) ++count;
    prev = sig;
  }
  if (prev == 0) return std::nullopt;
  return count;
}

inline std::optional<int> sign_changes(const Segment& s) {
  return sign_changes(s, default_deadband(s));
}

/// Membership in the cone of nonzero functions with at most one sign change.
inline bool in_crossing_cone(const Segment& s, double eta) {
  const auto c = sign_changes(s, eta);
  return c.has_value() && *c <= 1;
}

inline bool in_crossing_cone(const Segment& s) {
  return in_crossing_cone(s, default_deadband(s));
}

/// Strict pointwise sign on every sample (sign = +1 or -1).
inline bool strictly_signed(const Segment& s, int sign) {
  for (double v : s.values)
    if (sign > 0 ? v <= 0 : v >= 0) return false;
  return true;
}

/// C^1-interior test for the one-sign-change cone. A segment is interior
/// when it is strictly one-signed, or has a single zero location crossed (or
/// touched at an endpoint) with derivative bounded away from zero. Two zero
/// locations, or a zero with a flat derivative, are boundary cases.
inline bool in_crossing_cone_interior(const Segment& s, double eta) {
  if (!s.has_derivs()) throw std::invalid_argument("interior test needs derivative samples");
  if (!in_crossing_cone(s, eta)) return false;

  const int m = s.n + 1;
  const double h = 1.0 / s.n;
  struct Event {
    bool is_run;
    int a, b;  // dead run [a, b], or crossing between samples a and a+1
  };
  std::vector<Event> events;
  int i = 0;
  int prev_sign = 0;
  int prev_idx = -1;
  while (i < m) {
    if (std::abs(s.values[i]) <= eta) {
      int j = i;
      while (j + 1 < m && std::abs(s.values[j + 1]) <= eta) ++j;
      events.push_back({true, i, j});
      i = j + 1;
      prev_sign = 0;
      prev_idx = -1;
      continue;
    }
    const int sig = s.values[i] > 0 ? 1 : -1;
    if (prev_sign != 0 && sig != prev_sign && prev_idx == i - 1)
      events.push_back({false, i - 1, i});
    prev_sign = sig;
    prev_idx = i;
    ++i;
  }
  if (events.size() > 1) return false;  // more than one zero location
  if (events.empty()) return true;      // strictly one sign throughout

  const Event& e = events.front();
  if (e.is_run) {
    double min_d = std::numeric_limits<double>::infinity();
    for (int k = e.a; k <= e.b; ++k) min_d = std::min(min_d, std::abs(s.derivs[k]));
    return min_d > eta;
  }
  // Crossing strictly between two samples: locate it on the local Hermite
  // cubic and test the interpolated derivative there.
  double lo = 0.0, hi = 1.0;
  const double y0 = s.values[e.a], y1 = s.values[e.b];
  const double d0 = s.derivs[e.a], d1 = s.derivs[e.b];
  double flo = y0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = detail::hermite_value(y0, y1, d0, d1, h, mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double tau = 0.5 * (lo + hi);
  return std::abs(detail::hermite_deriv(y0, y1, d0, d1, h, tau)) > eta;
}

inline bool in_crossing_cone_interior(const Segment& s) {
  return in_crossing_cone_interior(s, default_deadband(s));
}

inline Segment operator+(const Segment& a, const Segment& b) {
  detail::require_same_grid(a, b);
  Segment out;
  out.n = a.n;
  out.values.resize(a.size());
  for (int i = 0; i < a.size(); ++i) out.values[i] = a.values[i] + b.values[i];
  if (a.has_derivs() && b.has_derivs()) {
    out.derivs.resize(a.size());
    for (int i = 0; i < a.size(); ++i) out.derivs[i] = a.derivs[i] + b.derivs[i];
    out.exact_derivs = a.exact_derivs && b.exact_derivs;
  }
  return out;
}

inline Segment operator-(const Segment& a, const Segment& b) {
  detail::require_same_grid(a, b);
  Segment out;
  out.n = a.n;
  out.values.resize(a.size());
  for (int i = 0; i < a.size(); ++i) out.values[i] = a.values[i] - b.values[i];
  if (a.has_derivs() && b.has_derivs()) {
    out.derivs.resize(a.size());
    for (int i = 0; i < a.size(); ++i) out.derivs[i] = a.derivs[i] - b.derivs[i];
    out.exact_derivs = a.exact_derivs && b.exact_derivs;
  }
  return out;
}

inline Segment operator*(double k, const Segment& s) {
  Segment out = s;
  for (double& v : out.values) v *= k;
  for (double& d : out.derivs) d *= k;
  return out;
}

/// Order of two states with respect to the closed one-sign-change cone:
/// Equal within the dead band, Ordered when the difference lies in the cone.
inline OrderRelation order_relation(const Segment& a, const Segment& b, double eta) {
  detail::require_same_grid(a, b);
  const Segment d = a - b;
  if (sup_norm(d) <= eta) return OrderRelation::Equal;
  return in_crossing_cone(d, eta) ? OrderRelation::Ordered : OrderRelation::Unordered;
}

inline OrderRelation order_relation(const Segment& a, const Segment& b) {
  detail::require_same_grid(a, b);
  return order_relation(a, b, default_deadband(a - b));
}

}  // namespace dol
