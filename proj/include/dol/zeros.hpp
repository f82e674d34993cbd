#pragma once

// Zero detection on dense trajectory output: sign crossings located by
// bisection on the cubic interpolant, with slope signs.

#include <cmath>
#include <vector>

#include "dol/integrator.hpp"

namespace dol {

enum class SlopeSign { Pos, Neg, Flat };

inline const char* to_string(SlopeSign s) {
  switch (s) {
    case SlopeSign::Pos: return "Pos";
    case SlopeSign::Neg: return "Neg";
    default: return "Flat";
  }
}

struct ZeroRecord {
  double time;
  SlopeSign slope;
};

/// All zeros of x on [t0, t1], strictly increasing in time, located to
/// time_tol by bisection on the dense output.
inline std::vector<ZeroRecord> find_zeros(const Trajectory& traj, double t0, double t1,
                                          double time_tol = 1e-10) {
  if (t0 < -1.0 - 1e-12 || t1 > traj.span + 1e-12 || t0 > t1)
    throw std::invalid_argument("zero search range outside trajectory span");
  t0 = std::max(t0, -1.0);
  t1 = std::min(t1, traj.span);

  const int n = traj.grid_n();
  double scale = 0.0;
  {
    const long a = std::lround(std::floor((t0 + 1.0) * n));
    const long b = std::lround(std::ceil((t1 + 1.0) * n));
    for (long j = a; j <= b; ++j) {
      const double t = -1.0 + static_cast<double>(j) / n;
      if (t >= t0 - 1e-12 && t <= t1 + 1e-12) scale = std::max(scale, std::abs(traj.value(t)));
    }
  }
  const double val_eps = 1e-13 * (1.0 + scale);
  const double slope_eps = 1e-8 * (1.0 + scale);

  auto slope_at = [&](double t) {
    const double d = traj.derivative(t);
    if (d > slope_eps) return SlopeSign::Pos;
    if (d < -slope_eps) return SlopeSign::Neg;
    return SlopeSign::Flat;
  };

  std::vector<ZeroRecord> zeros;
  auto push = [&](double t, SlopeSign s) {
    if (!zeros.empty() && t - zeros.back().time <= 10 * time_tol) return;
    zeros.push_back({t, s});
  };

  // Walk consecutive sample times (grid nodes clipped to [t0, t1]).
  std::vector<double> ts;
  ts.push_back(t0);
  {
    const long a = std::lround(std::floor((t0 + 1.0) * n)) + 1;
    const long b = std::lround(std::ceil((t1 + 1.0) * n)) - 1;
    for (long j = a; j <= b; ++j) {
      const double t = -1.0 + static_cast<double>(j) / n;
      if (t > t0 + 1e-12 && t < t1 - 1e-12) ts.push_back(t);
    }
  }
  if (t1 > ts.back()) ts.push_back(t1);

  double prev_t = ts.front();
  double prev_v = traj.value(prev_t);
  if (std::abs(prev_v) <= val_eps) push(prev_t, slope_at(prev_t));
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double t = ts[i];
    const double v = traj.value(t);
    if (std::abs(v) <= val_eps) {
      push(t, slope_at(t));
    } else if (std::abs(prev_v) > val_eps && ((prev_v > 0) != (v > 0))) {
      double lo = prev_t, hi = t, flo = prev_v;
      while (hi - lo > time_tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = traj.value(mid);
        if ((fm > 0) == (flo > 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double tau = 0.5 * (lo + hi);
      push(tau, slope_at(tau));
    }
    prev_t = t;
    prev_v = v;
  }
  return zeros;
}

}  // namespace dol
