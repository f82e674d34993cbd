#pragma once

// The rank-2 cone machinery: the norm cone comparing spectral components,
// a sampling-based estimate of its admissible radius kappa, and semiflow
// monotonicity / order-preservation checks.

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "dol/integrator.hpp"
#include "dol/sampling.hpp"
#include "dol/spectrum.hpp"

namespace dol {

/// Cone of states whose spectral complement is kappa-dominated by the
/// leading component (in C^1-norm). Membership is scale invariant.
struct NormCone {
  SpectralDecomp decomp;
  double kappa = 0.0;
};

inline bool in_norm_cone(const NormCone& c, const Segment& s) {
  if (!s.has_derivs()) throw std::invalid_argument("norm cone test needs derivative samples");
  const Segment l = project_leading(c.decomp, s);
  const Segment q = s - l;
  return c1_norm(q) <= c.kappa * c1_norm(l);
}

/// Largest kappa (up to bisection tolerance) such that every tested ball of
/// radius kappa around the leading-space unit circle stays in the interior
/// of the one-sign-change cone. A sampled estimate, not a certificate;
/// downstream uses take a safety factor.
inline double estimate_kappa(const SpectralDecomp& d, int nsamples, std::uint64_t seed) {
  if (nsamples < 100) throw std::invalid_argument("need at least 100 sample directions");
  const int n = d.n;
  std::vector<Segment> circle;
  circle.reserve(64);
  for (int j = 0; j < 64; ++j) {
    const double ang = 2.0 * std::numbers::pi * j / 64.0;
    Segment psi = std::cos(ang) * d.v1 + std::sin(ang) * d.v2;
    circle.push_back((1.0 / c1_norm(psi)) * psi);
  }
  std::vector<Segment> dirs;
  dirs.reserve(nsamples);
  for (int k = 0; k < nsamples; ++k) {
    Rng rng = derive_rng(seed, static_cast<std::uint64_t>(k));
    dirs.push_back(unit_c1_direction(rng, 8, n));
  }
  auto all_interior = [&](double kappa) {
    for (const auto& psi : circle)
      for (const auto& q : dirs)
        if (!in_crossing_cone_interior(psi + kappa * q)) return false;
    return true;
  };

  double lo = 1e-6;
  while (!all_interior(lo)) {
    lo *= 0.1;
    if (lo < 1e-12) throw invariant_error("leading circle not interior at any tested radius");
  }
  double hi = 2 * lo;
  while (all_interior(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > 1e3) break;
  }
  for (int it = 0; it < 40 && hi - lo > 0.01 * lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    (all_interior(mid) ? lo : hi) = mid;
  }
  return lo;
}

struct TimedVerdict {
  double t = 0.0;
  OrderRelation relation = OrderRelation::Unordered;
  std::optional<bool> interior;  // checked for t >= 3
  bool ok = false;
};

struct MonotonicityReport {
  std::vector<TimedVerdict> verdicts;
  std::optional<double> first_violation;
  [[nodiscard]] bool ok() const { return !first_violation.has_value(); }
};

namespace detail {

inline void record(MonotonicityReport& rep, double t, OrderRelation rel,
                   std::optional<bool> interior, bool ok) {
  rep.verdicts.push_back({t, rel, interior, ok});
  if (!ok && !rep.first_violation) rep.first_violation = t;
}

}  // namespace detail

/// Track whether the forward orbit of a one-sign-change state stays in the
/// cone, and in its C^1 interior from t >= 3 on.
inline MonotonicityReport check_cone_invariance(const Model& m, const Segment& phi, double T,
                                                double stride = 0.25) {
  if (!in_crossing_cone(phi))
    throw std::invalid_argument("initial state must have at most one sign change");
  const Trajectory traj = evolve(m, phi, T);
  MonotonicityReport rep;
  for (double t = 0.0; t <= T + 1e-9; t += stride) {
    const Segment s = traj.segment_at(std::min(t, traj.span));
    const bool in_cone = in_crossing_cone(s);
    std::optional<bool> interior;
    if (t >= 3.0) interior = in_crossing_cone_interior(s);
    const bool ok = in_cone && (!interior || *interior);
    detail::record(rep, t, in_cone ? OrderRelation::Ordered : OrderRelation::Unordered, interior,
                   ok);
  }
  return rep;
}

/// Track the evolved difference of an ordered pair: it must keep at most one
/// sign change for all time and be C^1-interior from t >= 3 (an exactly
/// equal pair is degenerate and only reported).
inline MonotonicityReport check_order_preservation(const Model& m, const Segment& phi,
                                                   const Segment& phit, double T,
                                                   double stride = 0.25) {
  const OrderRelation r0 = order_relation(phit, phi);
  if (r0 == OrderRelation::Unordered)
    throw std::invalid_argument("initial pair must be cone-ordered");
  const Trajectory a = evolve(m, phi, T);
  const Trajectory b = evolve(m, phit, T);
  MonotonicityReport rep;
  for (double t = 0.0; t <= T + 1e-9; t += stride) {
    const double tc = std::min(t, a.span);
    const Segment diff = b.segment_at(tc) - a.segment_at(tc);
    const OrderRelation rel = order_relation(b.segment_at(tc), a.segment_at(tc));
    std::optional<bool> interior;
    if (t >= 3.0 && rel == OrderRelation::Ordered) interior = in_crossing_cone_interior(diff);
    const bool ok = rel != OrderRelation::Unordered && (!interior || *interior);
    detail::record(rep, t, rel, interior, ok);
  }
  return rep;
}

}  // namespace dol
