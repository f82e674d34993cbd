#pragma once

// Finite-horizon oscillation classification. A state is declared eventually
// slowly oscillating as soon as a sampled segment (t >= 1, where derivative
// data is exact) has at most one sign change; rapid oscillation is never
// certified at a finite horizon, so the complementary verdict is
// NotSlowByHorizon. A tail below the noise floor is reported as converged.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "dol/integrator.hpp"
#include "dol/spectrum.hpp"
#include "dol/zeros.hpp"

namespace dol {

enum class VerdictKind { EventuallySlow, NotSlowByHorizon, ConvergedToZero };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::EventuallySlow: return "EventuallySlow";
    case VerdictKind::NotSlowByHorizon: return "NotSlowByHorizon";
    default: return "ConvergedToZero";
  }
}

struct OscillationVerdict {
  VerdictKind kind = VerdictKind::NotSlowByHorizon;
  double horizon = 0.0;
  // EventuallySlow: first sampled time whose segment has <= 1 sign change.
  double entry_time = 0.0;
  // NotSlowByHorizon: zero-gap statistics and per-sample sign-change counts
  // (-1 encodes an all-dead-band segment).
  double min_zero_gap = 0.0;
  std::vector<int> sign_change_profile;
  // ConvergedToZero: earliest time from which the tail stays below the
  // threshold, and the tail norm over the last 5 time units.
  double converge_time = 0.0;
  double tail_norm = 0.0;
  std::vector<ZeroRecord> zero_records;
};

/// Classify the solution from phi at the given horizon, sampling segments at
/// t = 1, 1 + stride, ...
inline OscillationVerdict classify(const Model& m, const Segment& phi, double horizon,
                                   double stride = 0.25, double eta_zero = 1e-7) {
  if (horizon < 3.0) throw std::invalid_argument("horizon must be at least 3");
  const Trajectory traj = evolve(m, phi, horizon);
  OscillationVerdict v;
  v.horizon = horizon;

  for (double t = 1.0; t <= horizon + 1e-9; t += stride) {
    const double tc = std::min(t, traj.span);
    if (in_crossing_cone(traj.segment_at(tc))) {
      v.kind = VerdictKind::EventuallySlow;
      v.entry_time = t;
      v.zero_records = find_zeros(traj, tc, traj.span);
      return v;
    }
  }

  // No sampled segment entered the cone; decide converged vs. undecided.
  double tail = 0.0;
  for (int j = 0; j < traj.forward.num_nodes(); ++j)
    if (traj.forward.node_time(j) >= horizon - 5.0)
      tail = std::max(tail, std::abs(traj.forward.node_value(j)));
  if (tail < eta_zero) {
    v.kind = VerdictKind::ConvergedToZero;
    v.tail_norm = tail;
    double t0 = traj.span;
    double run = 0.0;
    for (int j = traj.forward.num_nodes() - 1; j >= 0; --j) {
      run = std::max(run, std::abs(traj.forward.node_value(j)));
      if (run >= eta_zero) break;
      t0 = traj.forward.node_time(j);
    }
    v.converge_time = t0;
    return v;
  }

  v.kind = VerdictKind::NotSlowByHorizon;
  v.zero_records = find_zeros(traj, 1.0, traj.span);
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < v.zero_records.size(); ++i)
    min_gap = std::min(min_gap, v.zero_records[i].time - v.zero_records[i - 1].time);
  v.min_zero_gap = min_gap;
  for (double t = 1.0; t <= horizon + 1e-9; t += stride) {
    const auto c = sign_changes(traj.segment_at(std::min(t, traj.span)));
    v.sign_change_profile.push_back(c ? *c : -1);
  }
  return v;
}

/// First sampled pair of distinct cone-ordered times on the orbit; none when
/// every sampled pair is unordered.
inline std::optional<std::pair<double, double>> pseudo_ordered_scan(const Trajectory& traj,
                                                                    double stride = 0.25) {
  if (traj.span < 2 * stride)
    throw std::invalid_argument("trajectory too short for an ordered-pair scan");
  std::vector<double> times;
  std::vector<Segment> segs;
  for (double t = 0.0; t <= traj.span + 1e-9; t += stride) {
    times.push_back(std::min(t, traj.span));
    segs.push_back(traj.segment_at(times.back()));
  }
  for (std::size_t i = 0; i + 1 < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j)
      if (order_relation(segs[j], segs[i]) == OrderRelation::Ordered)
        return std::make_pair(times[i], times[j]);
  return std::nullopt;
}

struct RatioTrace {
  double t0 = 0.0;  // first sampled time with a strictly one-signed difference
  std::vector<double> times;
  std::vector<double> norm_leading;
  std::vector<double> norm_complement;
  std::vector<double> ratios;      // NaN where flagged
  std::vector<bool> flagged;       // leading norm inside the dead band
  double max_ratio = 0.0;
};

/// Trace ||Pi_Q h_t|| / ||Pi_L h_t|| (sup-norms) for the evolved difference
/// h_t of an ordered pair, from two units after the difference first becomes
/// strictly one-signed.
inline RatioTrace ratio_trace(const SpectralDecomp& d, const Model& m, const Segment& phi,
                              const Segment& phit, double T, double scan_stride = 0.25) {
  if (order_relation(phit, phi) != OrderRelation::Ordered)
    throw std::invalid_argument("pair must be cone-ordered and distinct");
  const Trajectory a = evolve(m, phi, T);
  const Trajectory b = evolve(m, phit, T);

  std::optional<double> t0;
  for (double t = 0.0; t <= T + 1e-9; t += scan_stride) {
    const double tc = std::min(t, a.span);
    const Segment diff = b.segment_at(tc) - a.segment_at(tc);
    if (strictly_signed(diff, +1) || strictly_signed(diff, -1)) {
      t0 = t;
      break;
    }
  }
  if (!t0)
    throw std::invalid_argument("difference never became strictly one-signed within the horizon");

  RatioTrace out;
  out.t0 = *t0;
  for (double t = *t0 + 2.0; t <= T + 1e-9; t += 1.0) {
    const double tc = std::min(t, a.span);
    const Segment h = b.segment_at(tc) - a.segment_at(tc);
    const Segment hl = project_leading(d, h);
    const double nl = sup_norm(hl);
    const double nq = sup_norm(h - hl);
    out.times.push_back(t);
    out.norm_leading.push_back(nl);
    out.norm_complement.push_back(nq);
    const bool flag = nl <= default_deadband(h);
    out.flagged.push_back(flag);
    if (flag) {
      out.ratios.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      out.ratios.push_back(nq / nl);
      out.max_ratio = std::max(out.max_ratio, nq / nl);
    }
  }
  return out;
}

/// Period estimate from the mean gap between same-direction zero crossings
/// after the burn-in, refined by minimizing the shift mismatch of the dense
/// tail. None when the tail has no recurring structure.
inline std::optional<double> detect_period(const Trajectory& traj, double burn) {
  if (traj.span - burn < 10.0)
    throw std::invalid_argument("need at least 10 time units past the burn-in");
  const auto zeros = find_zeros(traj, burn, traj.span);
  std::vector<double> up;
  for (const auto& z : zeros)
    if (z.slope == SlopeSign::Pos) up.push_back(z.time);
  if (up.size() < 3) return std::nullopt;
  const double guess = (up.back() - up.front()) / static_cast<double>(up.size() - 1);

  // Mean-square mismatch of the tail against its shift by p.
  auto mismatch = [&](double p) {
    const double t_end = traj.span;
    const double t_start = std::max(burn, t_end - std::min(30.0, t_end - burn - p) - p);
    double acc = 0.0, ref = 0.0;
    const int samples = 600;
    for (int i = 0; i <= samples; ++i) {
      const double t = t_start + (t_end - p - t_start) * i / samples;
      const double d = traj.value(t + p) - traj.value(t);
      acc += d * d;
      ref += traj.value(t) * traj.value(t);
    }
    return std::make_pair(acc, ref);
  };

  double lo = 0.8 * guess, hi = 1.2 * guess;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), dd = lo + gr * (hi - lo);
  double fc = mismatch(c).first, fd = mismatch(dd).first;
  while (hi - lo > 1e-5 * guess) {
    if (fc < fd) {
      hi = dd;
      dd = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = mismatch(c).first;
    } else {
      lo = c;
      c = dd;
      fc = fd;
      dd = lo + gr * (hi - lo);
      fd = mismatch(dd).first;
    }
  }
  const double period = 0.5 * (lo + hi);
  const auto [acc, ref] = mismatch(period);
  if (ref <= 0 || acc > 0.05 * ref) return std::nullopt;
  return period;
}

}  // namespace dol
