#pragma once

// The semiflow by the method of steps: classical RK4 at fixed step 1/n, so
// each step's delayed endpoint lookups land exactly on stored nodes of the
// previous unit interval (stage midpoints use cubic Hermite). The history and
// the forward solution are kept as separate dense pieces because x' generally
// jumps at t = 0.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dol/common.hpp"
#include "dol/dense.hpp"
#include "dol/model.hpp"
#include "dol/segment.hpp"

namespace dol {

enum class TrajKind { Nonlinear, Variational };

/// Dense solution record on [-1, span] supporting segment extraction.
struct Trajectory {
  Model model;
  Segment history;     // the initial phi
  DenseCurve hist;     // dense history on [-1, 0]
  DenseCurve forward;  // dense solution on [0, span]
  double span = 0.0;
  TrajKind kind = TrajKind::Nonlinear;
  bool history_derivs_exact = true;

  [[nodiscard]] int grid_n() const { return history.n; }

  [[nodiscard]] double value(double t) const {
    return t < 0.0 ? hist.value(t) : forward.value(t);
  }

  [[nodiscard]] double derivative(double t) const {
    return t < 0.0 ? hist.derivative(t) : forward.derivative(t);
  }

  /// State at time t: the window x(t + theta), theta in [-1, 0]. Derivative
  /// samples are exact for t >= 1 (and at t = 0 when phi carried exact
  /// derivatives); in between, the window straddles the t = 0 kink.
  [[nodiscard]] Segment segment_at(double t) const {
    if (t < -1e-12 || t > span + 1e-12)
      throw std::invalid_argument("segment time outside trajectory span");
    t = std::max(0.0, std::min(t, span));
    if (t == 0.0 && history.has_derivs()) return history;
    const int n = grid_n();
    Segment s;
    s.n = n;
    s.values.resize(n + 1);
    s.derivs.resize(n + 1);
    const double sn = t * n;
    const long jn = std::lround(sn);
    if (std::abs(sn - jn) < 1e-9) {
      // Node-aligned extraction: copy stored nodes.
      for (int i = 0; i <= n; ++i) {
        const long j = jn - n + i;
        if (j < 0) {
          s.values[i] = hist.node_value(static_cast<int>(j + n));
          s.derivs[i] = hist.node_deriv(static_cast<int>(j + n));
        } else {
          s.values[i] = forward.node_value(static_cast<int>(j));
          s.derivs[i] = forward.node_deriv(static_cast<int>(j));
        }
      }
    } else {
      for (int i = 0; i <= n; ++i) {
        const double tt = t + s.theta(i);
        s.values[i] = value(tt);
        s.derivs[i] = derivative(tt);
      }
    }
    s.exact_derivs = t >= 1.0 || (t == 0.0 && history_derivs_exact);
    return s;
  }
};

namespace detail {

inline DenseCurve history_curve(const Segment& phi, bool& exact) {
  const int n = phi.n;
  std::vector<double> d(n + 1);
  if (phi.has_derivs()) {
    d = phi.derivs;
    exact = phi.exact_derivs;
  } else {
    // Finite-difference surrogates, second order.
    for (int i = 1; i < n; ++i) d[i] = 0.5 * n * (phi.values[i + 1] - phi.values[i - 1]);
    d[0] = 0.5 * n * (-3 * phi.values[0] + 4 * phi.values[1] - phi.values[2]);
    d[n] = 0.5 * n * (3 * phi.values[n] - 4 * phi.values[n - 1] + phi.values[n - 2]);
    exact = false;
  }
  return DenseCurve(-1.0, n, phi.values, std::move(d));
}

}  // namespace detail

/// Integrate x' = -mu x + f(x(t-1)) from the history phi up to time T.
inline Trajectory evolve(const Model& m, const Segment& phi, double T) {
  if (T < 0) throw std::invalid_argument("horizon must be nonnegative");
  validate_segment(phi);
  Trajectory traj;
  traj.model = m;
  traj.history = phi;
  traj.hist = detail::history_curve(phi, traj.history_derivs_exact);
  const int n = phi.n;
  const double h = 1.0 / n;
  const long steps = std::max<long>(1, static_cast<long>(std::ceil(T * n - 1e-9)));
  traj.span = static_cast<double>(steps) / n;

  std::vector<double> x(steps + 1), dx(steps + 1);
  x[0] = phi.values[n];

  // Delayed value at forward node index j - n (may fall in the history).
  auto delayed_node = [&](long j) {
    return j < n ? traj.hist.node_value(static_cast<int>(j)) : x[j - n];
  };
  auto delayed_mid = [&](long j) {  // value at node j - n + 1/2
    if (j + 1 <= n) {
      const double t = -1.0 + (j + 0.5) * h;
      return traj.hist.value(t);
    }
    const long a = j - n;
    return detail::hermite_value(x[a], x[a + 1], dx[a], dx[a + 1], h, 0.5);
  };

  dx[0] = -m.mu * x[0] + m.f(delayed_node(0));
  for (long j = 0; j < steps; ++j) {
    const double q0 = m.f(delayed_node(j));
    const double qm = m.f(delayed_mid(j));
    const double q1 = m.f(delayed_node(j + 1));
    const double xj = x[j];
    const double k1 = -m.mu * xj + q0;
    const double k2 = -m.mu * (xj + 0.5 * h * k1) + qm;
    const double k3 = -m.mu * (xj + 0.5 * h * k2) + qm;
    const double k4 = -m.mu * (xj + h * k3) + q1;
    x[j + 1] = xj + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!std::isfinite(x[j + 1])) throw blowup_error(static_cast<double>(j + 1) * h);
    dx[j + 1] = -m.mu * x[j + 1] + q1;
  }
  traj.forward = DenseCurve(0.0, n, std::move(x), std::move(dx));
  return traj;
}

/// Linearized flow along a base trajectory:
/// v' = -mu v(t) + f'(x(t-1)) v(t-1), with the coefficient read from the
/// base's dense output. Realizes the derivative of the time-t map applied to
/// the direction xi.
inline Trajectory variational_evolve(const Trajectory& base, const Segment& xi, double T) {
  if (T < 0) throw std::invalid_argument("horizon must be nonnegative");
  if (T > base.span + 1e-12) throw std::invalid_argument("base trajectory span exceeded");
  if (xi.n != base.grid_n()) throw std::invalid_argument("direction grid mismatch");
  validate_segment(xi);
  const Model& m = base.model;
  Trajectory traj;
  traj.model = m;
  traj.kind = TrajKind::Variational;
  traj.history = xi;
  traj.hist = detail::history_curve(xi, traj.history_derivs_exact);
  const int n = xi.n;
  const double h = 1.0 / n;
  const long steps = std::max<long>(1, static_cast<long>(std::ceil(T * n - 1e-9)));
  traj.span = static_cast<double>(steps) / n;

  std::vector<double> v(steps + 1), dv(steps + 1);
  v[0] = xi.values[n];

  auto delayed_node = [&](long j) {
    return j < n ? traj.hist.node_value(static_cast<int>(j)) : v[j - n];
  };
  auto delayed_mid = [&](long j) {
    if (j + 1 <= n) return traj.hist.value(-1.0 + (j + 0.5) * h);
    const long a = j - n;
    return detail::hermite_value(v[a], v[a + 1], dv[a], dv[a + 1], h, 0.5);
  };
  auto coeff = [&](double t) { return m.f_prime(base.value(t - 1.0)); };

  dv[0] = -m.mu * v[0] + coeff(0.0) * delayed_node(0);
  for (long j = 0; j < steps; ++j) {
    const double t = j * h;
    const double q0 = coeff(t) * delayed_node(j);
    const double qm = coeff(t + 0.5 * h) * delayed_mid(j);
    const double q1 = coeff(t + h) * delayed_node(j + 1);
    const double vj = v[j];
    const double k1 = -m.mu * vj + q0;
    const double k2 = -m.mu * (vj + 0.5 * h * k1) + qm;
    const double k3 = -m.mu * (vj + 0.5 * h * k2) + qm;
    const double k4 = -m.mu * (vj + h * k3) + q1;
    v[j + 1] = vj + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!std::isfinite(v[j + 1])) throw blowup_error(static_cast<double>(j + 1) * h);
    dv[j + 1] = -m.mu * v[j + 1] + q1;
  }
  traj.forward = DenseCurve(0.0, n, std::move(v), std::move(dv));
  return traj;
}

struct DissipativityReport {
  double max_tail_norm = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  bool within = false;
};

/// Evolve and compare the tail segment norms over [burn, T] against the
/// model's explicit eventual bound.
inline DissipativityReport check_dissipativity(const Model& m, const Segment& phi, double T,
                                               double burn, double tolerance = 0.01) {
  if (burn >= T) throw std::invalid_argument("burn-in must precede the horizon");
  const Trajectory traj = evolve(m, phi, T);
  DissipativityReport rep;
  rep.bound = dissipativity_bound(m);
  rep.tolerance = tolerance;
  // max over t in [burn, T] of ||x_t|| = max |x(s)| over s in [burn-1, T]
  const double s0 = std::max(-1.0, burn - 1.0);
  double mx = 0.0;
  for (int j = 0; j < traj.forward.num_nodes(); ++j) {
    const double t = traj.forward.node_time(j);
    if (t >= s0) mx = std::max(mx, std::abs(traj.forward.node_value(j)));
  }
  if (s0 < 0)
    for (int j = 0; j < traj.hist.num_nodes(); ++j)
      if (traj.hist.node_time(j) >= s0) mx = std::max(mx, std::abs(traj.hist.node_value(j)));
  rep.max_tail_norm = mx;
  rep.within = mx <= rep.bound + tolerance;
  return rep;
}

}  // namespace dol
