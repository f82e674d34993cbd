#pragma once

// Seeded random initial data: trigonometric polynomials with independent
// uniform coefficients (dense in the history space and rich in sign-change
// profiles), plus generators that land inside specific cones by construction.

#include <cmath>
#include <numbers>
#include <vector>

#include "dol/common.hpp"
#include "dol/segment.hpp"

namespace dol {

/// Random trigonometric polynomial a0/2 + sum a_k cos(k pi th) + b_k sin(k pi th).
struct TrigPoly {
  double a0 = 0.0;
  std::vector<double> a, b;  // size nmodes

  [[nodiscard]] double value(double th) const {
    double v = 0.5 * a0;
    for (std::size_t k = 1; k <= a.size(); ++k) {
      const double w = static_cast<double>(k) * std::numbers::pi;
      v += a[k - 1] * std::cos(w * th) + b[k - 1] * std::sin(w * th);
    }
    return v;
  }

  [[nodiscard]] double deriv(double th) const {
    double v = 0.0;
    for (std::size_t k = 1; k <= a.size(); ++k) {
      const double w = static_cast<double>(k) * std::numbers::pi;
      v += w * (-a[k - 1] * std::sin(w * th) + b[k - 1] * std::cos(w * th));
    }
    return v;
  }
};

inline TrigPoly random_trig_poly(Rng& rng, int nmodes) {
  TrigPoly p;
  p.a0 = rng.uniform(-1.0, 1.0);
  p.a.resize(nmodes);
  p.b.resize(nmodes);
  for (int k = 0; k < nmodes; ++k) {
    p.a[k] = rng.uniform(-1.0, 1.0);
    p.b[k] = rng.uniform(-1.0, 1.0);
  }
  return p;
}

/// Random segment normalized to the target sup-norm.
inline Segment fourier_segment(Rng& rng, int nmodes, double amp, int n = default_grid_n) {
  const TrigPoly p = random_trig_poly(rng, nmodes);
  Segment s = make_segment(
      n, [&](double th) { return p.value(th); }, [&](double th) { return p.deriv(th); });
  const double m = sup_norm(s);
  if (m == 0.0) return s;
  return (amp / m) * s;
}

/// Random segment normalized to unit C^1-norm.
inline Segment unit_c1_direction(Rng& rng, int nmodes = 6, int n = default_grid_n) {
  const TrigPoly p = random_trig_poly(rng, nmodes);
  Segment s = make_segment(
      n, [&](double th) { return p.value(th); }, [&](double th) { return p.deriv(th); });
  return (1.0 / c1_norm(s)) * s;
}

/// Strictly positive random segment with values in about [0.4, 2.5] * scale.
inline Segment random_positive(Rng& rng, double scale, int n = default_grid_n) {
  const TrigPoly p = random_trig_poly(rng, 3);
  auto env = [&](double th) { return std::exp(0.3 * p.value(th)); };
  auto denv = [&](double th) { return 0.3 * p.deriv(th) * env(th); };
  Segment s = make_segment(
      n, [&](double th) { return scale * env(th); }, [&](double th) { return scale * denv(th); });
  return s;
}

/// Random member of the one-sign-change cone: either strictly one-signed or
/// a single transversal crossing under a smooth positive envelope.
inline Segment random_in_crossing_cone(Rng& rng, double scale, int n = default_grid_n) {
  const double sign = rng.uniform() < 0.5 ? 1.0 : -1.0;
  const TrigPoly p = random_trig_poly(rng, 3);
  auto env = [&](double th) { return std::exp(0.4 * p.value(th)); };
  auto denv = [&](double th) { return 0.4 * p.deriv(th) * env(th); };
  if (rng.uniform() < 0.3) {
    return make_segment(
        n, [&](double th) { return sign * scale * env(th); },
        [&](double th) { return sign * scale * denv(th); });
  }
  const double tau = rng.uniform(-1.0, 0.0);
  return make_segment(
      n, [&](double th) { return sign * scale * (th - tau) * env(th); },
      [&](double th) { return sign * scale * (env(th) + (th - tau) * denv(th)); });
}

}  // namespace dol
