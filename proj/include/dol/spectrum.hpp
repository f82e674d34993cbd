#pragma once

// Spectrum of the linearization at the zero equilibrium. The characteristic
// function is D(lambda) = lambda + mu + beta e^{-lambda}; its roots come in
// conjugate pairs, one pair per horizontal strip 2k pi < |Im| < (2k+1) pi
// (k >= 1) plus a regime-dependent pair in |Im| < pi. The leading two-
// dimensional eigenspace and its spectral complement are realized through
// the classical adjoint bilinear pairing
//     <w, psi> = w(0) psi(0) - beta * Int_{-1}^{0} w(theta+1) psi(theta) dtheta,
// under which the complement is exactly the annihilator of the adjoint
// eigenfunctions.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dol/common.hpp"
#include "dol/segment.hpp"

namespace dol {

enum class Regime { RealPair, Double, ComplexPair };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::RealPair: return "RealPair";
    case Regime::Double: return "Double";
    default: return "ComplexPair";
  }
}

struct CharRoot {
  std::complex<double> lambda;
  int strip = 0;
  int multiplicity = 1;
  double residual = 0.0;
};

namespace detail {

inline std::complex<double> char_fn(std::complex<double> lam, double mu, double beta) {
  return lam + mu + beta * std::exp(-lam);
}

inline std::complex<double> char_fn_prime(std::complex<double> lam, double beta) {
  return 1.0 - beta * std::exp(-lam);
}

inline CharRoot polish(std::complex<double> lam, double mu, double beta, int strip) {
  for (int it = 0; it < 100; ++it) {
    const auto f = char_fn(lam, mu, beta);
    if (std::abs(f) < 1e-14) break;
    const auto fp = char_fn_prime(lam, beta);
    if (std::abs(fp) < 1e-14) break;
    lam -= f / fp;
  }
  CharRoot r;
  r.lambda = lam;
  r.strip = strip;
  r.residual = std::abs(char_fn(lam, mu, beta));
  r.multiplicity = std::abs(char_fn_prime(lam, beta)) <= 1e-6 ? 2 : 1;
  return r;
}

inline bool in_strip(std::complex<double> lam, int k) {
  const double ai = std::abs(lam.imag());
  if (k == 0) return ai < std::numbers::pi;
  return ai > 2 * k * std::numbers::pi && ai < (2 * k + 1) * std::numbers::pi;
}

// Real root of a decreasing-to-increasing D on [lo, hi] with D(lo), D(hi) of
// opposite signs: plain bisection then Newton polish.
inline double real_root(double lo, double hi, double mu, double beta) {
  double flo = lo + mu + beta * std::exp(-lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = mid + mu + beta * std::exp(-mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Strip-0 regime split at beta e^mu = 1/e.
inline Regime regime(double mu, double beta, double tol = 1e-9) {
  if (mu < 0 || beta <= 0) throw std::invalid_argument("need mu >= 0 and beta > 0");
  const double v = beta * std::exp(mu) - std::exp(-1.0);
  if (v < -tol) return Regime::RealPair;
  if (v > tol) return Regime::ComplexPair;
  return Regime::Double;
}

/// The conjugate root pair of strip k (positive-imaginary representative;
/// the conjugate is implied). Strip 0 returns the regime-dependent roots:
/// two reals, one double root, or one complex pair representative.
inline std::vector<CharRoot> roots_in_strip(double mu, double beta, int k) {
  if (k < 0) throw std::invalid_argument("strip index must be nonnegative");
  const double pi = std::numbers::pi;

  if (k == 0) {
    switch (regime(mu, beta)) {
      case Regime::RealPair: {
        // D has a strict interior minimum at ln(beta) with negative value;
        // one root on each side.
        const double lam_star = std::log(beta);
        const double u1 = detail::real_root(lam_star, 1.0, mu, beta);
        double left = lam_star - 1.0;
        while (left + mu + beta * std::exp(-left) <= 0) left -= (lam_star - left);
        const double u2 = detail::real_root(left, lam_star, mu, beta);
        auto r1 = detail::polish({u1, 0.0}, mu, beta, 0);
        auto r2 = detail::polish({u2, 0.0}, mu, beta, 0);
        r1.lambda = {r1.lambda.real(), 0.0};
        r2.lambda = {r2.lambda.real(), 0.0};
        return {r1, r2};
      }
      case Regime::Double: {
        CharRoot r;
        r.lambda = {-mu - 1.0, 0.0};
        r.strip = 0;
        r.multiplicity = 2;
        r.residual = std::abs(detail::char_fn(r.lambda, mu, beta));
        return {r};
      }
      case Regime::ComplexPair: {
        // With lambda = x + iy, eliminating x gives the scalar equation
        // g(y) = ln(beta) + mu - ln(y / sin y) + y cot y = 0, strictly
        // decreasing on (0, pi).
        auto g = [&](double y) {
          return std::log(beta) + mu - std::log(y / std::sin(y)) +
                 y * std::cos(y) / std::sin(y);
        };
        double lo = 1e-12, hi = pi - 1e-12;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          (g(mid) > 0 ? lo : hi) = mid;
        }
        const double y = 0.5 * (lo + hi);
        const double x = std::log(beta) - std::log(y / std::sin(y));
        auto r = detail::polish({x, y}, mu, beta, 0);
        if (!detail::in_strip(r.lambda, 0) || r.residual > 1e-12)
          throw invariant_error("strip-0 complex root did not converge");
        return {r};
      }
    }
    throw std::logic_error("unhandled regime");
  }

  // k >= 1: Newton from the asymptotic seed; a coarse scan of the strip
  // rectangle reseeds it in the rare case the iteration escapes.
  const double yc = (2 * k + 0.5) * pi;
  std::complex<double> seed{-std::log(yc / beta), yc};
  CharRoot r = detail::polish(seed, mu, beta, k);
  if (!detail::in_strip(r.lambda, k) || r.lambda.imag() < 0 || r.residual > 1e-12) {
    const double re_lo = -2.0 - std::log((2 * k + 1) * pi / beta);
    const double re_hi = 2.0;
    const double im_lo = 2 * k * pi, im_hi = (2 * k + 1) * pi;
    double best = 1e300;
    std::complex<double> best_seed = seed;
    for (int a = 1; a < 40; ++a)
      for (int b = 1; b < 40; ++b) {
        const std::complex<double> z{re_lo + (re_hi - re_lo) * a / 40.0,
                                     im_lo + (im_hi - im_lo) * b / 40.0};
        const double v = std::abs(detail::char_fn(z, mu, beta));
        if (v < best) {
          best = v;
          best_seed = z;
        }
      }
    r = detail::polish(best_seed, mu, beta, k);
    if (!detail::in_strip(r.lambda, k) || r.residual > 1e-12)
      throw invariant_error("root search failed in strip " + std::to_string(k));
  }
  if (r.lambda.imag() < 0) r.lambda = std::conj(r.lambda);
  return {r};
}

/// Real basis of the leading eigenspace sampled on the grid with exact
/// derivatives, each normalized to unit C^1-norm.
inline std::pair<Segment, Segment> leading_basis(double mu, double beta,
                                                 int n = default_grid_n) {
  auto normalized = [](Segment s) {
    const double c = c1_norm(s);
    return (1.0 / c) * s;
  };
  switch (regime(mu, beta)) {
    case Regime::RealPair: {
      const auto rs = roots_in_strip(mu, beta, 0);
      const double u1 = rs[0].lambda.real(), u2 = rs[1].lambda.real();
      Segment v1 = make_segment(
          n, [&](double th) { return std::exp(u2 * th); },
          [&](double th) { return u2 * std::exp(u2 * th); });
      Segment v2 = make_segment(
          n, [&](double th) { return std::exp(u1 * th); },
          [&](double th) { return u1 * std::exp(u1 * th); });
      return {normalized(v1), normalized(v2)};
    }
    case Regime::Double: {
      const double u = -mu - 1.0;
      Segment v1 = make_segment(
          n, [&](double th) { return std::exp(u * th); },
          [&](double th) { return u * std::exp(u * th); });
      Segment v2 = make_segment(
          n, [&](double th) { return th * std::exp(u * th); },
          [&](double th) { return (1.0 + u * th) * std::exp(u * th); });
      return {normalized(v1), normalized(v2)};
    }
    default: {
      const auto rs = roots_in_strip(mu, beta, 0);
      const double x = rs[0].lambda.real(), y = rs[0].lambda.imag();
      Segment v1 = make_segment(
          n, [&](double th) { return std::exp(x * th) * std::sin(y * th); },
          [&](double th) {
            return std::exp(x * th) * (x * std::sin(y * th) + y * std::cos(y * th));
          });
      Segment v2 = make_segment(
          n, [&](double th) { return std::exp(x * th) * std::cos(y * th); },
          [&](double th) {
            return std::exp(x * th) * (x * std::cos(y * th) - y * std::sin(y * th));
          });
      return {normalized(v1), normalized(v2)};
    }
  }
}

/// Leading eigenspace, adjoint basis, Gram matrix and the induced spectral
/// projections.
struct SpectralDecomp {
  double mu = 0.0;
  double beta = 1.0;
  int n = default_grid_n;
  Regime reg = Regime::ComplexPair;
  std::vector<CharRoot> roots;  // strip 0 first, then k = 1..kmax
  Segment v1, v2;
  std::array<std::array<double, 2>, 2> gram{};
  double gram_cond = 0.0;
  double p1 = 0.0, p2 = 0.0;  // regime params: (u2,u1) | (u00,-) | (x,y)

  /// Adjoint basis function on [0, 1] paired with v1 / v2.
  [[nodiscard]] double adjoint(int i, double s) const {
    switch (reg) {
      case Regime::RealPair: return std::exp(-(i == 0 ? p1 : p2) * s);
      case Regime::Double: return i == 0 ? std::exp(-p1 * s) : s * std::exp(-p1 * s);
      default:
        return i == 0 ? std::exp(-p1 * s) * std::cos(p2 * s)
                      : -std::exp(-p1 * s) * std::sin(p2 * s);
    }
  }

  /// min Re over the strip-0 roots (the slow edge of the spectral gap).
  [[nodiscard]] double leading_min_re() const {
    double m = 1e300;
    for (const auto& r : roots)
      if (r.strip == 0) m = std::min(m, r.lambda.real());
    return m;
  }
};

namespace detail {

/// <w, psi> with composite Simpson for the integral term (grid n is even).
inline double adjoint_pairing(const SpectralDecomp& d, int wi, const Segment& s) {
  const int n = s.n;
  const double h = 1.0 / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * d.adjoint(wi, s.theta(i) + 1.0) * s.values[i];
  }
  acc *= h / 3.0;
  return d.adjoint(wi, 1.0) * s.values[n] - d.beta * acc;
}

inline std::array<double, 2> solve2(const std::array<std::array<double, 2>, 2>& g,
                                    const std::array<double, 2>& b) {
  const double det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  if (std::abs(det) < 1e-300) throw invariant_error("singular Gram matrix");
  return {(b[0] * g[1][1] - b[1] * g[0][1]) / det, (g[0][0] * b[1] - g[1][0] * b[0]) / det};
}

inline double cond2(const std::array<std::array<double, 2>, 2>& g) {
  const double p = g[0][0] * g[0][0] + g[0][1] * g[0][1] + g[1][0] * g[1][0] + g[1][1] * g[1][1];
  const double det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  const double disc = std::sqrt(std::max(0.0, p * p - 4 * det * det));
  const double s1 = std::sqrt(0.5 * (p + disc));
  const double s2 = std::sqrt(std::max(0.0, 0.5 * (p - disc)));
  return s2 > 0 ? s1 / s2 : 1e300;
}

}  // namespace detail

inline SpectralDecomp build_decomp(double mu, double beta, int kmax, int n = default_grid_n) {
  if (kmax < 1) throw std::invalid_argument("need kmax >= 1");
  if (n % 2 != 0) throw std::invalid_argument("grid must be even for Simpson pairing");
  SpectralDecomp d;
  d.mu = mu;
  d.beta = beta;
  d.n = n;
  d.reg = regime(mu, beta);

  for (int k = 0; k <= kmax; ++k) {
    const auto rs = roots_in_strip(mu, beta, k);
    d.roots.insert(d.roots.end(), rs.begin(), rs.end());
  }
  switch (d.reg) {
    case Regime::RealPair:
      d.p1 = d.roots[1].lambda.real();  // u2, paired with v1
      d.p2 = d.roots[0].lambda.real();  // u1
      break;
    case Regime::Double:
      d.p1 = d.roots[0].lambda.real();
      break;
    case Regime::ComplexPair:
      d.p1 = d.roots[0].lambda.real();
      d.p2 = d.roots[0].lambda.imag();
      break;
  }

  // Spectral gap between the leading strip and everything above it.
  double hi = -1e300;
  for (const auto& r : d.roots)
    if (r.strip >= 1) hi = std::max(hi, r.lambda.real());
  if (!(hi < d.leading_min_re()))
    throw invariant_error("spectral gap violated: strip k >= 1 reaches the leading strip");

  auto basis = leading_basis(mu, beta, n);
  d.v1 = std::move(basis.first);
  d.v2 = std::move(basis.second);
  for (int i = 0; i < 2; ++i) {
    d.gram[i][0] = detail::adjoint_pairing(d, i, d.v1);
    d.gram[i][1] = detail::adjoint_pairing(d, i, d.v2);
  }
  d.gram_cond = detail::cond2(d.gram);
  if (d.gram_cond > 1e8)
    throw invariant_error("Gram matrix ill-conditioned near the regime boundary");
  return d;
}

/// Coordinates of the leading component in the (v1, v2) basis.
inline std::array<double, 2> leading_coords(const SpectralDecomp& d, const Segment& s) {
  if (s.n != d.n) throw std::invalid_argument("segment grid does not match decomposition");
  const std::array<double, 2> b{detail::adjoint_pairing(d, 0, s),
                                detail::adjoint_pairing(d, 1, s)};
  return detail::solve2(d.gram, b);
}

inline Segment project_leading(const SpectralDecomp& d, const Segment& s) {
  const auto c = leading_coords(d, s);
  Segment out = c[0] * d.v1 + c[1] * d.v2;
  return out;
}

inline Segment project_complement(const SpectralDecomp& d, const Segment& s) {
  return s - project_leading(d, s);
}

/// Real part of the strip-k eigenfunction restricted to [-1, 0], unit
/// C^1-norm. For k = 0 this is the first leading basis function.
inline Segment eigen_ic(double mu, double beta, int k, int n = default_grid_n) {
  if (k == 0) return leading_basis(mu, beta, n).first;
  const auto rs = roots_in_strip(mu, beta, k);
  const double x = rs[0].lambda.real(), y = rs[0].lambda.imag();
  Segment s = make_segment(
      n, [&](double th) { return std::exp(x * th) * std::cos(y * th); },
      [&](double th) {
        return std::exp(x * th) * (x * std::cos(y * th) - y * std::sin(y * th));
      });
  return (1.0 / c1_norm(s)) * s;
}

}  // namespace dol
