#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "dol/integrator.hpp"
#include "dol/sampling.hpp"
#include "dol/spectrum.hpp"

using namespace dol;
using Catch::Approx;

namespace {
constexpr double pi = std::numbers::pi;

// Bisection oracle on the real branches of (lambda + mu) e^{lambda + mu}
// = -beta e^mu, independent of the module's Newton iteration.
double real_root_oracle(double mu, double beta, double lo, double hi) {
  auto g = [&](double w) { return w * std::exp(w) + beta * std::exp(mu); };
  double flo = g(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((g(mid) > 0) == (flo > 0) ? lo : hi) = mid;
    if (lo == hi) break;
    flo = g(lo);
  }
  return 0.5 * (lo + hi) - mu;
}

double residual_of(std::complex<double> lam, double mu, double beta) {
  return std::abs(lam + mu + beta * std::exp(-lam));
}

// Least-squares slope of log(values) against times.
double fitted_rate(const std::vector<double>& ts, const std::vector<double>& vs) {
  double st = 0, sv = 0, stt = 0, stv = 0;
  const auto n = static_cast<double>(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double lv = std::log(vs[i]);
    st += ts[i];
    sv += lv;
    stt += ts[i] * ts[i];
    stv += ts[i] * lv;
  }
  return (n * stv - st * sv) / (n * stt - st * st);
}
}  // namespace

TEST_CASE("regime split") {
  CHECK(regime(0.0, 0.1) == Regime::RealPair);
  CHECK(regime(0.0, std::exp(-1.0)) == Regime::Double);
  CHECK(regime(0.0, 2.0) == Regime::ComplexPair);
  CHECK(regime(1.0, 0.2) == Regime::ComplexPair);  // 0.2 e > 1/e
  CHECK_THROWS_AS(regime(-0.1, 1.0), std::invalid_argument);
}

TEST_CASE("strip-0 real pair matches the bisection oracle") {
  const auto roots = roots_in_strip(0.0, 0.1, 0);
  REQUIRE(roots.size() == 2);
  const double u1 = real_root_oracle(0.0, 0.1, -1.0, 0.0);
  const double u2 = real_root_oracle(0.0, 0.1, -5.0, -1.0);
  CHECK(std::abs(roots[0].lambda.real() - u1) < 1e-6);
  CHECK(std::abs(roots[1].lambda.real() - u2) < 1e-6);
  CHECK(std::abs(roots[0].lambda.real() - (-0.111833)) < 1e-6);
  CHECK(std::abs(roots[1].lambda.real() - (-3.577152)) < 1e-6);
  for (const auto& r : roots) {
    CHECK(r.multiplicity == 1);
    CHECK(r.residual <= 1e-10);
  }
}

TEST_CASE("strip-0 imaginary pair at beta = pi/2") {
  const auto roots = roots_in_strip(0.0, pi / 2, 0);
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0].lambda - std::complex<double>(0.0, pi / 2)) < 1e-10);
  CHECK(roots[0].residual <= 1e-12);
  CHECK(residual_of(std::conj(roots[0].lambda), 0.0, pi / 2) <= 1e-12);
}

TEST_CASE("double root at the regime boundary") {
  const auto roots = roots_in_strip(0.0, std::exp(-1.0), 0);
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0].lambda.real() - (-1.0)) < 1e-8);
  CHECK(roots[0].multiplicity == 2);
  // derivative of the characteristic function vanishes at a double root
  CHECK(std::abs(1.0 - std::exp(-1.0) * std::exp(1.0)) <= 1e-6);
  const auto rmu = roots_in_strip(0.7, std::exp(-1.7), 0);
  CHECK(std::abs(rmu[0].lambda.real() - (-1.7)) < 1e-8);
}

TEST_CASE("strip bounds and residuals for random parameters") {
  Rng rng(123);
  for (int trial = 0; trial < 25; ++trial) {
    const double mu = rng.uniform(0.0, 2.0);
    const double beta = rng.uniform(0.05, 5.0);
    for (int k = 1; k <= 4; ++k) {
      const auto rs = roots_in_strip(mu, beta, k);
      REQUIRE(rs.size() == 1);
      CHECK(rs[0].residual <= 1e-10);
      CHECK(rs[0].lambda.imag() > 2 * k * pi);
      CHECK(rs[0].lambda.imag() < (2 * k + 1) * pi);
    }
    const auto r0 = roots_in_strip(mu, beta, 0);
    for (const auto& r : r0) {
      CHECK(std::abs(r.lambda.imag()) < pi);
      CHECK(r.residual <= 1e-10);
    }
  }
}

TEST_CASE("spectral gap over random parameters") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const double mu = rng.uniform(0.0, 2.0);
    const double beta = rng.uniform(0.05, 5.0);
    double lead_min = 1e300;
    for (const auto& r : roots_in_strip(mu, beta, 0))
      lead_min = std::min(lead_min, r.lambda.real());
    for (int k = 1; k <= 3; ++k)
      CHECK(roots_in_strip(mu, beta, k)[0].lambda.real() < lead_min);
  }
}

TEST_CASE("leading basis shapes") {
  const int n = default_grid_n;
  SECTION("imaginary pair") {
    const auto [v1, v2] = leading_basis(0.0, pi / 2, n);
    CHECK(c1_norm(v1) == Approx(1.0));
    CHECK(c1_norm(v2) == Approx(1.0));
    // proportional to sin(pi th / 2) and cos(pi th / 2)
    const double s1 = v1.values[n / 2] / std::sin(pi * (-0.5) / 2);
    const double s2 = v2.values[n / 2] / std::cos(pi * (-0.5) / 2);
    for (int i = 0; i <= n; ++i) {
      const double th = v1.theta(i);
      CHECK(v1.values[i] == Approx(s1 * std::sin(pi * th / 2)).margin(1e-12));
      CHECK(v2.values[i] == Approx(s2 * std::cos(pi * th / 2)).margin(1e-12));
    }
  }
  SECTION("double root") {
    const auto [v1, v2] = leading_basis(0.0, std::exp(-1.0), n);
    const double s1 = v1.values[n];              // e^{-th} at th=0 is 1
    const double s2 = v2.values[0] / -std::exp(1.0);  // th e^{-th} at th=-1
    for (int i = 0; i <= n; i += 16) {
      const double th = v1.theta(i);
      CHECK(v1.values[i] == Approx(s1 * std::exp(-th)).margin(1e-12));
      CHECK(v2.values[i] == Approx(s2 * th * std::exp(-th)).margin(1e-12));
    }
  }
  SECTION("real pair") {
    const auto roots = roots_in_strip(0.0, 0.1, 0);
    const double u1 = roots[0].lambda.real(), u2 = roots[1].lambda.real();
    const auto [v1, v2] = leading_basis(0.0, 0.1, n);
    const double s1 = v1.values[n], s2 = v2.values[n];
    for (int i = 0; i <= n; i += 16) {
      const double th = v1.theta(i);
      CHECK(v1.values[i] == Approx(s1 * std::exp(u2 * th)).margin(1e-12));
      CHECK(v2.values[i] == Approx(s2 * std::exp(u1 * th)).margin(1e-12));
    }
  }
}

TEST_CASE("decomposition invariants") {
  for (auto [mu, beta, kmax] : {std::tuple{0.0, 2.0, 3}, {0.0, std::exp(-1.0), 1}, {0.0, 0.1, 2}}) {
    const SpectralDecomp d = build_decomp(mu, beta, kmax);
    CHECK(d.gram_cond < 1e8);
    double lead_min = d.leading_min_re();
    for (const auto& r : d.roots)
      if (r.strip >= 1) CHECK(r.lambda.real() < lead_min);
    CHECK(c1_norm(d.v1) == Approx(1.0));
    CHECK(c1_norm(d.v2) == Approx(1.0));
  }
  CHECK_THROWS_AS(build_decomp(0.0, 2.0, 0), std::invalid_argument);
}

TEST_CASE("projection fixes the leading space and is idempotent") {
  const SpectralDecomp d = build_decomp(0.0, 2.0, 3);
  CHECK(c1_norm(project_leading(d, d.v1) - d.v1) < 1e-9);
  CHECK(c1_norm(project_leading(d, d.v2) - d.v2) < 1e-9);
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Segment s = fourier_segment(rng, 7, 1.0);
    const Segment p = project_leading(d, s);
    CHECK(c1_norm(project_leading(d, p) - p) < 1e-9);
    const Segment q = project_complement(d, s);
    CHECK(sup_norm(project_leading(d, q)) < 1e-9);
  }
}

TEST_CASE("projection commutes with the linearized flow") {
  const double beta = 2.0;
  const Model m = make_model(0.0, FeedbackFamily::Tanh, beta);
  const SpectralDecomp d = build_decomp(0.0, beta, 3);
  const Trajectory zero = evolve(m, constant_segment(d.n, 0.0), 2.0);
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Segment xi = fourier_segment(rng, 6, 1.0);
    const Segment lhs = project_leading(d, variational_evolve(zero, xi, 1.0).segment_at(1.0));
    const Segment rhs =
        variational_evolve(zero, project_leading(d, xi), 1.0).segment_at(1.0);
    const double scale = sup_norm(variational_evolve(zero, xi, 1.0).segment_at(1.0));
    CHECK(sup_norm(lhs - rhs) / scale < 1e-6);
  }
}

TEST_CASE("spectral components evolve at their root rates") {
  SECTION("leading rate, real pair") {
    const double beta = 0.1;
    const Model m = make_model(0.0, FeedbackFamily::Tanh, beta);
    const SpectralDecomp d = build_decomp(0.0, beta, 2);
    const Trajectory zero = evolve(m, constant_segment(d.n, 0.0), 16.0);
    Rng rng(51);
    const Segment xi = fourier_segment(rng, 5, 1.0);
    const Trajectory v = variational_evolve(zero, xi, 16.0);
    std::vector<double> ts, vs;
    for (double t = 5.0; t <= 15.0; t += 1.0) {
      ts.push_back(t);
      vs.push_back(sup_norm(project_leading(d, v.segment_at(t))));
    }
    const double rate = fitted_rate(ts, vs);
    const double u1 = d.roots[0].lambda.real();
    CHECK(std::abs(rate - u1) <= 0.1 * std::abs(u1));
  }
  SECTION("complement rate") {
    const double beta = 2.0;
    const Model m = make_model(0.0, FeedbackFamily::Tanh, beta);
    const SpectralDecomp d = build_decomp(0.0, beta, 3);
    const Trajectory zero = evolve(m, constant_segment(d.n, 0.0), 16.0);
    Rng rng(52);
    const Segment xi = fourier_segment(rng, 6, 1.0);
    const Trajectory v = variational_evolve(zero, xi, 16.0);
    std::vector<double> ts, vs;
    for (double t = 5.0; t <= 15.0; t += 1.0) {
      ts.push_back(t);
      vs.push_back(sup_norm(project_complement(d, v.segment_at(t))));
    }
    const double rate = fitted_rate(ts, vs);
    double strip1_re = 0.0;
    for (const auto& r : d.roots)
      if (r.strip == 1) strip1_re = r.lambda.real();
    CHECK(std::abs(rate - strip1_re) <= 0.1 * std::abs(strip1_re));
  }
}

TEST_CASE("eigenfunction initial data") {
  const Segment e1 = eigen_ic(0.0, 2.0, 1);
  CHECK(c1_norm(e1) == Approx(1.0));
  const auto changes = sign_changes(e1, default_deadband(e1));
  REQUIRE(changes.has_value());
  CHECK(*changes >= 2);
}
