#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dol/cones.hpp"

using namespace dol;
using Catch::Approx;

TEST_CASE("norm cone membership") {
  const SpectralDecomp d = build_decomp(0.0, 2.0, 3);
  const double kappa = 0.05;
  const NormCone cone{d, kappa};
  CHECK(in_norm_cone(cone, d.v1));  // leading space is inside for any kappa

  Rng rng(61);
  const Segment q0 = project_complement(d, fourier_segment(rng, 7, 1.0));
  const Segment q = (1.0 / c1_norm(q0)) * q0;
  CHECK_FALSE(in_norm_cone(cone, q));  // pure complement is outside

  CHECK(in_norm_cone(cone, d.v1 + (0.9 * kappa) * q));
  CHECK_FALSE(in_norm_cone(cone, d.v1 + (2.0 * kappa) * q));

  Segment noderivs = make_segment(d.n, [](double th) { return th; });
  CHECK_THROWS_AS(in_norm_cone(cone, noderivs), std::invalid_argument);
}

TEST_CASE("norm cone membership is scale invariant") {
  const SpectralDecomp d = build_decomp(0.0, 2.0, 3);
  const NormCone cone{d, 0.05};
  Rng rng(62);
  for (int trial = 0; trial < 20; ++trial) {
    const Segment s = fourier_segment(rng, 5, 1.0);
    const bool base = in_norm_cone(cone, s);
    for (double k : {2.0, -1.0, 0.25}) CHECK(in_norm_cone(cone, k * s) == base);
  }
}

TEST_CASE("kappa estimate certifies its own samples") {
  const SpectralDecomp d = build_decomp(0.0, 2.0, 3);
  const int nsamples = 100;
  const std::uint64_t seed = 7;
  const double kh = estimate_kappa(d, nsamples, seed);
  CHECK(kh > 0.0);

  // Rebuild the same circle points and directions; kh passes, 2 kh fails.
  std::vector<Segment> circle;
  for (int j = 0; j < 64; ++j) {
    const double ang = 2.0 * std::numbers::pi * j / 64.0;
    Segment psi = std::cos(ang) * d.v1 + std::sin(ang) * d.v2;
    circle.push_back((1.0 / c1_norm(psi)) * psi);
  }
  std::vector<Segment> dirs;
  for (int k = 0; k < nsamples; ++k) {
    Rng rng = derive_rng(seed, static_cast<std::uint64_t>(k));
    dirs.push_back(unit_c1_direction(rng, 8, d.n));
  }
  bool all_pass = true, any_fail_at_2k = false;
  for (const auto& psi : circle) {
    for (const auto& q : dirs) {
      if (!in_crossing_cone_interior(psi + kh * q)) all_pass = false;
      if (!in_crossing_cone_interior(psi + (2.0 * kh) * q)) any_fail_at_2k = true;
    }
  }
  CHECK(all_pass);
  CHECK(any_fail_at_2k);

  // kappa -> 0+: the leading unit circle itself is interior.
  for (const auto& psi : circle) CHECK(in_crossing_cone_interior(psi));

  CHECK_THROWS_AS(estimate_kappa(d, 10, seed), std::invalid_argument);
}

TEST_CASE("norm cone with the halved estimate stays interior") {
  const SpectralDecomp d = build_decomp(0.0, 2.0, 3);
  const double kh = estimate_kappa(d, 100, 7);
  const NormCone cone{d, kh / 2.0};
  Rng rng(63);
  for (int trial = 0; trial < 500; ++trial) {
    const double ang = rng.uniform(0.0, 2.0 * std::numbers::pi);
    Segment psi = std::cos(ang) * d.v1 + std::sin(ang) * d.v2;
    psi = (1.0 / c1_norm(psi)) * psi;
    Segment q = project_complement(d, unit_c1_direction(rng, 8, d.n));
    q = (1.0 / c1_norm(q)) * q;
    const Segment cand = psi + (rng.uniform(0.0, 0.95) * cone.kappa) * q;
    REQUIRE(in_norm_cone(cone, cand));
    CHECK(in_crossing_cone_interior(cand));
  }
}

TEST_CASE("variational flow preserves the sign-change cone") {
  const Model m = make_model(0.0, FeedbackFamily::Tanh, 2.0);
  Rng rng(64);
  for (int trial = 0; trial < 50; ++trial) {
    const Segment phi = fourier_segment(rng, 5, 0.8);
    const Segment xi = random_in_crossing_cone(rng, 1.0);
    const Trajectory base = evolve(m, phi, 10.0);
    const Trajectory v = variational_evolve(base, xi, 10.0);
    for (double t : {1.0, 3.0, 10.0}) {
      const Segment s = v.segment_at(t);
      CHECK(in_crossing_cone(s));
      if (t >= 3.0) CHECK(in_crossing_cone_interior(s));
    }
  }
}

TEST_CASE("cone invariance along the semiflow") {
  const Model m = make_model(0.0, FeedbackFamily::Tanh, 2.0);
  const Segment phi = make_segment(
      default_grid_n, [](double th) { return th + 0.5; }, [](double) { return 1.0; });
  const auto rep = check_cone_invariance(m, phi, 20.0, 0.25);
  CHECK(rep.ok());
  CHECK(rep.verdicts.size() == 81);

  const auto rep2 = check_cone_invariance(m, constant_segment(default_grid_n, 0.3), 20.0, 0.25);
  CHECK(rep2.ok());

  const Segment rapid =
      make_segment(default_grid_n, [](double th) { return std::cos(3 * std::numbers::pi * th); });
  CHECK_THROWS_AS(check_cone_invariance(m, rapid, 10.0, 0.25), std::invalid_argument);
}

TEST_CASE("order preservation along the semiflow") {
  const Model m = make_model(0.0, FeedbackFamily::Tanh, 2.0);
  Rng rng(65);
  const Segment phi = fourier_segment(rng, 5, 0.7);
  const Segment phit = phi + constant_segment(default_grid_n, 0.1);
  const auto rep = check_order_preservation(m, phi, phit, 20.0, 0.25);
  CHECK(rep.ok());
  for (const auto& v : rep.verdicts) CHECK(v.relation == OrderRelation::Ordered);

  // equal pair: degenerate, reported but not a violation
  const auto repeq = check_order_preservation(m, phi, phi, 5.0, 1.0);
  CHECK(repeq.ok());
  for (const auto& v : repeq.verdicts) CHECK(v.relation == OrderRelation::Equal);

  const Segment bad =
      phi + make_segment(default_grid_n, [](double th) { return std::cos(3 * std::numbers::pi * th); });
  CHECK_THROWS_AS(check_order_preservation(m, phi, bad, 5.0, 1.0), std::invalid_argument);
}
