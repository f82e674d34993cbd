#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dol/sampling.hpp"
#include "dol/segment.hpp"

using namespace dol;
using Catch::Approx;

namespace {
constexpr double pi = std::numbers::pi;

Segment theta_plus(double c, int n = default_grid_n) {
  return make_segment(
      n, [=](double th) { return th + c; }, [](double) { return 1.0; });
}
}  // namespace

TEST_CASE("sup norm") {
  CHECK(sup_norm(constant_segment(256, 2.0)) == 2.0);
  const Segment s = make_segment(512, [](double th) { return std::sin(pi * th); });
  CHECK(sup_norm(s) == Approx(1.0).margin(1e-4));
  CHECK(sup_norm(constant_segment(256, 0.0)) == 0.0);
}

TEST_CASE("c1 norm") {
  CHECK(c1_norm(constant_segment(256, 2.0)) == 2.0);
  const Segment lin = make_segment(
      256, [](double th) { return th; }, [](double) { return 1.0; });
  CHECK(c1_norm(lin) == Approx(2.0));
  CHECK(c1_norm(constant_segment(256, 0.0)) == 0.0);
  Segment noderivs = make_segment(256, [](double th) { return th; });
  CHECK_THROWS_AS(c1_norm(noderivs), std::invalid_argument);
}

TEST_CASE("sign change counting") {
  CHECK(sign_changes(theta_plus(0.5), 0.0) == 1);
  const Segment c3 = make_segment(256, [](double th) { return std::cos(3 * pi * th); });
  CHECK(sign_changes(c3, 0.0) == 3);
  CHECK_FALSE(sign_changes(constant_segment(256, 0.0), 0.0).has_value());
  // A flat dead-band run at a crossing counts once.
  Segment flat = theta_plus(0.5);
  for (int i = 120; i <= 136; ++i) flat.values[i] = 0.0;
  CHECK(sign_changes(flat, 1e-12) == 1);
}

TEST_CASE("one-sign-change cone membership") {
  CHECK(in_crossing_cone(theta_plus(0.5), 0.0));
  CHECK_FALSE(in_crossing_cone(make_segment(256, [](double th) { return std::cos(3 * pi * th); }),
                               0.0));
  CHECK_FALSE(in_crossing_cone(constant_segment(256, 0.0), 0.0));
}

TEST_CASE("cone interior in C1") {
  CHECK(in_crossing_cone_interior(theta_plus(0.5)));
  // zero at the right endpoint with a flat derivative: boundary
  const Segment sq = make_segment(
      256, [](double th) { return th * th; }, [](double th) { return 2 * th; });
  CHECK_FALSE(in_crossing_cone_interior(sq));
  CHECK(in_crossing_cone_interior(constant_segment(256, 1.0)));
  // endpoint zero with nonzero slope is interior
  CHECK(in_crossing_cone_interior(theta_plus(1.0)));
  // endpoint zero with flat slope is boundary
  const Segment sq0 = make_segment(
      256, [](double th) { return (th + 1) * (th + 1); }, [](double th) { return 2 * (th + 1); });
  CHECK_FALSE(in_crossing_cone_interior(sq0));
  Segment noderivs = make_segment(256, [](double th) { return th; });
  CHECK_THROWS_AS(in_crossing_cone_interior(noderivs, 0.0), std::invalid_argument);
}

TEST_CASE("strict sign windows") {
  CHECK(strictly_signed(constant_segment(256, 0.1), +1));
  CHECK_FALSE(strictly_signed(theta_plus(0.5), +1));
  CHECK_FALSE(strictly_signed(constant_segment(256, 0.0), -1));
}

TEST_CASE("order relation") {
  const Segment a = constant_segment(256, 0.1);
  const Segment z = constant_segment(256, 0.0);
  CHECK(order_relation(a, z) == OrderRelation::Ordered);
  const Segment c3 = make_segment(256, [](double th) { return std::cos(3 * pi * th); });
  CHECK(order_relation(c3, z) == OrderRelation::Unordered);
  CHECK(order_relation(a, a) == OrderRelation::Equal);
  Segment other = constant_segment(128, 0.1);
  CHECK_THROWS_AS(order_relation(a, other), std::invalid_argument);
}

TEST_CASE("cone predicates are scale invariant") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Segment s = trial % 2 ? random_in_crossing_cone(rng, 1.0)
                                : fourier_segment(rng, 5, 1.0);
    const auto base = sign_changes(s, default_deadband(s));
    for (double k : {2.0, -3.0, 0.5, -1.0}) {
      const Segment ks = k * s;
      CHECK(sign_changes(ks, default_deadband(ks)) == base);
      CHECK(in_crossing_cone_interior(ks) == in_crossing_cone_interior(s));
    }
  }
}

TEST_CASE("interior implies membership") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Segment s = trial % 2 ? random_in_crossing_cone(rng, 1.0)
                                : fourier_segment(rng, 6, 1.0);
    if (in_crossing_cone_interior(s)) CHECK(in_crossing_cone(s));
  }
}

TEST_CASE("order relation is symmetric") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const Segment a = fourier_segment(rng, 4, 1.0);
    const Segment b = trial % 2 ? fourier_segment(rng, 4, 1.0)
                                : a + random_in_crossing_cone(rng, 0.5);
    CHECK(order_relation(a, b) == order_relation(b, a));
  }
}

TEST_CASE("value/derivative consistency guard") {
  Segment ok = make_segment(
      256, [](double th) { return std::sin(2 * pi * th); },
      [](double th) { return 2 * pi * std::cos(2 * pi * th); });
  CHECK_NOTHROW(validate_segment(ok));
  Segment bad = ok;
  for (double& d : bad.derivs) d = -d;  // garbled derivative data
  CHECK_THROWS_AS(validate_segment(bad), std::invalid_argument);
  Segment nan_seg = ok;
  nan_seg.values[3] = std::nan("");
  CHECK_THROWS_AS(validate_segment(nan_seg), std::invalid_argument);
}
