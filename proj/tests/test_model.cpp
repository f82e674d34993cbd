#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dol/model.hpp"

using namespace dol;
using Catch::Approx;

TEST_CASE("family construction") {
  const Model t = make_model(0.0, FeedbackFamily::Tanh, 2.0);
  CHECK(t.mu == 0.0);
  CHECK(t.beta == Approx(2.0));
  CHECK(t.bounded == BoundedSide::Both);
  CHECK(t.sup_f == Approx(2.0));
  CHECK(t.inf_f == Approx(-2.0));

  const Model w = make_model(0.5, FeedbackFamily::Wright, 1.0);
  CHECK(w.beta == Approx(1.0));
  CHECK(w.bounded == BoundedSide::InfFinite);
  CHECK(w.inf_f == Approx(-1.0));

  const Model a = make_model(0.0, FeedbackFamily::Atan, 1.5);
  CHECK(a.beta == Approx(1.5));
  CHECK(a.bounded == BoundedSide::Both);

  CHECK_THROWS_AS(make_model(-1.0, FeedbackFamily::Tanh, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_model(0.0, FeedbackFamily::Tanh, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_model(0.0, FeedbackFamily::Linear, 1.0), std::invalid_argument);
  CHECK_NOTHROW(make_model(0.0, FeedbackFamily::Linear, 1.0, true));
}

TEST_CASE("feedback sign and slope on the validation grid") {
  for (auto fam : {FeedbackFamily::Tanh, FeedbackFamily::Wright, FeedbackFamily::Atan}) {
    for (double alpha : {0.3, 1.0, 2.5}) {
      const Model m = make_model(0.0, fam, alpha);
      CHECK(std::abs(m.f(0.0)) <= 1e-12);
      for (int i = 0; i <= 1000; ++i) {
        const double x = -10.0 + 0.02 * i;
        CHECK(m.f_prime(x) < 0.0);
        if (x != 0.0) CHECK(m.f(x) * x < 0.0);
      }
    }
  }
}

TEST_CASE("dissipativity bound values") {
  const Model t1 = make_model(0.0, FeedbackFamily::Tanh, 1.0);
  CHECK(dissipativity_bound(t1) == Approx(1.0 + std::tanh(1.0)).epsilon(1e-12));

  const Model w1 = make_model(0.0, FeedbackFamily::Wright, 1.0);
  // f(inf f) - inf f = (e - 1) + 1 = e
  CHECK(dissipativity_bound(w1) == Approx(std::exp(1.0)).epsilon(1e-12));

  const Model lin = make_model(0.0, FeedbackFamily::Linear, 1.0, true);
  CHECK_THROWS_AS(dissipativity_bound(lin), std::invalid_argument);
}

TEST_CASE("dissipativity bound is positive whenever defined") {
  for (auto fam : {FeedbackFamily::Tanh, FeedbackFamily::Wright, FeedbackFamily::Atan})
    for (double alpha : {0.1, 0.5, 1.0, 2.0, 5.0})
      for (double mu : {0.0, 0.7, 2.0})
        CHECK(dissipativity_bound(make_model(mu, fam, alpha)) > 0.0);
}
