#pragma once

// Equation data: decay rate mu and a decreasing feedback nonlinearity f with
// f(0) = 0, from a fixed list of families, plus the explicit eventual bound
// on segment norms that the bounded families admit.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dol/common.hpp"

namespace dol {

enum class FeedbackFamily { Tanh, Wright, Atan, Linear };

enum class BoundedSide { SupFinite, InfFinite, Both, Unbounded };

inline const char* to_string(FeedbackFamily f) {
  switch (f) {
    case FeedbackFamily::Tanh: return "tanh";
    case FeedbackFamily::Wright: return "wright";
    case FeedbackFamily::Atan: return "atan";
    default: return "linear";
  }
}

/// Immutable model: x'(t) = -mu x(t) + f(x(t-1)) with f' < 0.
struct Model {
  double mu = 0.0;
  FeedbackFamily family = FeedbackFamily::Tanh;
  double alpha = 1.0;  // family parameter
  BoundedSide bounded = BoundedSide::Both;
  double sup_f = std::numeric_limits<double>::infinity();
  double inf_f = -std::numeric_limits<double>::infinity();
  double beta = 1.0;  // -f'(0) > 0

  [[nodiscard]] double f(double x) const {
    switch (family) {
      case FeedbackFamily::Tanh: return -alpha * std::tanh(x);
      case FeedbackFamily::Wright: return alpha * std::expm1(-x);
      case FeedbackFamily::Atan: return -alpha * std::atan(x);
      default: return -alpha * x;
    }
  }

  [[nodiscard]] double f_prime(double x) const {
    switch (family) {
      case FeedbackFamily::Tanh: {
        const double c = std::cosh(x);
        return -alpha / (c * c);
      }
      case FeedbackFamily::Wright: return -alpha * std::exp(-x);
      case FeedbackFamily::Atan: return -alpha / (1.0 + x * x);
      default: return -alpha;
    }
  }

  [[nodiscard]] std::string spec_string() const {
    return std::string(to_string(family)) + ":" + std::to_string(alpha);
  }
};

/// Build and validate a model. The linear family has no finite bound and is
/// only admitted for integrator exercises behind the explicit flag.
inline Model make_model(double mu, FeedbackFamily family, double alpha,
                        bool allow_unbounded = false) {
  if (mu < 0) throw std::invalid_argument("mu must be nonnegative");
  if (alpha <= 0) throw std::invalid_argument("feedback parameter must be positive");
  Model m;
  m.mu = mu;
  m.family = family;
  m.alpha = alpha;
  switch (family) {
    case FeedbackFamily::Tanh:
      m.bounded = BoundedSide::Both;
      m.sup_f = alpha;
      m.inf_f = -alpha;
      break;
    case FeedbackFamily::Wright:
      m.bounded = BoundedSide::InfFinite;
      m.inf_f = -alpha;
      break;
    case FeedbackFamily::Atan:
      m.bounded = BoundedSide::Both;
      m.sup_f = alpha * std::numbers::pi / 2.0;
      m.inf_f = -m.sup_f;
      break;
    case FeedbackFamily::Linear:
      if (!allow_unbounded)
        throw std::invalid_argument("linear feedback is unbounded; pass allow_unbounded");
      m.bounded = BoundedSide::Unbounded;
      break;
  }
  m.beta = -m.f_prime(0.0);
  if (!(m.beta > 0)) throw std::invalid_argument("feedback slope at 0 must be negative");
  if (std::abs(m.f(0.0)) > 1e-12) throw std::invalid_argument("feedback must vanish at 0");
  // Grid validation of the sign and boundedness hypotheses.
  const int pts = 1001;
  for (int i = 0; i < pts; ++i) {
    const double x = -10.0 + 20.0 * i / (pts - 1);
    if (!(m.f_prime(x) < 0))
      throw std::invalid_argument("feedback derivative not negative at x = " + std::to_string(x));
    const double fx = m.f(x);
    if (fx > m.sup_f + 1e-12 || fx < m.inf_f - 1e-12)
      throw std::invalid_argument("declared bound violated at x = " + std::to_string(x));
  }
  return m;
}

/// Explicit eventual bound on ||x_t||: sup f - f(sup f) when sup f is finite,
/// f(inf f) - inf f when inf f is; the smaller of the two when both are.
inline double dissipativity_bound(const Model& m) {
  const double from_sup = m.sup_f - m.f(m.sup_f);
  const double from_inf = m.f(m.inf_f) - m.inf_f;
  switch (m.bounded) {
    case BoundedSide::SupFinite: return from_sup;
    case BoundedSide::InfFinite: return from_inf;
    case BoundedSide::Both: return std::min(from_sup, from_inf);
    default: throw std::invalid_argument("dissipativity bound needs a bounded feedback");
  }
}

}  // namespace dol
