#pragma once

// Uniform-grid dense output: node values and derivatives with cubic Hermite
// evaluation between nodes.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dol/common.hpp"
#include "dol/segment.hpp"

namespace dol {

class DenseCurve {
 public:
  DenseCurve() = default;

  DenseCurve(double t_begin, int n, std::vector<double> values, std::vector<double> derivs)
      : t0_(t_begin), n_(n), values_(std::move(values)), derivs_(std::move(derivs)) {
    if (values_.size() != derivs_.size() || values_.size() < 2)
      throw std::invalid_argument("dense curve needs matching value/derivative nodes");
  }

  [[nodiscard]] double t_begin() const { return t0_; }
  [[nodiscard]] double t_end() const {
    return t0_ + static_cast<double>(values_.size() - 1) / n_;
  }
  [[nodiscard]] int grid_n() const { return n_; }
  [[nodiscard]] int num_nodes() const { return static_cast<int>(values_.size()); }
  [[nodiscard]] double node_time(int j) const { return t0_ + static_cast<double>(j) / n_; }
  [[nodiscard]] double node_value(int j) const { return values_[j]; }
  [[nodiscard]] double node_deriv(int j) const { return derivs_[j]; }

  [[nodiscard]] double value(double t) const {
    const Locator loc = locate(t);
    if (loc.on_node) return values_[loc.j];
    return detail::hermite_value(values_[loc.j], values_[loc.j + 1], derivs_[loc.j],
                                 derivs_[loc.j + 1], 1.0 / n_, loc.u);
  }

  [[nodiscard]] double derivative(double t) const {
    const Locator loc = locate(t);
    if (loc.on_node) return derivs_[loc.j];
    return detail::hermite_deriv(values_[loc.j], values_[loc.j + 1], derivs_[loc.j],
                                 derivs_[loc.j + 1], 1.0 / n_, loc.u);
  }

 private:
  struct Locator {
    int j;
    double u;
    bool on_node;
  };

  [[nodiscard]] Locator locate(double t) const {
    const double s = (t - t0_) * n_;
    const double slack = 1e-9;
    if (s < -slack || s > values_.size() - 1 + slack)
      throw std::invalid_argument("dense curve evaluated outside its span");
    int j = static_cast<int>(std::floor(s));
    j = std::max(0, std::min(j, num_nodes() - 2));
    double u = s - j;
    if (u < 1e-12) return {j, 0.0, true};
    if (u > 1.0 - 1e-12) return {j + 1, 0.0, true};
    return {j, u, false};
  }

  double t0_ = 0.0;
  int n_ = default_grid_n;
  std::vector<double> values_;
  std::vector<double> derivs_;
};

}  // namespace dol
