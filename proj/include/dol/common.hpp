#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dol {

/// Default grid resolution: subintervals per unit time interval.
inline constexpr int default_grid_n = 256;

/// Thrown when a report-level or run-level invariant fails.
struct invariant_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when an integration leaves the representable range.
struct blowup_error : std::runtime_error {
  double time;
  explicit blowup_error(double t)
      : std::runtime_error("state became non-finite at t = " + std::to_string(t)), time(t) {}
};

/// Small counter-based RNG (splitmix64). Deterministic across platforms,
/// cheap to derive per work item so sweeps are order-independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

/// Per-item RNG so parallel sweeps give identical results in any schedule.
inline Rng derive_rng(std::uint64_t master_seed, std::uint64_t index) {
  Rng mix(master_seed ^ (0xA0761D6478BD642Full * (index + 1)));
  (void)mix.next_u64();
  return mix;
}

}  // namespace dol
