#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string_view>

namespace mzkit {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Pairwise (cascade) summation. The split points depend only on the length,
/// so the result is reproducible regardless of how callers chunk work.
double pairwise_sum(std::span<const double> values);

/// Reduce an angle to [0, 2pi).
double wrap_angle(double theta);

/// e^{i theta}
inline Complex unit(double theta) { return std::polar(1.0, theta); }

/// Seeded generator with a platform-independent uniform and normal draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double normal();

  /// Standard complex normal (independent real and imaginary parts).
  Complex complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Worker count: MZKIT_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, count) across up to thread_count() threads.
/// Each index is handled exactly once; body must only write to its own slot.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Non-fatal diagnostics (e.g. a polynomial sampled on a generation of lower
/// degree). Defaults to writing to stderr.
using WarningHandler = std::function<void(std::string_view)>;
void set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace mzkit
