#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Core>

namespace hrcn {

/// Deterministic random stream with named sub-streams.
///
/// All randomness in a run flows from one root seed. Sub-streams are derived
/// by hashing (seed, label, indices), so trials, noise draws, annealing
/// chains etc. stay reproducible and independent of evaluation order, and
/// identical across standard libraries (no std::*_distribution involved).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  /// Child stream addressed by a label and up to three indices.
  RngStream fork(std::string_view label, std::uint64_t a = 0, std::uint64_t b = 0,
                 std::uint64_t c = 0) const;

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (one value per call).
  double normal();

  Eigen::Vector3d normal3();

  /// Uniform integer in [0, n), n > 0.
  int uniform_int(int n);

 private:
  std::uint64_t state_;
  std::uint64_t origin_;
};

}  // namespace hrcn
