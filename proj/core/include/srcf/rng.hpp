#pragma once

#include <cstdint>
#include <random>

namespace srcf {

/// Deterministic random source identified by a (seed, stream) pair.
///
/// Every stochastic routine in the library draws from an explicitly passed
/// RngStream. Two streams constructed from the same pair produce identical
/// sequences. Substreams are derived by hashing an index into the stream id,
/// so work split across threads stays reproducible as long as each task
/// owns the substream named by its task index.
class RngStream {
 public:
  using Engine = std::mt19937_64;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Independent child stream. Does not advance this stream.
  RngStream substream(std::uint64_t index) const;

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Gamma variate with the given shape and scale.
  double gamma(double shape, double scale = 1.0);

  Engine& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  Engine engine_;
  std::normal_distribution<double> normal_;
};

/// splitmix64 finalizer; used to derive substream ids.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace srcf
