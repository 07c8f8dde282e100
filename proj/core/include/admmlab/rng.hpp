#pragma once

#include <cstdint>
#include <random>

namespace admmlab {

/// splitmix64 finalizer; used to spread master seeds over independent streams.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seeded random source. Streams are addressed by (master seed, stream id),
/// so trial t always sees the same numbers regardless of how many other
/// trials exist or which thread runs it.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  double normal();
  double uniform();  // [0, 1)
  bool coin();       // fair

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Reserved stream ids. Empirical trials use ids [0, trials).
inline constexpr std::uint64_t kPredictionStream = 0xC6A4A7935BD1E995ULL;
inline constexpr std::uint64_t kLambdaTuningStream = 0x9E3779B97F4A7C15ULL;

}  // namespace admmlab
