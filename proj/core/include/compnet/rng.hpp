#pragma once

// Counter-based random streams. A root seed is expanded into independent
// streams keyed by (iteration, agent, purpose), so two algorithms run at the
// same seed see the same noise wherever their sampling patterns coincide.

#include <cstdint>
#include <limits>

namespace compnet {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// SplitMix64 generator; satisfies UniformRandomBitGenerator.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

 private:
  std::uint64_t state_;
};

enum class StreamPurpose : std::uint64_t {
  GradientNoise = 1,
  Metrics = 2,
  Initialization = 3,
  Probe = 4,
};

/// Stream for one agent at one iteration. `agent` is the global index
/// (Team-1 agents first, then Team-2 agents).
Stream make_stream(std::uint64_t seed, std::uint64_t iteration, std::uint64_t agent,
                   StreamPurpose purpose = StreamPurpose::GradientNoise) noexcept;

}  // namespace compnet
