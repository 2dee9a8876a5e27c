#pragma once

#include <cstdint>

namespace tracereg {

/// Counter-based generator: output i of stream s is a SplitMix64 finalizer
/// applied to key(seed, s) + (i + 1) * golden-gamma. Any (seed, stream,
/// position) triple maps to the same bits on every platform, and streams can
/// be split off without advancing the parent.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) built from the top 53 bits of next_u64().
    double uniform();

    /// Independent generator keyed by the same seed and a derived stream id.
    [[nodiscard]] CounterRng split(std::uint64_t substream) const;

    [[nodiscard]] std::uint64_t position() const { return counter_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

} // namespace tracereg
