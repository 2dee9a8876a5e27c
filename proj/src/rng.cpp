#include "tracereg/rng.hpp"

namespace tracereg {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream),
      key_(splitmix64_mix(seed ^ splitmix64_mix(stream * kGolden + 0x632BE59BD9B4E019ULL))) {}

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * kGolden);
}

double CounterRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

CounterRng CounterRng::split(std::uint64_t substream) const {
    return CounterRng(seed_, splitmix64_mix(stream_ + 1) ^ substream);
}

} // namespace tracereg
