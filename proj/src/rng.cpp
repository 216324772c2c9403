#include "campaign/rng.hpp"

#include <cmath>

namespace campaign {

namespace {

// SplitMix64 finalizer (Stafford variant 13).
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t a, std::uint64_t b) noexcept {
    return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

} // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed), stream_(stream), key_(combine(mix64(seed), stream)), counter_(0) {}

Rng Rng::stream(std::uint64_t substream) const noexcept {
    return Rng(seed_, combine(stream_, substream));
}

std::uint64_t Rng::next_u64() noexcept {
    return mix64(key_ ^ (0x9e3779b97f4a7c15ULL * ++counter_));
}

double Rng::uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform01();
}

double Rng::exponential(double rate) noexcept {
    // 1 - u in (0, 1], so the log is finite.
    return -std::log1p(-uniform01()) / rate;
}

} // namespace campaign
