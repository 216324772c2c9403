#pragma once

#include <cstdint>

namespace campaign {

// Counter-based generator: output k is a fixed mix of (seed, stream, k).
// Streams are independent lanes keyed off the same seed, so replication r
// of an experiment can draw from stream r regardless of thread scheduling,
// and any generator can be reconstructed from (seed, stream) alone.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

    // Derive an independent child lane, e.g. one per replication index.
    Rng stream(std::uint64_t substream) const noexcept;

    std::uint64_t next_u64() noexcept;

    // Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept;

    double uniform(double lo, double hi) noexcept;

    // Exponential waiting time with the given rate (rate > 0).
    double exponential(double rate) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_; }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace campaign
