#pragma once

#include <cstdint>
#include <random>

namespace extremo {

// Deterministic random stream addressed by (seed, stream). Streams derived from
// the same seed with distinct ids are independent for practical purposes, which
// lets replications and worker threads draw concurrently without sharing state.
//
// All variates are produced from the raw engine output with fixed arithmetic
// (no std::*_distribution), so a given (seed, stream) yields the same sequence
// on every platform and standard library.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

    // child stream, independent of this one and of other child ids
    RngStream derive(std::uint64_t child) const;

    std::uint64_t raw();

    double uniform01();              // strictly inside (0, 1)
    double normal();                 // standard normal, inverse-CDF method
    double exponential();            // unit mean
    std::uint64_t below(std::uint64_t bound);  // uniform on {0, ..., bound-1}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

}  // namespace extremo
