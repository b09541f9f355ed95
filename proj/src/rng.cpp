#include "extremo/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "extremo/normal.hpp"

namespace extremo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed),
      stream_(stream),
      engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream ^ 0xd1b54a32d192ed03ULL))) {}

RngStream RngStream::derive(std::uint64_t child) const {
    return RngStream(seed_, splitmix64(stream_ ^ (child + 0x2545f4914f6cdd1dULL)));
}

std::uint64_t RngStream::raw() { return engine_(); }

double RngStream::uniform01() {
    // 53 significant bits, offset by half an ulp so 0 and 1 are unreachable
    return (static_cast<double>(raw() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() { return std_normal_quantile(uniform01()); }

double RngStream::exponential() { return -std::log(uniform01()); }

std::uint64_t RngStream::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("RngStream::below: bound must be positive");
    // rejection sampling on the top of the range removes modulo bias
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
    std::uint64_t x;
    do {
        x = raw();
    } while (x > limit);
    return x % bound;
}

}  // namespace extremo
