#pragma once

#include <cstdint>

namespace donflow {

// Counter-based generator: value(i) = splitmix64(seed, i). Stateless apart
// from the seed, so streams are reproducible for any evaluation order and
// any subsequence can be regenerated from (seed, counter) alone. This is the
// generator named in the artifact headers ("splitmix64-counter").
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t raw(std::uint64_t counter) const {
        std::uint64_t z = seed_ + (counter + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform01(std::uint64_t counter) const {
        return static_cast<double>(raw(counter) >> 11) * 0x1.0p-53;
    }

    // Uniform in [-1, 1).
    double uniform_sym(std::uint64_t counter) const { return 2.0 * uniform01(counter) - 1.0; }

    // Sequential draws for callers that just want a stream.
    std::uint64_t next_raw() { return raw(cursor_++); }
    double next_uniform01() { return uniform01(cursor_++); }
    double next_uniform_sym() { return uniform_sym(cursor_++); }

private:
    std::uint64_t seed_;
    std::uint64_t cursor_ = 0;
};

}  // namespace donflow
