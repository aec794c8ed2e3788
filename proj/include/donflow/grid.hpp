#pragma once

#include <cstddef>
#include <string>

#include "donflow/errors.hpp"

namespace donflow {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class Scheme { spectral, central4 };

inline std::string to_string(Scheme s) {
    return s == Scheme::spectral ? "spectral" : "central4";
}

inline Scheme scheme_from_string(const std::string& s) {
    if (s == "spectral") return Scheme::spectral;
    if (s == "central4") return Scheme::central4;
    throw ConfigError("unknown differentiation scheme '" + s + "'", "grid.scheme");
}

// Periodic n^4 lattice on (R/2piZ)^4. n is a power of two so every axis
// transform is radix-2; h n = 2pi by construction.
struct GridSpec {
    int n = 8;
    Scheme scheme = Scheme::spectral;

    GridSpec() = default;
    GridSpec(int n_, Scheme scheme_) : n(n_), scheme(scheme_) {
        if (n < 4 || (n & (n - 1)) != 0)
            throw ConfigError("grid.n must be a power of two >= 4, got " + std::to_string(n),
                              "grid.n");
    }

    double h() const { return kTwoPi / n; }
    std::size_t volume() const {
        return static_cast<std::size_t>(n) * n * n * n;
    }
    double cell() const {
        double hh = h();
        return hh * hh * hh * hh;
    }

    // idx = x1 + n (x2 + n (x3 + n x4)), x1 fastest
    std::size_t index(int x1, int x2, int x3, int x4) const {
        return static_cast<std::size_t>(x1) +
               static_cast<std::size_t>(n) *
                   (static_cast<std::size_t>(x2) +
                    static_cast<std::size_t>(n) *
                        (static_cast<std::size_t>(x3) + static_cast<std::size_t>(n) * x4));
    }

    std::size_t axis_stride(int axis) const {
        std::size_t s = 1;
        for (int i = 0; i < axis; ++i) s *= static_cast<std::size_t>(n);
        return s;
    }

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.n == b.n && a.scheme == b.scheme;
    }
};

}  // namespace donflow
