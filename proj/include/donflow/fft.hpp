#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "donflow/grid.hpp"

namespace donflow {
namespace fft {

using cplx = std::complex<double>;

// Cached bit-reversal and roots of unity for one transform length.
struct Plan {
    int n = 0;
    std::vector<int> rev;
    std::vector<cplx> roots;  // roots[k] = exp(-2 pi i k / n), k < n/2

    explicit Plan(int n_) : n(n_), rev(n_), roots(n_ / 2) {
        int logn = 0;
        while ((1 << logn) < n) ++logn;
        for (int i = 0; i < n; ++i) {
            int r = 0;
            for (int b = 0; b < logn; ++b)
                if (i & (1 << b)) r |= 1 << (logn - 1 - b);
            rev[i] = r;
        }
        for (int k = 0; k < n / 2; ++k)
            roots[k] = std::polar(1.0, -kTwoPi * k / n);
    }
};

inline const Plan& plan_for(int n) {
    static std::map<int, Plan> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, Plan(n)).first;
    return it->second;
}

// In-place radix-2 transform; inverse includes the 1/n normalization.
inline void transform(cplx* x, int n, bool inverse) {
    const Plan& p = plan_for(n);
    for (int i = 0; i < n; ++i)
        if (i < p.rev[i]) std::swap(x[i], x[p.rev[i]]);
    for (int len = 2; len <= n; len <<= 1) {
        const int step = n / len;
        for (int i = 0; i < n; i += len) {
            for (int j = 0; j < len / 2; ++j) {
                cplx w = p.roots[static_cast<std::size_t>(j) * step];
                if (inverse) w = std::conj(w);
                cplx u = x[i + j];
                cplx v = x[i + j + len / 2] * w;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double s = 1.0 / n;
        for (int i = 0; i < n; ++i) x[i] *= s;
    }
}

// Integer frequency of mode index k on an n-point axis (k - n for the upper
// half, so frequencies run through -n/2..n/2-1).
inline int frequency(int k, int n) { return k < n / 2 ? k : k - n; }

// First-derivative symbol of the differentiation scheme: the discrete
// derivative acts on mode k as multiplication by i*symbol.
inline double derivative_symbol(Scheme scheme, int k, int n, double h) {
    const int f = frequency(k, n);
    if (scheme == Scheme::spectral) {
        // the Nyquist mode has no well-defined odd derivative; it is dropped
        if (k == n / 2) return 0.0;
        return static_cast<double>(f);
    }
    // 4th-order central stencil (8(f_{j+1}-f_{j-1}) - (f_{j+2}-f_{j-2}))/(12h)
    const double t = f * h;
    return (8.0 * std::sin(t) - std::sin(2.0 * t)) / (6.0 * h);
}

namespace detail {

template <typename LineFn>
void for_each_line(const GridSpec& g, int axis, LineFn&& fn) {
    const std::size_t n = static_cast<std::size_t>(g.n);
    const std::size_t stride = g.axis_stride(axis);
    const std::size_t block = stride * n;
    const std::size_t total = g.volume();
    for (std::size_t base = 0; base < total; base += block)
        for (std::size_t inner = 0; inner < stride; ++inner) fn(base + inner, stride);
}

}  // namespace detail

// out = discrete d/dx_axis applied to one scalar component array.
inline void axis_derivative(const GridSpec& g, const double* in, double* out, int axis) {
    const int n = g.n;
    const double h = g.h();
    std::vector<cplx> line(n);
    std::vector<double> sym(n);
    for (int k = 0; k < n; ++k) sym[k] = derivative_symbol(g.scheme, k, n, h);
    detail::for_each_line(g, axis, [&](std::size_t base, std::size_t stride) {
        for (int j = 0; j < n; ++j) line[j] = in[base + j * stride];
        transform(line.data(), n, false);
        for (int k = 0; k < n; ++k) line[k] *= cplx(0.0, sym[k]);
        transform(line.data(), n, true);
        for (int j = 0; j < n; ++j) out[base + j * stride] = line[j].real();
    });
}

// Apply a real multiplier m(k1..k4) in frequency space to one component.
template <typename Multiplier>
void apply_multiplier(const GridSpec& g, const double* in, double* out, Multiplier&& mult) {
    const int n = g.n;
    const std::size_t total = g.volume();
    std::vector<cplx> buf(total);
    for (std::size_t i = 0; i < total; ++i) buf[i] = in[i];
    std::vector<cplx> line(n);
    for (int axis = 0; axis < 4; ++axis) {
        detail::for_each_line(g, axis, [&](std::size_t base, std::size_t stride) {
            for (int j = 0; j < n; ++j) line[j] = buf[base + j * stride];
            transform(line.data(), n, false);
            for (int j = 0; j < n; ++j) buf[base + j * stride] = line[j];
        });
    }
    std::size_t idx = 0;
    for (int k4 = 0; k4 < n; ++k4)
        for (int k3 = 0; k3 < n; ++k3)
            for (int k2 = 0; k2 < n; ++k2)
                for (int k1 = 0; k1 < n; ++k1) buf[idx++] *= mult(k1, k2, k3, k4);
    for (int axis = 0; axis < 4; ++axis) {
        detail::for_each_line(g, axis, [&](std::size_t base, std::size_t stride) {
            for (int j = 0; j < n; ++j) line[j] = buf[base + j * stride];
            transform(line.data(), n, true);
            for (int j = 0; j < n; ++j) buf[base + j * stride] = line[j];
        });
    }
    for (std::size_t i = 0; i < total; ++i) out[i] = buf[i].real();
}

// Scheme-consistent scalar Laplacian symbol sum_m s(k_m)^2.
inline double laplacian_symbol(const GridSpec& g, int k1, int k2, int k3, int k4) {
    const double h = g.h();
    const double s1 = derivative_symbol(g.scheme, k1, g.n, h);
    const double s2 = derivative_symbol(g.scheme, k2, g.n, h);
    const double s3 = derivative_symbol(g.scheme, k3, g.n, h);
    const double s4 = derivative_symbol(g.scheme, k4, g.n, h);
    return s1 * s1 + s2 * s2 + s3 * s3 + s4 * s4;
}

// Pseudo-inverse of the positive Laplacian -sum d^2/dx_m^2: modes with zero
// symbol (the mean, and for central4 the pure-Nyquist modes) map to zero.
inline void solve_positive_laplacian(const GridSpec& g, const double* in, double* out) {
    apply_multiplier(g, in, out, [&](int k1, int k2, int k3, int k4) {
        const double s = laplacian_symbol(g, k1, k2, k3, k4);
        return s > 0.0 ? 1.0 / s : 0.0;
    });
}

// (1 + alpha * positive Laplacian)^{-1}, the implicit half of the
// semi-implicit stepper.
inline void solve_shifted_laplacian(const GridSpec& g, const double* in, double* out,
                                    double alpha) {
    apply_multiplier(g, in, out, [&](int k1, int k2, int k3, int k4) {
        return 1.0 / (1.0 + alpha * laplacian_symbol(g, k1, k2, k3, k4));
    });
}

// Largest value of the discrete dd* symbol, used by the CFL policy.
inline double max_laplacian_symbol(const GridSpec& g) {
    const int n = g.n;
    const double h = g.h();
    double m = 0;
    for (int k = 0; k < n; ++k) {
        const double s = derivative_symbol(g.scheme, k, n, h);
        m = std::max(m, s * s);
    }
    return 4.0 * m;
}

}  // namespace fft
}  // namespace donflow
