#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "donflow/calculus.hpp"
#include "donflow/rng.hpp"

namespace donflow {

enum class InitialKind { perturbed_min, custom_snapshot };

struct InitialConfig {
    InitialKind kind = InitialKind::perturbed_min;
    double amplitude = 0.01;       // epsilon in omega_1 + eps d(lambda)
    int max_mode = 2;              // per-axis frequency band limit
    std::uint64_t seed = 1;
    std::array<double, 3> harmonic_shift{0.0, 0.0, 0.0};
    std::string snapshot_path;     // for custom_snapshot
    double min_u_floor = 0.1;
};

namespace detail {

struct Mode {
    std::array<int, 4> k;
    std::array<double, 4> cos_amp;  // per 1-form component
    std::array<double, 4> sin_amp;
};

// Seeded trigonometric coefficients on the half lattice of nonzero modes with
// per-axis |k| <= m (first nonzero frequency positive, so each real mode is
// drawn once). Counter-indexed draws keep the continuum field independent of
// the evaluation grid.
inline std::vector<Mode> seeded_modes(int m, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<Mode> out;
    std::uint64_t mode_index = 0;
    for (int k1 = -m; k1 <= m; ++k1)
        for (int k2 = -m; k2 <= m; ++k2)
            for (int k3 = -m; k3 <= m; ++k3)
                for (int k4 = -m; k4 <= m; ++k4) {
                    const std::array<int, 4> k{k1, k2, k3, k4};
                    int first = 0;
                    for (int v : k)
                        if (v != 0) {
                            first = v;
                            break;
                        }
                    if (first <= 0) continue;  // zero mode or conjugate half
                    Mode mode;
                    mode.k = k;
                    for (int c = 0; c < 4; ++c) {
                        mode.cos_amp[c] = rng.uniform_sym(8 * mode_index + 2 * c);
                        mode.sin_amp[c] = rng.uniform_sym(8 * mode_index + 2 * c + 1);
                    }
                    out.push_back(mode);
                    ++mode_index;
                }
    return out;
}

// Unit W^{1,2} normalization from the closed-form norm of a trig polynomial:
// ||lam||^2 = vol/2 sum (a^2+b^2), ||grad lam||^2 = vol/2 sum |k|^2 (a^2+b^2).
inline void normalize_w12(std::vector<Mode>& modes) {
    const double vol = std::pow(kTwoPi, 4);
    double s = 0;
    for (const Mode& mo : modes) {
        double k2 = 0;
        for (int v : mo.k) k2 += static_cast<double>(v) * v;
        for (int c = 0; c < 4; ++c)
            s += (1.0 + k2) * (mo.cos_amp[c] * mo.cos_amp[c] + mo.sin_amp[c] * mo.sin_amp[c]);
    }
    s *= 0.5 * vol;
    if (s <= 0) return;
    const double inv = 1.0 / std::sqrt(s);
    for (Mode& mo : modes)
        for (int c = 0; c < 4; ++c) {
            mo.cos_amp[c] *= inv;
            mo.sin_amp[c] *= inv;
        }
}

// d(lambda) evaluated analytically on the grid: the (m<c) coefficient is
// d_m lam_c - d_c lam_m with d_m lam_c = sum_k k_m (-a sin + b cos).
inline TwoFormField exact_perturbation(const GridSpec& g, const std::vector<Mode>& modes) {
    TwoFormField out(g);
    const int n = g.n;
    const double h = g.h();
    static constexpr int pr[6] = {0, 0, 0, 1, 1, 2};
    static constexpr int pc[6] = {1, 2, 3, 2, 3, 3};
    for (int x4 = 0; x4 < n; ++x4)
        for (int x3 = 0; x3 < n; ++x3)
            for (int x2 = 0; x2 < n; ++x2)
                for (int x1 = 0; x1 < n; ++x1) {
                    const std::size_t idx = g.index(x1, x2, x3, x4);
                    std::array<std::array<double, 4>, 4> grad{};  // grad[m][c] = d_m lam_c
                    const double xs[4] = {h * x1, h * x2, h * x3, h * x4};
                    for (const Mode& mo : modes) {
                        const double phase = mo.k[0] * xs[0] + mo.k[1] * xs[1] +
                                             mo.k[2] * xs[2] + mo.k[3] * xs[3];
                        const double sp = std::sin(phase), cp = std::cos(phase);
                        for (int c = 0; c < 4; ++c) {
                            const double amp = -mo.cos_amp[c] * sp + mo.sin_amp[c] * cp;
                            for (int m = 0; m < 4; ++m)
                                if (mo.k[m] != 0) grad[m][c] += mo.k[m] * amp;
                        }
                    }
                    TwoFormValue v{};
                    for (int comp = 0; comp < 6; ++comp)
                        v.c[comp] = grad[pr[comp]][pc[comp]] - grad[pc[comp]][pr[comp]];
                    out.set(idx, v);
                }
    return out;
}

}  // namespace detail

// rho_0 = omega_1 + sum_i shift_i omega_i + amplitude * d(lambda) with lambda
// a seeded band-limited 1-form of unit W^{1,2} norm. Deterministic in the
// seed; the same seed describes the same continuum field on every grid.
inline TwoFormField generate_initial(const GridSpec& g, const InitialConfig& ic) {
    if (ic.amplitude < 0) throw ConfigError("initial amplitude must be >= 0", "init.amplitude");
    if (ic.max_mode >= g.n / 2)
        throw ConfigError("init.max_mode must stay below the grid Nyquist band (n/2)",
                          "init.max_mode");
    const FrameTriple& f = standard_frame();
    TwoFormValue base = f.omega[0];
    for (int i = 0; i < 3; ++i) base += ic.harmonic_shift[i] * f.omega[i];
    TwoFormField rho = constant_field<2>(g, base);
    if (ic.amplitude > 0) {
        std::vector<detail::Mode> modes = detail::seeded_modes(ic.max_mode, ic.seed);
        detail::normalize_w12(modes);
        rho += ic.amplitude * detail::exact_perturbation(g, modes);
    }
    const double mu = min_volume_ratio(rho);
    if (mu <= ic.min_u_floor)
        throw DegenerateInitialError("generated initial condition has min u = " +
                                     std::to_string(mu) + " <= " +
                                     std::to_string(ic.min_u_floor));
    return rho;
}

}  // namespace donflow
