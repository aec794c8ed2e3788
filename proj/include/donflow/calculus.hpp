#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "donflow/errors.hpp"
#include "donflow/fft.hpp"
#include "donflow/field.hpp"
#include "donflow/rho_context.hpp"

namespace donflow {

// ---------------------------------------------------------------------------
// Exterior derivative: d a = sum_m dx^m ^ (d a / d x_m).

template <int K>
FormField<K + 1> d(const FormField<K>& a) {
    static_assert(K <= 3);
    FormField<K + 1> out(a.grid);
    std::vector<double> deriv(a.npoints());
    for (int m = 0; m < 4; ++m) {
        for (int c = 0; c < FormField<K>::ncomp; ++c) {
            fft::axis_derivative(a.grid, a.comp(c), deriv.data(), m);
            if constexpr (K == 0) {
                double* oc = out.comp(m);
                for (std::size_t i = 0; i < deriv.size(); ++i) oc[i] += deriv[i];
            } else {
                const auto& entry = [&] {
                    if constexpr (K == 1) return g_tables.w11[m][c];
                    else if constexpr (K == 2) return g_tables.w12[m][c];
                    else return g_tables.w13[m][c];
                }();
                if (entry.sign != 0) {
                    double* oc = out.comp(entry.target);
                    const double s = entry.sign;
                    for (std::size_t i = 0; i < deriv.size(); ++i) oc[i] += s * deriv[i];
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Componentwise background Hodge star of a field.

inline FourFormField field_star(const ScalarField& a) {
    FourFormField out(a.grid);
    out.data = a.data;
    return out;
}
inline ScalarField field_star(const FourFormField& a) {
    ScalarField out(a.grid);
    out.data = a.data;
    return out;
}
inline ThreeFormField field_star(const OneFormField& a) {
    ThreeFormField out(a.grid);
    const std::size_t np = a.npoints();
    for (int c = 0; c < 4; ++c) {
        const auto& e = g_tables.s1[c];
        const double* in = a.comp(c);
        double* oc = out.comp(e.target);
        for (std::size_t i = 0; i < np; ++i) oc[i] = e.sign * in[i];
    }
    return out;
}
inline OneFormField field_star(const ThreeFormField& a) {
    OneFormField out(a.grid);
    const std::size_t np = a.npoints();
    for (int c = 0; c < 4; ++c) {
        const auto& e = g_tables.s3[c];
        const double* in = a.comp(c);
        double* oc = out.comp(e.target);
        for (std::size_t i = 0; i < np; ++i) oc[i] = e.sign * in[i];
    }
    return out;
}
inline TwoFormField field_star(const TwoFormField& a) {
    TwoFormField out(a.grid);
    const std::size_t np = a.npoints();
    for (int c = 0; c < 6; ++c) {
        const auto& e = g_tables.s2[c];
        const double* in = a.comp(c);
        double* oc = out.comp(e.target);
        for (std::size_t i = 0; i < np; ++i) oc[i] = e.sign * in[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Background codifferential d* = -*d*, the discrete L2 adjoint of d.

inline ScalarField codifferential(const OneFormField& a) {
    return -field_star(d(field_star(a)));
}
inline OneFormField codifferential(const TwoFormField& a) {
    return -field_star(d(field_star(a)));
}
inline TwoFormField codifferential(const ThreeFormField& a) {
    return -field_star(d(field_star(a)));
}
inline ThreeFormField codifferential(const FourFormField& a) {
    return -field_star(d(field_star(a)));
}

// ---------------------------------------------------------------------------
// Componentwise pseudo-inverse of the positive Hodge Laplacian (flat torus:
// dd* + d*d acts as -sum_m d_m^2 on every coefficient).

template <int K>
FormField<K> inverse_laplacian(const FormField<K>& a) {
    FormField<K> out(a.grid);
    for (int c = 0; c < FormField<K>::ncomp; ++c)
        fft::solve_positive_laplacian(a.grid, a.comp(c), out.comp(c));
    return out;
}

// Mean-zero gauge potential of an exact 2-form: lambda = Lap^{-1} d* a, which
// satisfies d lambda = a (for exact a) and d* lambda = 0.
inline OneFormField exact_potential(const TwoFormField& a) {
    return inverse_laplacian(codifferential(a));
}

// ---------------------------------------------------------------------------
// Hodge decomposition on the torus: constants carry the cohomology class.

struct HodgeParts {
    TwoFormField exact;
    TwoFormValue harmonic;
    TwoFormField coexact_residual;
};

inline HodgeParts hodge_project(const TwoFormField& a) {
    HodgeParts out;
    out.harmonic = component_means(a);
    TwoFormField mean_zero = a - constant_field<2>(a.grid, out.harmonic);
    out.exact = d(inverse_laplacian(codifferential(mean_zero)));
    out.coexact_residual = mean_zero - out.exact;
    return out;
}

// ---------------------------------------------------------------------------
// Per-point contexts of a 2-form field.

struct ContextField {
    std::vector<RhoContext> pts;
    double min_u = 0;
    double max_inv_u = 0;

    explicit ContextField(const TwoFormField& rho, double eps_deg = kDefaultDegeneracyEps) {
        const std::size_t np = rho.npoints();
        pts.reserve(np);
        min_u = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < np; ++i) {
            pts.emplace_back(rho.at(i), eps_deg);
            const double u = pts.back().u();
            min_u = std::min(min_u, u);
            max_inv_u = std::max(max_inv_u, 1.0 / u);
        }
    }
};

inline double min_volume_ratio(const TwoFormField& rho) {
    const std::size_t np = rho.npoints();
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < np; ++i) {
        TwoFormValue v = rho.at(i);
        m = std::min(m, 0.5 * wedge(v, v));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Donaldson inner product of two exact 2-forms at rho:
// <a, b>_rho = integral of lambda_a ^ *^rho lambda_b with the mean-zero
// coclosed gauge potentials lambda = Lap^{-1} d* (.).

inline void require_exact(const TwoFormField& a, const char* who) {
    const double scale = std::max(1.0, l2_norm(a));
    TwoFormValue means = component_means(a);
    const double vol = std::pow(kTwoPi, 4);
    if (std::sqrt(norm2(means) * vol) > 1e-8 * scale)
        throw NotExactError(std::string(who) + ": field has a harmonic part");
    if (l2_norm(d(a)) > 1e-6 * scale)
        throw NotExactError(std::string(who) + ": field is not closed");
}

inline double donaldson_inner(const ContextField& ctx, const TwoFormField& a,
                              const TwoFormField& b) {
    require_exact(a, "donaldson_inner(a)");
    require_exact(b, "donaldson_inner(b)");
    OneFormField la = exact_potential(a);
    OneFormField lb = exact_potential(b);
    const std::size_t np = a.npoints();
    long double s = 0;
    for (std::size_t i = 0; i < np; ++i)
        s += wedge(la.at(i), ctx.pts[i].star1(lb.at(i)));
    return static_cast<double>(s) * a.grid.cell();
}

inline double donaldson_inner(const TwoFormField& rho, const TwoFormField& a,
                              const TwoFormField& b) {
    return donaldson_inner(ContextField(rho), a, b);
}

// ---------------------------------------------------------------------------
// Discrete W^{k,p} norms: (sum_{|alpha|<=k} ||D^alpha field||_p^p)^{1/p},
// pointwise coefficient-euclidean magnitude, p = inf is the max norm.

namespace detail {

inline void multi_indices(int k, std::vector<std::array<int, 4>>& out) {
    for (int a1 = 0; a1 <= k; ++a1)
        for (int a2 = 0; a1 + a2 <= k; ++a2)
            for (int a3 = 0; a1 + a2 + a3 <= k; ++a3)
                for (int a4 = 0; a1 + a2 + a3 + a4 <= k; ++a4)
                    out.push_back({a1, a2, a3, a4});
}

}  // namespace detail

template <int K>
double sobolev_norm(const FormField<K>& f, int k, double p) {
    std::vector<std::array<int, 4>> alphas;
    detail::multi_indices(k, alphas);
    const std::size_t np = f.npoints();
    const bool inf = std::isinf(p);
    double acc = 0;
    std::vector<double> mag(np);
    std::vector<double> buf(np), buf2(np);
    for (const auto& alpha : alphas) {
        std::fill(mag.begin(), mag.end(), 0.0);
        for (int c = 0; c < FormField<K>::ncomp; ++c) {
            const double* src = f.comp(c);
            std::copy(src, src + np, buf.begin());
            for (int axis = 0; axis < 4; ++axis)
                for (int rep = 0; rep < alpha[axis]; ++rep) {
                    fft::axis_derivative(f.grid, buf.data(), buf2.data(), axis);
                    buf.swap(buf2);
                }
            for (std::size_t i = 0; i < np; ++i) mag[i] += buf[i] * buf[i];
        }
        if (inf) {
            for (std::size_t i = 0; i < np; ++i) acc = std::max(acc, std::sqrt(mag[i]));
        } else {
            double s = 0;
            for (std::size_t i = 0; i < np; ++i) s += std::pow(std::sqrt(mag[i]), p);
            acc += s * f.grid.cell();
        }
    }
    return inf ? acc : std::pow(acc, 1.0 / p);
}

}  // namespace donflow
