#pragma once

// Pointwise rho-dependent operations lifted to whole fields. Everything here
// is a plain map over grid points through the per-point contexts.

#include "donflow/calculus.hpp"

namespace donflow {

inline GridSpec grid_of(const TwoFormField& f) { return f.grid; }

inline ScalarField volume_ratio_field(const GridSpec& g, const ContextField& ctx) {
    ScalarField out(g);
    for (std::size_t i = 0; i < out.npoints(); ++i) out.comp(0)[i] = ctx.pts[i].u();
    return out;
}

inline TwoFormField flow_potential_field(const GridSpec& g, const ContextField& ctx) {
    TwoFormField out(g);
    for (std::size_t i = 0; i < out.npoints(); ++i) out.set(i, ctx.pts[i].flow_potential());
    return out;
}

inline TwoFormField reflect_field(const ContextField& ctx, const TwoFormField& a) {
    TwoFormField out(a.grid);
    for (std::size_t i = 0; i < a.npoints(); ++i) out.set(i, ctx.pts[i].reflect(a.at(i)));
    return out;
}

inline ThreeFormField star1_field(const ContextField& ctx, const OneFormField& a) {
    ThreeFormField out(a.grid);
    for (std::size_t i = 0; i < a.npoints(); ++i) out.set(i, ctx.pts[i].star1(a.at(i)));
    return out;
}

inline TwoFormField star2_field(const ContextField& ctx, const TwoFormField& a) {
    TwoFormField out(a.grid);
    for (std::size_t i = 0; i < a.npoints(); ++i) out.set(i, ctx.pts[i].star2(a.at(i)));
    return out;
}

inline OneFormField star3_field(const ContextField& ctx, const ThreeFormField& a) {
    OneFormField out(a.grid);
    for (std::size_t i = 0; i < a.npoints(); ++i) out.set(i, ctx.pts[i].star3(a.at(i)));
    return out;
}

// Derivative of the 3-form star along the variation rhohat, applied to eta.
inline OneFormField star3_derivative_field(const ContextField& ctx, const TwoFormField& rhohat,
                                           const ThreeFormField& eta) {
    OneFormField out(eta.grid);
    for (std::size_t i = 0; i < eta.npoints(); ++i) {
        Mat4 m = ctx.pts[i].star3_derivative(rhohat.at(i));
        FormValue<3> e = eta.at(i);
        OneFormValue v{};
        for (int r = 0; r < 4; ++r) {
            double s = 0;
            for (int c = 0; c < 4; ++c) s += m(r, c) * e.c[c];
            v.c[r] = s;
        }
        out.set(i, v);
    }
    return out;
}

inline ThreeFormField wedge_field(const OneFormField& a, const TwoFormField& b) {
    ThreeFormField out(a.grid);
    for (std::size_t i = 0; i < a.npoints(); ++i) out.set(i, wedge(a.at(i), b.at(i)));
    return out;
}

inline TwoFormField wedge_field(const OneFormField& a, const OneFormField& b) {
    TwoFormField out(a.grid);
    for (std::size_t i = 0; i < a.npoints(); ++i) out.set(i, wedge(a.at(i), b.at(i)));
    return out;
}

inline FourFormField wedge_field(const TwoFormField& a, const TwoFormField& b) {
    FourFormField out(a.grid);
    for (std::size_t i = 0; i < a.npoints(); ++i) out.comp(0)[i] = wedge(a.at(i), b.at(i));
    return out;
}

inline ScalarField pointwise_multiply(const ScalarField& a, const ScalarField& b) {
    ScalarField out(a.grid);
    for (std::size_t i = 0; i < a.npoints(); ++i) out.comp(0)[i] = a.comp(0)[i] * b.comp(0)[i];
    return out;
}

template <int K>
FormField<K> scale_field(const ScalarField& s, const FormField<K>& a) {
    FormField<K> out(a.grid);
    const std::size_t np = a.npoints();
    for (int c = 0; c < FormField<K>::ncomp; ++c) {
        const double* sc = s.comp(0);
        const double* in = a.comp(c);
        double* oc = out.comp(c);
        for (std::size_t i = 0; i < np; ++i) oc[i] = sc[i] * in[i];
    }
    return out;
}

// Directional derivative sum_m X^m d_m(a) for a pointwise vector field given
// as four scalar components.
template <int K>
FormField<K> directional_derivative(const std::array<std::vector<double>, 4>& x,
                                    const FormField<K>& a) {
    FormField<K> out(a.grid);
    const std::size_t np = a.npoints();
    std::vector<double> deriv(np);
    for (int axis = 0; axis < 4; ++axis)
        for (int c = 0; c < FormField<K>::ncomp; ++c) {
            fft::axis_derivative(a.grid, a.comp(c), deriv.data(), axis);
            double* oc = out.comp(c);
            const double* xv = x[axis].data();
            for (std::size_t i = 0; i < np; ++i) oc[i] += xv[i] * deriv[i];
        }
    return out;
}

// All four axis derivatives of every component of a field, cached for
// pointwise transport terms: grad[axis] is a FormField<K>.
template <int K>
std::array<FormField<K>, 4> gradient(const FormField<K>& a) {
    std::array<FormField<K>, 4> out{FormField<K>(a.grid), FormField<K>(a.grid),
                                    FormField<K>(a.grid), FormField<K>(a.grid)};
    for (int axis = 0; axis < 4; ++axis)
        for (int c = 0; c < FormField<K>::ncomp; ++c)
            fft::axis_derivative(a.grid, a.comp(c), out[axis].comp(c), axis);
    return out;
}

}  // namespace donflow
