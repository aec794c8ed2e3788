#pragma once

#include <cmath>
#include <vector>

#include "donflow/forms.hpp"
#include "donflow/grid.hpp"

namespace donflow {

// Field of k-forms on the lattice: one scalar array per basis coefficient,
// component-major, x1 fastest. Plain value semantics throughout.
template <int K>
struct FormField {
    static constexpr int ncomp = form_dim<K>();

    GridSpec grid;
    std::vector<double> data;

    FormField() = default;
    explicit FormField(const GridSpec& g)
        : grid(g), data(static_cast<std::size_t>(ncomp) * g.volume(), 0.0) {}

    std::size_t npoints() const { return grid.volume(); }
    double* comp(int c) { return data.data() + static_cast<std::size_t>(c) * npoints(); }
    const double* comp(int c) const {
        return data.data() + static_cast<std::size_t>(c) * npoints();
    }

    FormValue<K> at(std::size_t idx) const {
        FormValue<K> v;
        const std::size_t np = npoints();
        for (int c = 0; c < ncomp; ++c) v.c[c] = data[c * np + idx];
        return v;
    }
    void set(std::size_t idx, const FormValue<K>& v) {
        const std::size_t np = npoints();
        for (int c = 0; c < ncomp; ++c) data[c * np + idx] = v.c[c];
    }

    FormField& operator+=(const FormField& o) {
        for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
        return *this;
    }
    FormField& operator-=(const FormField& o) {
        for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
        return *this;
    }
    FormField& operator*=(double s) {
        for (double& v : data) v *= s;
        return *this;
    }
    friend FormField operator+(FormField a, const FormField& b) { return a += b; }
    friend FormField operator-(FormField a, const FormField& b) { return a -= b; }
    friend FormField operator*(double s, FormField a) { return a *= s; }
    friend FormField operator-(FormField a) { return a *= -1.0; }

    bool finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

using ScalarField = FormField<0>;
using OneFormField = FormField<1>;
using TwoFormField = FormField<2>;
using ThreeFormField = FormField<3>;
using FourFormField = FormField<4>;

// Constant field from one pointwise value.
template <int K>
FormField<K> constant_field(const GridSpec& g, const FormValue<K>& v) {
    FormField<K> f(g);
    const std::size_t np = f.npoints();
    for (int c = 0; c < FormField<K>::ncomp; ++c)
        for (std::size_t i = 0; i < np; ++i) f.comp(c)[i] = v.c[c];
    return f;
}

// Exact periodic quadrature of the pointwise inner product.
template <int K>
double l2_inner(const FormField<K>& a, const FormField<K>& b) {
    long double s = 0;  // fixed sequential reduction, extended precision
    for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
    return static_cast<double>(s) * a.grid.cell();
}

template <int K>
double l2_norm(const FormField<K>& a) {
    return std::sqrt(l2_inner(a, a));
}

template <int K>
double linf_norm(const FormField<K>& a) {
    double m = 0;
    for (double v : a.data) m = std::max(m, std::abs(v));
    return m;
}

template <int K>
FormValue<K> component_means(const FormField<K>& a) {
    FormValue<K> v{};
    const std::size_t np = a.npoints();
    for (int c = 0; c < FormField<K>::ncomp; ++c) {
        double s = 0;
        const double* p = a.comp(c);
        for (std::size_t i = 0; i < np; ++i) s += p[i];
        v.c[c] = s / static_cast<double>(np);
    }
    return v;
}

// Evaluate fn(x1,x2,x3,x4) at the grid nodes x = h * index.
template <typename Fn>
ScalarField sample_scalar(const GridSpec& g, Fn&& fn) {
    ScalarField f(g);
    const int n = g.n;
    const double h = g.h();
    for (int x4 = 0; x4 < n; ++x4)
        for (int x3 = 0; x3 < n; ++x3)
            for (int x2 = 0; x2 < n; ++x2)
                for (int x1 = 0; x1 < n; ++x1)
                    f.comp(0)[g.index(x1, x2, x3, x4)] = fn(h * x1, h * x2, h * x3, h * x4);
    return f;
}

}  // namespace donflow
