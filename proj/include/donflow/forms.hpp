#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace donflow {

// Exterior algebra of an oriented Euclidean R^4 tangent space, in the
// coordinate (orthonormal) basis. Basis k-tuples are increasing and ordered
// lexicographically:
//   k=1: [1,2,3,4]
//   k=2: [12,13,14,23,24,34]
//   k=3: [123,124,134,234]
// A 4-form is reported as the scalar mu with value = mu * dvol,
// dvol = dx1^dx2^dx3^dx4.

inline constexpr int kDim4 = 4;

constexpr int binom4(int k) {
    constexpr int c[5] = {1, 4, 6, 4, 1};
    return c[k];
}

template <int K>
constexpr int form_dim() {
    static_assert(K >= 0 && K <= 4);
    return binom4(K);
}

namespace detail {

template <int K>
using IndexTuple = std::array<int, K>;

// Increasing K-tuples out of {0,1,2,3} in lexicographic order.
template <int K>
constexpr std::array<IndexTuple<K>, binom4(K)> make_basis_tuples() {
    std::array<IndexTuple<K>, binom4(K)> out{};
    if constexpr (K == 0) {
        return out;
    } else {
        int pos = 0;
        IndexTuple<K> t{};
        // odometer enumeration
        for (int i = 0; i < K; ++i) t[i] = i;
        while (true) {
            out[pos++] = t;
            int j = K - 1;
            while (j >= 0 && t[j] == kDim4 - K + j) --j;
            if (j < 0) break;
            ++t[j];
            for (int i = j + 1; i < K; ++i) t[i] = t[i - 1] + 1;
        }
        return out;
    }
}

// Sign of the permutation sorting (a, b) into increasing order; 0 when the
// concatenation has a repeated index.
template <int J, int K>
constexpr int merge_sign(const IndexTuple<J>& a, const IndexTuple<K>& b) {
    std::array<int, J + K> m{};
    for (int i = 0; i < J; ++i) m[i] = a[i];
    for (int i = 0; i < K; ++i) m[J + i] = b[i];
    int sign = 1;
    for (int i = 0; i < J + K; ++i) {
        for (int j = i + 1; j < J + K; ++j) {
            if (m[i] == m[j]) return 0;
            if (m[i] > m[j]) sign = -sign;
        }
    }
    return sign;
}

template <int K>
constexpr int tuple_index(const IndexTuple<K>& sorted) {
    constexpr auto basis = make_basis_tuples<K>();
    for (int i = 0; i < binom4(K); ++i) {
        bool eq = true;
        for (int j = 0; j < K; ++j) eq = eq && basis[i][j] == sorted[j];
        if (eq) return i;
    }
    return -1;
}

template <int K>
constexpr IndexTuple<K> sort_tuple(IndexTuple<K> t) {
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j)
            if (t[j] < t[i]) {
                int tmp = t[i];
                t[i] = t[j];
                t[j] = tmp;
            }
    return t;
}

struct WedgeEntry {
    int target = -1;  // basis index in degree J+K; -1 when the product dies
    int sign = 0;
};

template <int J, int K>
constexpr std::array<std::array<WedgeEntry, binom4(K)>, binom4(J)> make_wedge_table() {
    std::array<std::array<WedgeEntry, binom4(K)>, binom4(J)> out{};
    constexpr auto ba = make_basis_tuples<J>();
    constexpr auto bb = make_basis_tuples<K>();
    for (int i = 0; i < binom4(J); ++i) {
        for (int j = 0; j < binom4(K); ++j) {
            int s = merge_sign<J, K>(ba[i], bb[j]);
            if (s == 0) continue;
            IndexTuple<J + K> m{};
            for (int q = 0; q < J; ++q) m[q] = ba[i][q];
            for (int q = 0; q < K; ++q) m[J + q] = bb[j][q];
            m = sort_tuple<J + K>(m);
            out[i][j] = WedgeEntry{tuple_index<J + K>(m), s};
        }
    }
    return out;
}

struct StarEntry {
    int target = 0;
    int sign = 1;
};

// *e_I = s e_{I^c} with s the sign of the permutation (I, I^c), so that
// e_I ^ *e_I = dvol.
template <int K>
constexpr std::array<StarEntry, binom4(K)> make_star_table() {
    std::array<StarEntry, binom4(K)> out{};
    constexpr auto basis = make_basis_tuples<K>();
    for (int i = 0; i < binom4(K); ++i) {
        IndexTuple<4 - K> comp{};
        int pos = 0;
        for (int v = 0; v < kDim4; ++v) {
            bool in = false;
            for (int q = 0; q < K; ++q) in = in || basis[i][q] == v;
            if (!in) comp[pos++] = v;
        }
        out[i] = StarEntry{tuple_index<4 - K>(comp), merge_sign<K, 4 - K>(basis[i], comp)};
    }
    return out;
}

}  // namespace detail

// The sign tables driving all pointwise exterior algebra. Collected in one
// mutable (constinit) instance so the invariant checker can inject a sign bug
// through mutate_star_sign_for_testing() and prove it would catch one. Apart
// from that test hook the tables are immutable after static initialization.
struct SignTables {
    decltype(detail::make_wedge_table<1, 1>()) w11 = detail::make_wedge_table<1, 1>();
    decltype(detail::make_wedge_table<1, 2>()) w12 = detail::make_wedge_table<1, 2>();
    decltype(detail::make_wedge_table<2, 1>()) w21 = detail::make_wedge_table<2, 1>();
    decltype(detail::make_wedge_table<1, 3>()) w13 = detail::make_wedge_table<1, 3>();
    decltype(detail::make_wedge_table<3, 1>()) w31 = detail::make_wedge_table<3, 1>();
    decltype(detail::make_wedge_table<2, 2>()) w22 = detail::make_wedge_table<2, 2>();
    decltype(detail::make_star_table<1>()) s1 = detail::make_star_table<1>();
    decltype(detail::make_star_table<2>()) s2 = detail::make_star_table<2>();
    decltype(detail::make_star_table<3>()) s3 = detail::make_star_table<3>();
};

inline constinit SignTables g_tables{};

// Test hook: flip one sign in the 2-form star table.
inline void mutate_star_sign_for_testing() { g_tables.s2[0].sign = -g_tables.s2[0].sign; }

template <int K>
struct FormValue {
    static_assert(K >= 0 && K <= 4);
    std::array<double, form_dim<K>()> c{};

    double& operator[](int i) { return c[i]; }
    double operator[](int i) const { return c[i]; }

    FormValue& operator+=(const FormValue& o) {
        for (int i = 0; i < form_dim<K>(); ++i) c[i] += o.c[i];
        return *this;
    }
    FormValue& operator-=(const FormValue& o) {
        for (int i = 0; i < form_dim<K>(); ++i) c[i] -= o.c[i];
        return *this;
    }
    FormValue& operator*=(double s) {
        for (int i = 0; i < form_dim<K>(); ++i) c[i] *= s;
        return *this;
    }
    friend FormValue operator+(FormValue a, const FormValue& b) { return a += b; }
    friend FormValue operator-(FormValue a, const FormValue& b) { return a -= b; }
    friend FormValue operator*(double s, FormValue a) { return a *= s; }
    friend FormValue operator*(FormValue a, double s) { return a *= s; }
    friend FormValue operator-(FormValue a) { return a *= -1.0; }
};

using OneFormValue = FormValue<1>;
using TwoFormValue = FormValue<2>;
using ThreeFormValue = FormValue<3>;

// Pointwise inner product in the orthonormal coefficient basis.
template <int K>
inline double inner(const FormValue<K>& a, const FormValue<K>& b) {
    double s = 0;
    for (int i = 0; i < form_dim<K>(); ++i) s += a.c[i] * b.c[i];
    return s;
}

template <int K>
inline double norm2(const FormValue<K>& a) {
    return inner(a, a);
}

namespace detail {

template <int J, int K, typename Table>
inline FormValue<J + K> wedge_impl(const FormValue<J>& a, const FormValue<K>& b,
                                   const Table& table) {
    FormValue<J + K> out{};
    for (int i = 0; i < form_dim<J>(); ++i) {
        if (a.c[i] == 0.0) continue;
        for (int j = 0; j < form_dim<K>(); ++j) {
            const auto& e = table[i][j];
            if (e.sign != 0) out.c[e.target] += e.sign * a.c[i] * b.c[j];
        }
    }
    return out;
}

}  // namespace detail

inline TwoFormValue wedge(const OneFormValue& a, const OneFormValue& b) {
    return detail::wedge_impl<1, 1>(a, b, g_tables.w11);
}
inline ThreeFormValue wedge(const OneFormValue& a, const TwoFormValue& b) {
    return detail::wedge_impl<1, 2>(a, b, g_tables.w12);
}
inline ThreeFormValue wedge(const TwoFormValue& a, const OneFormValue& b) {
    return detail::wedge_impl<2, 1>(a, b, g_tables.w21);
}
// 4-form results are returned as the dvol coefficient.
inline double wedge(const OneFormValue& a, const ThreeFormValue& b) {
    return detail::wedge_impl<1, 3>(a, b, g_tables.w13).c[0];
}
inline double wedge(const ThreeFormValue& a, const OneFormValue& b) {
    return detail::wedge_impl<3, 1>(a, b, g_tables.w31).c[0];
}
inline double wedge(const TwoFormValue& a, const TwoFormValue& b) {
    return detail::wedge_impl<2, 2>(a, b, g_tables.w22).c[0];
}

// Background Hodge star for the standard metric and orientation.
inline ThreeFormValue star(const OneFormValue& a) {
    ThreeFormValue out{};
    for (int i = 0; i < 4; ++i) out.c[g_tables.s1[i].target] = g_tables.s1[i].sign * a.c[i];
    return out;
}
inline TwoFormValue star(const TwoFormValue& a) {
    TwoFormValue out{};
    for (int i = 0; i < 6; ++i) out.c[g_tables.s2[i].target] = g_tables.s2[i].sign * a.c[i];
    return out;
}
inline OneFormValue star(const ThreeFormValue& a) {
    OneFormValue out{};
    for (int i = 0; i < 4; ++i) out.c[g_tables.s3[i].target] = g_tables.s3[i].sign * a.c[i];
    return out;
}

struct SdSplit {
    TwoFormValue plus;
    TwoFormValue minus;
};

// a = a+ + a-, *a+ = a+, *a- = -a-.
inline SdSplit sd_split(const TwoFormValue& a) {
    TwoFormValue sa = star(a);
    SdSplit out;
    for (int i = 0; i < 6; ++i) {
        out.plus.c[i] = 0.5 * (a.c[i] + sa.c[i]);
        out.minus.c[i] = 0.5 * (a.c[i] - sa.c[i]);
    }
    return out;
}

inline TwoFormValue sd_part(const TwoFormValue& a) { return sd_split(a).plus; }

}  // namespace donflow
