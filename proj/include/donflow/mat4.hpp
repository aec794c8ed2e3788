#pragma once

#include <array>
#include <cmath>

#include "donflow/errors.hpp"

namespace donflow {

using Vec4 = std::array<double, 4>;

inline Vec4 operator+(const Vec4& a, const Vec4& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
inline Vec4 operator-(const Vec4& a, const Vec4& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}
inline Vec4 operator*(double s, const Vec4& a) {
    return {s * a[0], s * a[1], s * a[2], s * a[3]};
}
inline double dot(const Vec4& a, const Vec4& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

// Dense 4x4 matrix, row major. Big enough for every pointwise solve here;
// factorizations are recomputed on demand.
struct Mat4 {
    std::array<double, 16> a{};

    double& operator()(int r, int c) { return a[4 * r + c]; }
    double operator()(int r, int c) const { return a[4 * r + c]; }

    static Mat4 identity() {
        Mat4 m;
        for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
        return m;
    }

    Mat4 transposed() const {
        Mat4 m;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) m(r, c) = (*this)(c, r);
        return m;
    }

    friend Mat4 operator*(const Mat4& x, const Mat4& y) {
        Mat4 m;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                double s = 0;
                for (int k = 0; k < 4; ++k) s += x(r, k) * y(k, c);
                m(r, c) = s;
            }
        return m;
    }
    friend Vec4 operator*(const Mat4& x, const Vec4& v) {
        Vec4 out{};
        for (int r = 0; r < 4; ++r) {
            double s = 0;
            for (int k = 0; k < 4; ++k) s += x(r, k) * v[k];
            out[r] = s;
        }
        return out;
    }
    friend Mat4 operator+(Mat4 x, const Mat4& y) {
        for (int i = 0; i < 16; ++i) x.a[i] += y.a[i];
        return x;
    }
    friend Mat4 operator-(Mat4 x, const Mat4& y) {
        for (int i = 0; i < 16; ++i) x.a[i] -= y.a[i];
        return x;
    }
    friend Mat4 operator*(double s, Mat4 x) {
        for (int i = 0; i < 16; ++i) x.a[i] *= s;
        return x;
    }
};

// Partially pivoted LU of a 4x4.
struct Lu4 {
    Mat4 lu;
    std::array<int, 4> piv{};
    double det = 0.0;

    explicit Lu4(const Mat4& m) : lu(m) {
        det = 1.0;
        for (int i = 0; i < 4; ++i) piv[i] = i;
        for (int col = 0; col < 4; ++col) {
            int p = col;
            for (int r = col + 1; r < 4; ++r)
                if (std::abs(lu(r, col)) > std::abs(lu(p, col))) p = r;
            if (p != col) {
                for (int c = 0; c < 4; ++c) std::swap(lu.a[4 * p + c], lu.a[4 * col + c]);
                std::swap(piv[p], piv[col]);
                det = -det;
            }
            const double d = lu(col, col);
            det *= d;
            if (d == 0.0) continue;
            for (int r = col + 1; r < 4; ++r) {
                lu(r, col) /= d;
                for (int c = col + 1; c < 4; ++c) lu(r, c) -= lu(r, col) * lu(col, c);
            }
        }
    }

    bool singular(double tol = 0.0) const { return std::abs(det) <= tol; }

    Vec4 solve(const Vec4& b) const {
        Vec4 x{};
        for (int i = 0; i < 4; ++i) x[i] = b[piv[i]];
        for (int r = 1; r < 4; ++r)
            for (int c = 0; c < r; ++c) x[r] -= lu(r, c) * x[c];
        for (int r = 3; r >= 0; --r) {
            for (int c = r + 1; c < 4; ++c) x[r] -= lu(r, c) * x[c];
            x[r] /= lu(r, r);
        }
        return x;
    }

    Mat4 inverse() const {
        Mat4 inv;
        for (int c = 0; c < 4; ++c) {
            Vec4 e{};
            e[c] = 1.0;
            Vec4 col = solve(e);
            for (int r = 0; r < 4; ++r) inv(r, c) = col[r];
        }
        return inv;
    }
};

inline Mat4 solve_right(const Mat4& a, const Mat4& b) {
    // X with a X = b.
    Lu4 lu(a);
    if (lu.singular()) throw SingularStarError("4x4 solve: singular matrix");
    Mat4 x;
    for (int c = 0; c < 4; ++c) {
        Vec4 rhs{};
        for (int r = 0; r < 4; ++r) rhs[r] = b(r, c);
        Vec4 col = lu.solve(rhs);
        for (int r = 0; r < 4; ++r) x(r, c) = col[r];
    }
    return x;
}

// Largest singular value via a few power iterations on M^T M. Deterministic
// start vector; only used as a stiffness proxy, not for precision work.
inline double sigma_max_estimate(const Mat4& m, int iters = 12) {
    Mat4 mtm = m.transposed() * m;
    Vec4 v{0.5, 0.5, 0.5, 0.5};
    double lam = 0;
    for (int it = 0; it < iters; ++it) {
        Vec4 w = mtm * v;
        lam = std::sqrt(dot(w, w));
        if (lam == 0.0) return 0.0;
        v = (1.0 / lam) * w;
    }
    return std::sqrt(lam);
}

}  // namespace donflow
