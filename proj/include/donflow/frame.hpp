#pragma once

#include "donflow/forms.hpp"
#include "donflow/mat4.hpp"

namespace donflow {

// The constant self-dual frame on the flat 4-torus:
//   omega1 = dx12 + dx34, omega2 = dx13 - dx24, omega3 = dx14 + dx23,
// with omega_i ^ omega_j = 2 delta_ij dvol, together with the compatible
// complex structures J_i (g = omega_i(., J_i .), J1 J2 = J3 cyclic).
struct FrameTriple {
    std::array<TwoFormValue, 3> omega;
    std::array<TwoFormValue, 3> omega_asd;  // dx12-dx34, dx13+dx24, dx14-dx23
    std::array<Mat4, 3> J;

    FrameTriple() {
        omega[0].c = {1, 0, 0, 0, 0, 1};
        omega[1].c = {0, 1, 0, 0, -1, 0};
        omega[2].c = {0, 0, 1, 1, 0, 0};
        omega_asd[0].c = {1, 0, 0, 0, 0, -1};
        omega_asd[1].c = {0, 1, 0, 0, 1, 0};
        omega_asd[2].c = {0, 0, 1, -1, 0, 0};
        for (int i = 0; i < 3; ++i) {
            Mat4 p = pairing_matrix(omega[i]);
            // P_i^2 = -I, so J_i = P_i^{-1} = -P_i.
            J[i] = -1.0 * p;
        }
    }

    // Antisymmetric matrix P with w(X, Y) = X^T P Y.
    static Mat4 pairing_matrix(const TwoFormValue& w) {
        static constexpr int pr[6] = {0, 0, 0, 1, 1, 2};
        static constexpr int pc[6] = {1, 2, 3, 2, 3, 3};
        Mat4 p;
        for (int k = 0; k < 6; ++k) {
            p(pr[k], pc[k]) = w.c[k];
            p(pc[k], pr[k]) = -w.c[k];
        }
        return p;
    }
};

inline const FrameTriple& standard_frame() {
    static const FrameTriple frame;
    return frame;
}

}  // namespace donflow
