#include <catch2/catch_amalgamated.hpp>

#include "donflow/forms.hpp"
#include "donflow/frame.hpp"
#include "oracles.hpp"

using namespace donflow;
namespace dt = donflow::testing;

namespace {
template <int K>
double max_abs_diff(const FormValue<K>& a, const FormValue<K>& b) {
    double m = 0;
    for (int i = 0; i < form_dim<K>(); ++i) m = std::max(m, std::abs(a.c[i] - b.c[i]));
    return m;
}
}  // namespace

TEST_CASE("wedge matches fixed orientation conventions") {
    TwoFormValue dx12{}, dx34{}, dx13{}, dx24{};
    dx12.c[0] = 1;
    dx34.c[5] = 1;
    dx13.c[1] = 1;
    dx24.c[4] = 1;
    CHECK(wedge(dx12, dx34) == 1.0);
    CHECK(wedge(dx13, dx24) == -1.0);
}

TEST_CASE("wedge tables agree with the permutation oracle on all basis pairs") {
    CounterRng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        auto a1 = dt::random_form<1>(rng);
        auto b1 = dt::random_form<1>(rng);
        auto a2 = dt::random_form<2>(rng);
        auto b2 = dt::random_form<2>(rng);
        auto a3 = dt::random_form<3>(rng);
        CHECK(max_abs_diff<2>(wedge(a1, b1), dt::wedge_oracle<1, 1>(a1, b1)) < 1e-14);
        CHECK(max_abs_diff<3>(wedge(a1, a2), dt::wedge_oracle<1, 2>(a1, a2)) < 1e-14);
        CHECK(max_abs_diff<3>(wedge(a2, a1), dt::wedge_oracle<2, 1>(a2, a1)) < 1e-14);
        CHECK(std::abs(wedge(a2, b2) - dt::dvol_coeff(dt::wedge_oracle<2, 2>(a2, b2))) < 1e-14);
        CHECK(std::abs(wedge(a1, a3) - dt::dvol_coeff(dt::wedge_oracle<1, 3>(a1, a3))) < 1e-14);
        CHECK(std::abs(wedge(a3, a1) - dt::dvol_coeff(dt::wedge_oracle<3, 1>(a3, a1))) < 1e-14);
    }
}

TEST_CASE("wedge is graded antisymmetric") {
    CounterRng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        auto a1 = dt::random_form<1>(rng);
        auto b1 = dt::random_form<1>(rng);
        auto a2 = dt::random_form<2>(rng);
        auto b2 = dt::random_form<2>(rng);
        auto a3 = dt::random_form<3>(rng);
        CHECK(max_abs_diff<2>(wedge(a1, b1), -wedge(b1, a1)) < 1e-14);
        CHECK(max_abs_diff<3>(wedge(a1, a2), wedge(a2, a1)) < 1e-14);
        CHECK(std::abs(wedge(a2, b2) - wedge(b2, a2)) < 1e-14);
        CHECK(std::abs(wedge(a1, a3) + wedge(a3, a1)) < 1e-14);
    }
}

TEST_CASE("star matches fixed examples") {
    TwoFormValue dx12{};
    dx12.c[0] = 1;
    CHECK(star(dx12).c[5] == 1.0);

    // *(dx2^dx3^dx4) = -dx1, the sign forced by beta ^ *beta = |beta|^2 dvol
    ThreeFormValue dx234{};
    dx234.c[3] = 1;
    OneFormValue s = star(dx234);
    CHECK(s.c[0] == -1.0);
    CHECK(s.c[1] == 0.0);

    const FrameTriple& f = standard_frame();
    for (int i = 0; i < 3; ++i) {
        CHECK(max_abs_diff<2>(star(f.omega[i]), f.omega[i]) == 0.0);
        CHECK(max_abs_diff<2>(star(f.omega_asd[i]), -f.omega_asd[i]) == 0.0);
    }
}

TEST_CASE("star tables agree with the pairing-defined oracle") {
    CounterRng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        auto a1 = dt::random_form<1>(rng);
        auto a2 = dt::random_form<2>(rng);
        auto a3 = dt::random_form<3>(rng);
        CHECK(max_abs_diff<3>(star(a1), dt::star_oracle<1>(a1)) < 1e-14);
        CHECK(max_abs_diff<2>(star(a2), dt::star_oracle<2>(a2)) < 1e-14);
        CHECK(max_abs_diff<1>(star(a3), dt::star_oracle<3>(a3)) < 1e-14);
    }
}

TEST_CASE("star compositions and the pairing identity") {
    CounterRng rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        auto a1 = dt::random_form<1>(rng);
        auto a2 = dt::random_form<2>(rng);
        auto a3 = dt::random_form<3>(rng);
        // beta ^ *beta = |beta|^2 dvol
        CHECK(std::abs(wedge(a1, star(a1)) - norm2(a1)) < 1e-14);
        CHECK(std::abs(wedge(a2, star(a2)) - norm2(a2)) < 1e-14);
        CHECK(std::abs(wedge(a3, star(a3)) - norm2(a3)) < 1e-14);
        // ** = +1 on even degree, -1 on odd
        CHECK(max_abs_diff<2>(star(star(a2)), a2) == 0.0);
        CHECK(max_abs_diff<1>(star(star(a1)), -a1) == 0.0);
        CHECK(max_abs_diff<3>(star(star(a3)), -a3) == 0.0);
    }
}

TEST_CASE("sd_split resums and lands in the star eigenspaces") {
    CounterRng rng(5150);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = dt::random_form<2>(rng);
        auto [plus, minus] = sd_split(a);
        CHECK(max_abs_diff<2>(plus + minus, a) < 1e-15);
        CHECK(max_abs_diff<2>(star(plus), plus) < 1e-15);
        CHECK(max_abs_diff<2>(star(minus), -minus) < 1e-15);
        CHECK(std::abs(norm2(plus) + norm2(minus) - norm2(a)) < 1e-14);
        CHECK(std::abs(norm2(plus) - norm2(minus) - wedge(a, a)) < 1e-14);
    }

    TwoFormValue dx12{};
    dx12.c[0] = 1;
    auto [p, m] = sd_split(dx12);
    CHECK(p.c[0] == 0.5);
    CHECK(p.c[5] == 0.5);
    CHECK(m.c[0] == 0.5);
    CHECK(m.c[5] == -0.5);

    const FrameTriple& f = standard_frame();
    auto [wp, wm] = sd_split(f.omega[0]);
    CHECK(max_abs_diff<2>(wp, f.omega[0]) == 0.0);
    CHECK(norm2(wm) == 0.0);
}

TEST_CASE("frame triple satisfies the quaternion and wedge relations") {
    const FrameTriple& f = standard_frame();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(wedge(f.omega[i], f.omega[j]) - (i == j ? 2.0 : 0.0)) == 0.0);

    for (int i = 0; i < 3; ++i) {
        Mat4 sq = f.J[i] * f.J[i];
        Mat4 minus_id = -1.0 * Mat4::identity();
        for (int k = 0; k < 16; ++k) CHECK(sq.a[k] == minus_id.a[k]);
    }
    // J1 J2 = J3 and cyclic
    for (int i = 0; i < 3; ++i) {
        Mat4 prod = f.J[i] * f.J[(i + 1) % 3];
        for (int k = 0; k < 16; ++k) CHECK(prod.a[k] == f.J[(i + 2) % 3].a[k]);
    }
    // g = omega_i(., J_i .): pairing(X, J Y) = <X, Y>
    for (int i = 0; i < 3; ++i) {
        Mat4 g = FrameTriple::pairing_matrix(f.omega[i]) * f.J[i];
        Mat4 id = Mat4::identity();
        for (int k = 0; k < 16; ++k) CHECK(std::abs(g.a[k] - id.a[k]) == 0.0);
    }
}
