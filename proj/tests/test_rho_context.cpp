#include <catch2/catch_amalgamated.hpp>

#include "donflow/rho_context.hpp"
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

double max_abs_diff(const Mat4& a, const Mat4& b) {
    double m = 0;
    for (int i = 0; i < 16; ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
    return m;
}

// Inverse metric Gram on 1-forms implied by the twisted star:
// G^{lm} = (dx^l ^ *^rho dx^m)/dvol.
Mat4 cometric(const RhoContext& ctx) {
    Mat4 g;
    for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m) {
            OneFormValue el{}, em{};
            el.c[l] = 1;
            em.c[m] = 1;
            g(l, m) = wedge(el, ctx.star1(em));
        }
    return g;
}

struct ConstraintSample {
    TwoFormValue theta;
    TwoFormValue rho;
    double lambda;
};

TwoFormValue random_unit_sd(CounterRng& rng) {
    const FrameTriple& f = standard_frame();
    for (;;) {
        double a = rng.next_uniform_sym(), b = rng.next_uniform_sym(), c = rng.next_uniform_sym();
        double n2 = 2.0 * (a * a + b * b + c * c);
        if (n2 < 1e-4) continue;
        double s = 1.0 / std::sqrt(n2);
        return s * a * f.omega[0] + s * b * f.omega[1] + s * c * f.omega[2];
    }
}

TwoFormValue random_asd_with_norm(CounterRng& rng, double norm) {
    const FrameTriple& f = standard_frame();
    for (;;) {
        double a = rng.next_uniform_sym(), b = rng.next_uniform_sym(), c = rng.next_uniform_sym();
        double n2 = 2.0 * (a * a + b * b + c * c);
        if (n2 < 1e-4) continue;
        double s = norm / std::sqrt(n2);
        return s * a * f.omega_asd[0] + s * b * f.omega_asd[1] + s * c * f.omega_asd[2];
    }
}

// Member of the constraint set over theta: rho = lambda theta + rho_minus,
// |rho_minus|^2 = lambda^2 - 1, so rho^rho = dvol.
ConstraintSample constraint_sample(CounterRng& rng, const TwoFormValue& theta, double lambda) {
    ConstraintSample s;
    s.theta = theta;
    s.lambda = lambda;
    s.rho = lambda * theta;
    if (lambda > 1.0) s.rho += random_asd_with_norm(rng, std::sqrt(lambda * lambda - 1.0));
    return s;
}

}  // namespace

TEST_CASE("context volume ratio") {
    const FrameTriple& f = standard_frame();
    CHECK(make_context(f.omega[0]).u() == 1.0);
    CHECK(make_context(2.0 * f.omega[0]).u() == 4.0);

    // u = (|rho+|^2 - |rho-|^2)/2: wedge route vs split route
    TwoFormValue rho = f.omega[0] + 0.3 * f.omega_asd[0];
    auto [plus, minus] = sd_split(rho);
    RhoContext ctx = make_context(rho);
    CHECK(std::abs(ctx.u() - 0.5 * (norm2(plus) - norm2(minus))) < 1e-15);

    CHECK_THROWS_AS(make_context(f.omega_asd[0]), NondegeneracyError);
    CHECK_THROWS_AS(make_context(TwoFormValue{}), NondegeneracyError);
}

TEST_CASE("reflection is an involution that preserves the exterior product") {
    CounterRng rng(42);
    for (int trial = 0; trial < 500; ++trial) {
        TwoFormValue rho = dt::random_nondegenerate(rng);
        RhoContext ctx = make_context(rho);
        CHECK(max_abs_diff<2>(ctx.reflect(rho), -rho) < 1e-12 * std::sqrt(norm2(rho)));

        TwoFormValue a = dt::random_form<2>(rng);
        TwoFormValue b = dt::random_form<2>(rng);
        double scale_a = std::sqrt(norm2(a));
        CHECK(max_abs_diff<2>(ctx.reflect(ctx.reflect(a)), a) < 1e-12 * scale_a);
        CHECK(std::abs(wedge(ctx.reflect(a), ctx.reflect(b)) - wedge(a, b)) <
              1e-12 * std::sqrt(norm2(a) * norm2(b)) + 1e-14);

        // identity on the wedge-orthogonal complement of rho
        TwoFormValue w = dt::random_form<2>(rng);
        w -= (wedge(w, rho) / wedge(rho, rho)) * rho;
        CHECK(std::abs(wedge(w, rho)) < 1e-13 * std::sqrt(norm2(w) * norm2(rho)) + 1e-15);
        CHECK(max_abs_diff<2>(ctx.reflect(w), w) < 1e-12 * std::sqrt(norm2(w)));
    }
}

TEST_CASE("twisted star reduces to the background star in the compatible case") {
    const FrameTriple& f = standard_frame();
    RhoContext ctx = make_context(f.omega[0]);
    CounterRng rng(10);
    for (int trial = 0; trial < 50; ++trial) {
        auto l = dt::random_form<1>(rng);
        auto w = dt::random_form<2>(rng);
        auto e = dt::random_form<3>(rng);
        CHECK(max_abs_diff<3>(ctx.star1(l), star(l)) < 1e-14);
        CHECK(max_abs_diff<2>(ctx.star2(w), star(w)) < 1e-14);
        CHECK(max_abs_diff<1>(ctx.star3(e), star(e)) < 1e-14);
    }
    OneFormValue dx1{};
    dx1.c[0] = 1;
    ThreeFormValue dx234{};
    dx234.c[3] = 1;
    CHECK(max_abs_diff<3>(ctx.star1(dx1), dx234) == 0.0);
}

TEST_CASE("twisted star compositions") {
    CounterRng rng(43);
    for (int trial = 0; trial < 500; ++trial) {
        TwoFormValue rho = dt::random_nondegenerate(rng);
        RhoContext ctx = make_context(rho);

        auto l = dt::random_form<1>(rng);
        CHECK(max_abs_diff<1>(ctx.star3(ctx.star1(l)), -l) < 1e-12 * std::sqrt(norm2(l)));

        auto w = dt::random_form<2>(rng);
        CHECK(max_abs_diff<2>(ctx.star2(ctx.star2(w)), w) < 1e-12 * std::sqrt(norm2(w)));

        // reflect maps background self-dual forms to twisted self-dual forms
        TwoFormValue sd = sd_part(dt::random_form<2>(rng));
        TwoFormValue r = ctx.reflect(sd);
        CHECK(max_abs_diff<2>(ctx.star2(r), r) < 1e-12 * std::sqrt(norm2(r)) + 1e-14);
    }
}

TEST_CASE("twisted star is the Hodge star of a unit-volume metric") {
    CounterRng rng(44);
    for (int trial = 0; trial < 200; ++trial) {
        TwoFormValue rho = dt::random_nondegenerate(rng);
        RhoContext ctx = make_context(rho);
        Mat4 g = cometric(ctx);

        // symmetric positive definite with unit determinant
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) CHECK(std::abs(g(r, c) - g(c, r)) < 1e-11);
        Lu4 lu(g);
        CHECK(std::abs(lu.det - 1.0) < 1e-10);
        CounterRng vr(trial);
        for (int k = 0; k < 5; ++k) {
            Vec4 v{vr.next_uniform_sym(), vr.next_uniform_sym(), vr.next_uniform_sym(),
                   vr.next_uniform_sym()};
            CHECK(dot(v, g * v) > 0.0);
        }

        // the metric star rebuilt from the Gram matrix matches all degrees
        auto l = dt::random_form<1>(rng);
        auto w = dt::random_form<2>(rng);
        auto e = dt::random_form<3>(rng);
        CHECK(max_abs_diff<3>(ctx.star1(l), dt::star_oracle_metric<1>(l, g)) <
              1e-10 * (1 + std::sqrt(norm2(l))));
        CHECK(max_abs_diff<2>(ctx.star2(w), dt::star_oracle_metric<2>(w, g)) <
              1e-10 * (1 + std::sqrt(norm2(w))));
        CHECK(max_abs_diff<1>(ctx.star3(e), dt::star_oracle_metric<3>(e, g)) <
              1e-10 * (1 + std::sqrt(norm2(e))));
    }
}

TEST_CASE("contraction identity: *^rho(rho(X,.)) = -rho ^ X_flat") {
    CounterRng rng(45);
    for (int trial = 0; trial < 200; ++trial) {
        TwoFormValue rho = dt::random_nondegenerate(rng);
        RhoContext ctx = make_context(rho);
        Vec4 x{rng.next_uniform_sym(), rng.next_uniform_sym(), rng.next_uniform_sym(),
               rng.next_uniform_sym()};
        OneFormValue ix_rho{};
        const Mat4& p = ctx.pairing();
        for (int c = 0; c < 4; ++c) {
            double s = 0;
            for (int r = 0; r < 4; ++r) s += x[r] * p(r, c);
            ix_rho.c[c] = s;
        }
        OneFormValue x_flat{};
        for (int i = 0; i < 4; ++i) x_flat.c[i] = x[i];
        ThreeFormValue lhs = ctx.star1(ix_rho);
        ThreeFormValue rhs = -wedge(rho, x_flat);
        CHECK(max_abs_diff<3>(lhs, rhs) < 1e-11 * (1 + std::sqrt(norm2(rho)) * std::sqrt(dot(x, x))));
    }
}

TEST_CASE("flow potential vanishes on self-dual multiples and both routes agree") {
    const FrameTriple& f = standard_frame();
    CHECK(norm2(make_context(f.omega[0]).flow_potential()) == 0.0);
    CHECK(norm2(make_context(3.7 * f.omega[0]).flow_potential()) < 1e-24);
    CHECK(norm2(make_context(0.2 * f.omega[2]).flow_potential()) < 1e-24);

    CounterRng rng(46);
    for (int trial = 0; trial < 500; ++trial) {
        TwoFormValue rho = dt::random_nondegenerate(rng);
        RhoContext ctx = make_context(rho);
        TwoFormValue a = ctx.flow_potential();
        TwoFormValue b = ctx.flow_potential_sd();
        CHECK(max_abs_diff<2>(a, b) < 1e-12 * (1 + std::sqrt(norm2(a))));
    }
}

TEST_CASE("pointwise flow potential derivative matches central differences") {
    CounterRng rng(47);
    for (int trial = 0; trial < 100; ++trial) {
        TwoFormValue rho = dt::random_nondegenerate(rng, 0.4);
        TwoFormValue rhohat = dt::random_form<2>(rng);
        const double eps = 1e-6;
        RhoContext ctx = make_context(rho);
        TwoFormValue fd = (1.0 / (2 * eps)) * (make_context(rho + eps * rhohat).flow_potential() -
                                               make_context(rho - eps * rhohat).flow_potential());
        TwoFormValue an = ctx.flow_potential_derivative(rhohat);
        CHECK(max_abs_diff<2>(fd, an) < 1e-7 * (1 + std::sqrt(norm2(an))));
    }
}

TEST_CASE("twisted star derivative matches central differences") {
    CounterRng rng(48);
    for (int trial = 0; trial < 100; ++trial) {
        TwoFormValue rho = dt::random_nondegenerate(rng, 0.4);
        TwoFormValue rhohat = dt::random_form<2>(rng);
        const double eps = 1e-6;
        RhoContext ctx = make_context(rho);
        Mat4 fd1, fd3;
        {
            RhoContext cp = make_context(rho + eps * rhohat);
            RhoContext cm = make_context(rho - eps * rhohat);
            for (int i = 0; i < 16; ++i) {
                fd1.a[i] = (cp.star1_matrix().a[i] - cm.star1_matrix().a[i]) / (2 * eps);
                fd3.a[i] = (cp.star3_matrix().a[i] - cm.star3_matrix().a[i]) / (2 * eps);
            }
        }
        CHECK(max_abs_diff(fd1, ctx.star1_derivative(rhohat)) < 1e-6);
        CHECK(max_abs_diff(fd3, ctx.star3_derivative(rhohat)) < 1e-6);
    }
}

TEST_CASE("twisted complex structures: compatible case and route agreement") {
    const FrameTriple& f = standard_frame();
    RhoContext ctx = make_context(f.omega[0]);
    CHECK(max_abs_diff(ctx.j_rho(0), f.J[0]) < 1e-14);

    CounterRng rng(49);
    for (int trial = 0; trial < 300; ++trial) {
        TwoFormValue rho = dt::random_nondegenerate(rng);
        RhoContext c = make_context(rho);
        for (int i = 0; i < 3; ++i) {
            Mat4 a = c.j_rho(i);
            Mat4 b = c.j_rho_via_star(i);
            CHECK(max_abs_diff(a, b) < 1e-10 * (1 + sigma_max_estimate(a)));
            // genuine almost complex structure, in particular invertible
            CHECK(max_abs_diff(a * a, -1.0 * Mat4::identity()) < 1e-10 * (1 + sigma_max_estimate(a)));
        }
        // quaternion relations survive the twist
        Mat4 j12 = c.j_rho(0) * c.j_rho(1);
        CHECK(max_abs_diff(j12, c.j_rho(2)) < 1e-10 * (1 + sigma_max_estimate(j12)));
    }
}

TEST_CASE("star identity for the twisted frame: *^rho(lam ^ R omega_i) = lam o J_i^rho") {
    CounterRng rng(50);
    for (int trial = 0; trial < 300; ++trial) {
        TwoFormValue rho = dt::random_nondegenerate(rng);
        RhoContext ctx = make_context(rho);
        OneFormValue lam = dt::random_form<1>(rng);
        for (int i = 0; i < 3; ++i) {
            OneFormValue lhs = ctx.star3(wedge(lam, ctx.reflect(standard_frame().omega[i])));
            Mat4 j = ctx.j_rho(i);
            OneFormValue rhs{};
            for (int c = 0; c < 4; ++c) {
                double s = 0;
                for (int r = 0; r < 4; ++r) s += lam.c[r] * j(r, c);
                rhs.c[c] = s;
            }
            CHECK(max_abs_diff<1>(lhs, rhs) < 1e-10 * (1 + std::sqrt(norm2(lhs))));
        }
    }
}

TEST_CASE("hamiltonian vector field") {
    const FrameTriple& f = standard_frame();
    RhoContext ctx = make_context(f.omega[0]);
    OneFormValue dx2{};
    dx2.c[1] = 1;
    Vec4 x = ctx.hamiltonian_vector(dx2);
    CHECK(std::abs(x[0] - 1.0) < 1e-14);
    CHECK(std::abs(x[1]) + std::abs(x[2]) + std::abs(x[3]) < 1e-14);

    CHECK(dot(ctx.hamiltonian_vector(OneFormValue{}), ctx.hamiltonian_vector(OneFormValue{})) ==
          0.0);

    CounterRng rng(51);
    for (int trial = 0; trial < 300; ++trial) {
        TwoFormValue rho = dt::random_nondegenerate(rng);
        RhoContext c = make_context(rho);
        OneFormValue lam = dt::random_form<1>(rng);
        Vec4 xv = c.hamiltonian_vector(lam);
        // rho(X, .) reproduces lam
        const Mat4& p = c.pairing();
        for (int col = 0; col < 4; ++col) {
            double s = 0;
            for (int r = 0; r < 4; ++r) s += xv[r] * p(r, col);
            CHECK(std::abs(s - lam.c[col]) < 1e-11 * (1 + std::sqrt(dot(xv, xv))));
        }
    }
}

TEST_CASE("negative chords: fixed examples") {
    CounterRng rng(52);
    TwoFormValue theta = random_unit_sd(rng);

    ConstraintSample s1 = constraint_sample(rng, theta, 1.7);
    CHECK(std::abs(negative_chords_defect(theta, s1.rho, s1.rho)) < 1e-13);

    // lambda_1 = lambda_2 = lambda, rho_2^- = -rho_1^-: defect -4(lambda^2-1)
    const double lambda = 1.9;
    TwoFormValue minus = random_asd_with_norm(rng, std::sqrt(lambda * lambda - 1.0));
    TwoFormValue r1 = lambda * theta + minus;
    TwoFormValue r2 = lambda * theta - minus;
    double defect = negative_chords_defect(theta, r1, r2);
    CHECK(std::abs(defect + 4.0 * (lambda * lambda - 1.0)) < 1e-12);
}

TEST_CASE("negative chords: sampler properties") {
    CounterRng rng(53);
    int near_zero_checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        TwoFormValue theta = random_unit_sd(rng);
        double l1 = 1.0 + 2.0 * rng.next_uniform01();
        double l2 = 1.0 + 2.0 * rng.next_uniform01();
        if (trial % 7 == 0) l1 = 1.0;  // boundary of the constraint set
        ConstraintSample a = constraint_sample(rng, theta, l1);
        ConstraintSample b = constraint_sample(rng, theta, l2);
        double defect = negative_chords_defect(theta, a.rho, b.rho);
        CHECK(defect <= 1e-12);
        if (defect > -1e-10) {
            ++near_zero_checked;
            CHECK(max_abs_diff<2>(a.rho, b.rho) < 1e-4);
        }
    }
    // engineered near-equal pairs so the uniqueness implication is exercised
    for (int trial = 0; trial < 200; ++trial) {
        TwoFormValue theta = random_unit_sd(rng);
        double l1 = 1.0 + 2.0 * rng.next_uniform01();
        ConstraintSample a = constraint_sample(rng, theta, l1);
        double delta = std::pow(10.0, -9.0 + 4.0 * rng.next_uniform01());
        double l2 = l1 * (1.0 + delta);
        TwoFormValue minus2 = sd_split(a.rho).minus;
        if (norm2(minus2) > 0) {
            minus2 = (std::sqrt((l2 * l2 - 1.0) / norm2(minus2))) * minus2;
        } else {
            minus2 = random_asd_with_norm(rng, std::sqrt(l2 * l2 - 1.0));
        }
        TwoFormValue rho2 = l2 * theta + minus2;
        double defect = negative_chords_defect(theta, a.rho, rho2);
        CHECK(defect <= 1e-12);
        if (defect > -1e-10) {
            ++near_zero_checked;
            CHECK(max_abs_diff<2>(a.rho, rho2) < 1e-4);
        }
    }
    CHECK(near_zero_checked > 0);
}

TEST_CASE("negative chords: constraint violations are rejected") {
    CounterRng rng(54);
    TwoFormValue theta = random_unit_sd(rng);
    ConstraintSample ok = constraint_sample(rng, theta, 1.5);

    // not self-dual theta
    TwoFormValue bad_theta = theta + 0.1 * standard_frame().omega_asd[0];
    CHECK_THROWS_AS(negative_chords_defect(bad_theta, ok.rho, ok.rho), ConstraintError);

    // wrong normalization
    CHECK_THROWS_AS(negative_chords_defect(1.1 * theta, ok.rho, ok.rho), ConstraintError);

    // lambda < 1
    TwoFormValue shallow = 0.9 * theta + random_asd_with_norm(rng, 0.05);
    CHECK_THROWS_AS(negative_chords_defect(theta, shallow, ok.rho), ConstraintError);

    // rho+ not aligned with theta
    TwoFormValue skew = ok.rho + 0.3 * (standard_frame().omega[0] - inner(standard_frame().omega[0], theta) * theta);
    CHECK_THROWS_AS(negative_chords_defect(theta, skew, ok.rho), ConstraintError);
}
