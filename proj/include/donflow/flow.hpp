#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "donflow/rho_field_ops.hpp"

namespace donflow {

// ---------------------------------------------------------------------------
// Energy: integral of 2|rho+|^2 / (|rho+|^2 - |rho-|^2). The integrand is
// >= 2 pointwise, so the functional is bounded below by 2 vol(M) with
// equality exactly on self-dual fields.

inline double energy(const TwoFormField& rho, double eps_deg = kDefaultDegeneracyEps) {
    const std::size_t np = rho.npoints();
    long double s = 0;  // extended accumulation: energies feed finite differences
    for (std::size_t i = 0; i < np; ++i) {
        TwoFormValue v = rho.at(i);
        const double u = 0.5 * wedge(v, v);
        if (!(u > eps_deg))
            throw NondegeneracyError("energy: rho degenerates at a grid point");
        s += norm2(sd_part(v)) / u;
    }
    return static_cast<double>(s) * rho.grid.cell();
}

// ---------------------------------------------------------------------------
// Flow right-hand side d *^rho d Theta^rho, evaluated pointwise/spectrally.

inline TwoFormField flow_rhs(const GridSpec& g, const ContextField& ctx) {
    TwoFormField theta = flow_potential_field(g, ctx);
    return d(star3_field(ctx, d(theta)));
}

inline TwoFormField flow_rhs(const TwoFormField& rho,
                             double eps_deg = kDefaultDegeneracyEps) {
    return flow_rhs(rho.grid, ContextField(rho, eps_deg));
}

// ---------------------------------------------------------------------------
// Linearized operator at rho (sign convention: L linearizes the negative of
// the right-hand side, i.e. flow_rhs(rho + e) ~ flow_rhs(rho) - L e):
//   L e = d((1/u) d^{*rho} e) + A e
//   A e = d *^rho((du/u^2) ^ (e + *^rho e)) + d *^rho(d|rho+/u|^2 ^ e)
//         - d star3hat^{rho,e}(d theta^rho)
// with star3hat the analytic derivative of the pointwise 3-form star matrix.

inline TwoFormField flow_linearization(const GridSpec& g, const ContextField& ctx,
                                       const TwoFormField& rhohat) {
    const std::size_t np = rhohat.npoints();

    // (1/u) d^{*rho} rhohat = -(1/u) *^rho d *^rho rhohat
    OneFormField dstar = star3_field(ctx, d(star2_field(ctx, rhohat)));
    for (std::size_t i = 0; i < np; ++i) {
        const double inv_u = 1.0 / ctx.pts[i].u();
        OneFormValue v = dstar.at(i);
        dstar.set(i, (-inv_u) * v);
    }
    TwoFormField result = d(dstar);

    // du/u^2 and d|rho+/u|^2 as 1-form fields
    ScalarField u(g), q(g);
    for (std::size_t i = 0; i < np; ++i) {
        const RhoContext& c = ctx.pts[i];
        u.comp(0)[i] = c.u();
        q.comp(0)[i] = norm2(sd_part(c.rho())) / (c.u() * c.u());
    }
    OneFormField du = d(u);
    OneFormField dq = d(q);
    for (std::size_t i = 0; i < np; ++i) {
        const double inv_u2 = 1.0 / (u.comp(0)[i] * u.comp(0)[i]);
        OneFormValue v = du.at(i);
        du.set(i, inv_u2 * v);
    }

    TwoFormField sym = rhohat + star2_field(ctx, rhohat);
    result += d(star3_field(ctx, wedge_field(du, sym)));
    result += d(star3_field(ctx, wedge_field(dq, rhohat)));

    ThreeFormField dtheta = d(flow_potential_field(g, ctx));
    result -= d(star3_derivative_field(ctx, rhohat, dtheta));
    return result;
}

inline TwoFormField flow_linearization(const TwoFormField& rho, const TwoFormField& rhohat,
                                       double eps_deg = kDefaultDegeneracyEps) {
    return flow_linearization(rho.grid, ContextField(rho, eps_deg), rhohat);
}

// ---------------------------------------------------------------------------
// Time stepping.

enum class Integrator { rk4, imex };

inline std::string to_string(Integrator i) { return i == Integrator::rk4 ? "rk4" : "imex"; }

struct FlowState {
    TwoFormField rho;
    double t = 0.0;
    long step = 0;
};

struct FlowConfig {
    GridSpec grid;
    Integrator integrator = Integrator::rk4;
    double dt = 0.0;   // > 0: fixed step; 0: CFL policy
    double cfl = 0.2;  // CFL factor c_cfl
    double t_end = 1.0;
    int projection_cadence = 10;  // steps between Hodge re-projections
    int output_cadence = 10;      // steps between diagnostics records
    int snapshot_cadence = 0;     // steps between snapshots; 0 = none
    double eps_deg = kDefaultDegeneracyEps;
    double fp_tol = 1e-10;  // semi-implicit inner iteration tolerance
    int fp_max_iter = 50;
    double imex_c = 0.0;  // implicit coefficient; 0 = auto (1.25 max 1/u scale)
    std::uint64_t seed = 1;
};

// Explicit stability margin of the classical 4-stage scheme on the negative
// real axis.
inline constexpr double kRk4RealAxisStability = 2.785;

// dt = c_cfl h^2 min_u / s_max with the stiffness scale
// s_max = kappa * max over the grid of sigma_max(*^rho)/u, where kappa folds
// in the scheme's largest dd* symbol (kappa = Lambda_h h^2 / 2.785). All
// constants here are empirical stability margins, not accuracy claims.
inline double cfl_dt(const GridSpec& g, const ContextField& ctx, double cfl) {
    const double h2 = g.h() * g.h();
    const double kappa = fft::max_laplacian_symbol(g) * h2 / kRk4RealAxisStability;
    double max_sigma_over_u = 0;
    for (const RhoContext& c : ctx.pts)
        max_sigma_over_u =
            std::max(max_sigma_over_u, sigma_max_estimate(c.star1_matrix()) / c.u());
    const double s_max = kappa * max_sigma_over_u;
    return cfl * h2 * ctx.min_u / s_max;
}

namespace detail {

inline void require_finite(const TwoFormField& rho, const char* where) {
    if (!rho.finite()) throw BlowUpError(std::string(where) + ": non-finite value in rho");
}

inline ContextField context_or_blowup(const TwoFormField& rho, double eps_deg,
                                      const char* where) {
    require_finite(rho, where);
    try {
        return ContextField(rho, eps_deg);
    } catch (const NondegeneracyError& e) {
        throw BlowUpError(std::string(where) + ": " + e.what());
    }
}

}  // namespace detail

// Classical 4-stage explicit step on flow_rhs.
inline FlowState step_rk4(const FlowState& state, double dt, const FlowConfig& cfg) {
    const GridSpec& g = state.rho.grid;
    auto eval = [&](const TwoFormField& rho) {
        return flow_rhs(g, detail::context_or_blowup(rho, cfg.eps_deg, "step_rk4"));
    };
    TwoFormField k1 = eval(state.rho);
    TwoFormField k2 = eval(state.rho + (0.5 * dt) * k1);
    TwoFormField k3 = eval(state.rho + (0.5 * dt) * k2);
    TwoFormField k4 = eval(state.rho + dt * k3);
    FlowState next;
    next.rho = state.rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    detail::require_finite(next.rho, "step_rk4");
    next.t = state.t + dt;
    next.step = state.step + 1;
    return next;
}

template <int K>
FormField<K> apply_positive_laplacian(const FormField<K>& a) {
    FormField<K> out(a.grid);
    for (int c = 0; c < FormField<K>::ncomp; ++c)
        fft::apply_multiplier(a.grid, a.comp(c), out.comp(c),
                              [&](int k1, int k2, int k3, int k4) {
                                  return fft::laplacian_symbol(a.grid, k1, k2, k3, k4);
                              });
    return out;
}

// One backward-Euler step with the stiff part frozen to the constant
// coefficient operator c * dd* (spectrally invertible in one pass; on the
// closed fields the integrator works with, dd* and the componentwise
// Laplacian coincide). The remainder flow_rhs + c dd* is handled explicitly
// inside a fixed-point iteration:
//   (I + dt c dd*) rho_{k+1} = rho_n + dt (flow_rhs(rho_k) + c dd* rho_k).
inline FlowState step_imex(const FlowState& state, double dt, const FlowConfig& cfg,
                           std::vector<double>* contraction_ratios = nullptr) {
    const GridSpec& g = state.rho.grid;
    ContextField ctx0 = detail::context_or_blowup(state.rho, cfg.eps_deg, "step_imex");
    double c = cfg.imex_c;
    if (c <= 0.0) {
        double stiff = ctx0.max_inv_u;
        for (const RhoContext& p : ctx0.pts)
            stiff = std::max(stiff, sigma_max_estimate(p.star1_matrix()) / p.u());
        c = 1.25 * stiff;
    }
    const double alpha = dt * c;

    auto implicit_solve = [&](const TwoFormField& b) {
        TwoFormField out(g);
        for (int comp = 0; comp < 6; ++comp)
            fft::solve_shifted_laplacian(g, b.comp(comp), out.comp(comp), alpha);
        return out;
    };

    TwoFormField iterate = state.rho;
    double prev_delta = -1.0;
    const double scale = std::max(1.0, l2_norm(state.rho));
    bool converged = false;
    for (int it = 0; it < cfg.fp_max_iter; ++it) {
        ContextField ctx = detail::context_or_blowup(iterate, cfg.eps_deg, "step_imex");
        TwoFormField explicit_part = flow_rhs(g, ctx) + c * apply_positive_laplacian(iterate);
        TwoFormField next = implicit_solve(state.rho + dt * explicit_part);
        const double delta = l2_norm(next - iterate);
        if (contraction_ratios && prev_delta > 0.0)
            contraction_ratios->push_back(delta / prev_delta);
        iterate = std::move(next);
        if (delta <= cfg.fp_tol * scale) {
            converged = true;
            break;
        }
        prev_delta = delta;
    }
    if (!converged)
        throw FixedPointDivergence("step_imex: inner iteration did not contract to " +
                                   std::to_string(cfg.fp_tol) + " within " +
                                   std::to_string(cfg.fp_max_iter) + " iterations");
    detail::require_finite(iterate, "step_imex");
    FlowState next;
    next.rho = std::move(iterate);
    next.t = state.t + dt;
    next.step = state.step + 1;
    return next;
}

// ---------------------------------------------------------------------------
// Runs and diagnostics.

struct DiagnosticsRecord {
    double t = 0;
    double energy = 0;
    double min_u = 0;
    double norm_drho = 0;
    double harm_drift = 0;
    double grad_norm_sq = 0;  // Donaldson norm squared of the RHS
    double dist_to_min = 0;   // L2 distance to omega_1
    double w1p_norm = 0;      // W^{1,2} norm of rho - omega_1
};

struct RunResult {
    FlowState final;
    std::vector<DiagnosticsRecord> series;
    bool blowup = false;
    std::string blowup_message;
};

using SnapshotSink = std::function<void(const FlowState&)>;

inline DiagnosticsRecord diagnose(const FlowState& state, const TwoFormValue& harmonic0) {
    const GridSpec& g = state.rho.grid;
    ContextField ctx(state.rho);
    DiagnosticsRecord r;
    r.t = state.t;
    r.energy = energy(state.rho);
    r.min_u = ctx.min_u;
    r.norm_drho = l2_norm(d(state.rho));
    TwoFormValue drift = component_means(state.rho) - harmonic0;
    for (int i = 0; i < 6; ++i) r.harm_drift = std::max(r.harm_drift, std::abs(drift.c[i]));
    TwoFormField rhs = flow_rhs(g, ctx);
    r.grad_norm_sq = donaldson_inner(ctx, rhs, rhs);
    TwoFormField dev = state.rho - constant_field<2>(g, standard_frame().omega[0]);
    r.dist_to_min = l2_norm(dev);
    r.w1p_norm = sobolev_norm(dev, 1, 2.0);
    return r;
}

inline RunResult run(const FlowConfig& cfg, const TwoFormField& initial,
                     const SnapshotSink& snapshot_sink = {}) {
    RunResult result;
    FlowState state{initial, 0.0, 0};
    detail::require_finite(initial, "run");
    const TwoFormValue harmonic0 = component_means(initial);

    auto record = [&](const FlowState& s) { result.series.push_back(diagnose(s, harmonic0)); };
    auto snapshot = [&](const FlowState& s) {
        if (snapshot_sink) snapshot_sink(s);
    };

    record(state);
    snapshot(state);
    try {
        while (state.t < cfg.t_end - 1e-14) {
            double dt = cfg.dt;
            if (dt <= 0.0) {
                ContextField ctx = detail::context_or_blowup(state.rho, cfg.eps_deg, "run");
                dt = cfl_dt(state.rho.grid, ctx, cfg.cfl);
            }
            dt = std::min(dt, cfg.t_end - state.t);
            FlowState next = cfg.integrator == Integrator::rk4
                                 ? step_rk4(state, dt, cfg)
                                 : step_imex(state, dt, cfg);
            if (cfg.projection_cadence > 0 && next.step % cfg.projection_cadence == 0) {
                HodgeParts parts = hodge_project(next.rho);
                next.rho = parts.exact + constant_field<2>(next.rho.grid, harmonic0);
            }
            state = std::move(next);
            if (cfg.output_cadence > 0 && state.step % cfg.output_cadence == 0 &&
                state.t < cfg.t_end - 1e-14)
                record(state);
            if (cfg.snapshot_cadence > 0 && state.step % cfg.snapshot_cadence == 0)
                snapshot(state);
        }
        record(state);
        snapshot(state);
    } catch (const BlowUpError& e) {
        result.blowup = true;
        result.blowup_message = e.what();
    }
    result.final = std::move(state);
    return result;
}

// Least-squares slope of log dist_to_min over the second half of a series;
// returns the decay rate (positive for decaying distance).
inline double decay_rate_fit(const std::vector<DiagnosticsRecord>& series) {
    std::vector<std::pair<double, double>> pts;
    if (series.empty()) return 0.0;
    const double t_half = 0.5 * series.back().t;
    for (const auto& r : series)
        if (r.t >= t_half && r.dist_to_min > 0.0) pts.emplace_back(r.t, std::log(r.dist_to_min));
    if (pts.size() < 2) return 0.0;
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (auto [t, y] : pts) {
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double m = static_cast<double>(pts.size());
    const double denom = m * stt - st * st;
    if (denom == 0.0) return 0.0;
    return -(m * sty - st * sy) / denom;
}

}  // namespace donflow
