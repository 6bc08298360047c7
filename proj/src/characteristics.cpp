#include "fsl/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include <omp.h>

namespace fsl {

void RunReport::merge(const StepReport& s) {
    min_dt_margin = steps == 0 ? s.dt_margin : std::min(min_dt_margin, s.dt_margin);
    ++steps;
    node_updates += s.newton_iters.size();
    for (int it : s.newton_iters) newton_iters_total += static_cast<std::size_t>(it);
    bisection_fallbacks += s.bisection_fallbacks;
    max_residual = std::max(max_residual, s.max_residual);
}

double dt_max(double flux_lip, double grad_bound) {
    if (flux_lip < 0.0 || grad_bound < 0.0) {
        throw DomainError("dt_max bounds must be non-negative");
    }
    const double product = 3.0 * flux_lip * grad_bound;
    if (product == 0.0) return 1.0;
    return std::min(1.0 / product, 1.0);
}

double sampled_max_abs(const Interpolant& g, int k, int per_cell) {
    const auto& grid = g.grid();
    double best = 0.0;
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const double h = grid.cell_width(m);
        for (int j = 0; j < per_cell; ++j) {
            const double x = grid.node(m) + h * static_cast<double>(j) / per_cell;
            best = std::max(best, std::abs(g.eval(x, k)));
        }
    }
    return best;
}

namespace {

struct FootEquation {
    double x;
    const Interpolant& g;
    const Flux& flux;
    double dt;
    double offset;  // sqrt(2) * delta

    double residual(double xi) const {
        const double zc = x - flux.f(xi) * dt;
        return xi - 0.5 * (g.eval(zc - offset) + g.eval(zc + offset));
    }

    double slope(double xi) const {
        const double zc = x - flux.f(xi) * dt;
        return 1.0 + 0.5 * dt * flux.f_prime(xi) * (g.eval(zc - offset, 1) + g.eval(zc + offset, 1));
    }
};

[[noreturn]] void fail(std::size_t node, double residual, const char* why) {
    throw ConvergenceError("foot solve failed at node " + std::to_string(node) + ": " + why +
                               " (residual " + std::to_string(residual) + ")",
                           node, residual);
}

FootSolve bisect(const FootEquation& eq, double u_init, double tol, std::size_t node,
                 int iterations) {
    const double f0 = eq.residual(u_init);
    if (!std::isfinite(f0)) fail(node, f0, "non-finite residual");
    double r = std::max(2.0 * std::abs(f0), 1e-8 * (1.0 + std::abs(u_init)));
    const double r_cap = 10.0 * (1.0 + std::abs(u_init));
    double lo = u_init - r, hi = u_init + r;
    double f_lo = eq.residual(lo), f_hi = eq.residual(hi);
    iterations += 2;
    while (!(f_lo * f_hi <= 0.0)) {
        r *= 2.0;
        if (r > r_cap) fail(node, std::min(std::abs(f_lo), std::abs(f_hi)), "no sign change");
        lo = u_init - r;
        hi = u_init + r;
        f_lo = eq.residual(lo);
        f_hi = eq.residual(hi);
        iterations += 2;
    }
    if (std::abs(f_lo) <= tol) return {lo, iterations, std::abs(f_lo), true};
    if (std::abs(f_hi) <= tol) return {hi, iterations, std::abs(f_hi), true};
    while (true) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = eq.residual(mid);
        ++iterations;
        if (!std::isfinite(f_mid)) fail(node, f_mid, "non-finite residual");
        if (std::abs(f_mid) <= tol) return {mid, iterations, std::abs(f_mid), true};
        if (mid <= lo || mid >= hi) fail(node, std::abs(f_mid), "bracket collapsed above tolerance");
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
}

}  // namespace

FootSolve solve_foot(double x, const Interpolant& g, const Flux& flux, double dt, double delta,
                     double u_init, double tol, int max_iter, std::size_t node) {
    if (!(dt > 0.0)) throw DomainError("solve_foot requires dt > 0");
    if (!std::isfinite(u_init)) throw DomainError("solve_foot requires a finite initial guess");
    const FootEquation eq{x, g, flux, dt, std::sqrt(2.0) * delta};

    double u = u_init;
    double res = eq.residual(u);
    int iters = 1;
    while (std::abs(res) > tol && iters <= max_iter) {
        const double slope = eq.slope(u);
        if (!(slope > 0.0) || !std::isfinite(slope)) break;
        const double next = u - res / slope;
        const double next_res = eq.residual(next);
        ++iters;
        // stalled: the step no longer reduces the residual
        if (!(std::abs(next_res) < std::abs(res))) break;
        u = next;
        res = next_res;
    }
    if (std::abs(res) <= tol) return {u, iters, std::abs(res), false};
    return bisect(eq, u_init, tol, node, iters);
}

namespace {

struct NodeResult {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
    int iters = 0;
    double residual = 0.0;
    bool bisected = false;
};

NodeResult update_node(std::size_t m, const NodalState& state, const Interpolant& g,
                       const Flux& flux, const SchemeConfig& cfg, double delta) {
    const double x = state.grid.node(m);
    const FootSolve foot = solve_foot(x, g, flux, cfg.dt, delta, state.values[m], cfg.newton_tol,
                                      cfg.newton_max_iter, m);
    NodeResult r;
    r.u = foot.u;
    r.iters = foot.iterations;
    r.residual = foot.residual;
    r.bisected = foot.bisected;

    const int rows = state.interp.derivative_rows();
    if (rows == 0) return r;

    const double offset = std::sqrt(2.0) * delta;
    const double zc = x - flux.f(r.u) * cfg.dt;
    const double a = 0.5 * (g.eval(zc - offset, 1) + g.eval(zc + offset, 1));
    const double fp = flux.f_prime(r.u);
    const double denom = 1.0 + cfg.dt * fp * a;
    r.v = a / denom;
    if (rows >= 2) {
        // Differentiate u(x) = avg g(x - f(u(x)) dt +- offset) twice.
        const double b = 0.5 * (g.eval(zc - offset, 2) + g.eval(zc + offset, 2));
        const double xp = 1.0 - cfg.dt * fp * r.v;
        r.w = (b * xp * xp - cfg.dt * a * flux.f_second(r.u) * r.v * r.v) / denom;
    }
    return r;
}

void update_nodes_serial(const NodalState& state, const Interpolant& g, const Flux& flux,
                         const SchemeConfig& cfg, double delta, std::vector<NodeResult>& out) {
    for (std::size_t m = 0; m < out.size(); ++m) {
        out[m] = update_node(m, state, g, flux, cfg, delta);
    }
}

void update_nodes_omp(const NodalState& state, const Interpolant& g, const Flux& flux,
                      const SchemeConfig& cfg, double delta, std::vector<NodeResult>& out,
                      int threads) {
    const long n = static_cast<long>(out.size());
    std::vector<std::exception_ptr> errors(out.size());
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(nt) schedule(static)
    for (long m = 0; m < n; ++m) {
        const auto i = static_cast<std::size_t>(m);
        try {
            out[i] = update_node(i, state, g, flux, cfg, delta);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    // lowest failing node wins, independent of scheduling
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

std::pair<NodalState, StepReport> step(const NodalState& state, const Flux& flux,
                                       const SchemeConfig& config, Execution exec) {
    config.validate();
    state.check();
    if (state.interp != config.interp) {
        throw ConfigError("state interpolation kind does not match scheme configuration");
    }
    const Interpolant g = build_interpolant(state);

    StepReport report;
    report.dt_margin = dt_max(flux.lip_bound, sampled_max_abs(g, 1)) - config.dt;
    if (config.strict_dt_check && report.dt_margin <= 0.0) {
        throw StepSizeError("time step " + std::to_string(config.dt) +
                            " violates dt < dt_1 (margin " + std::to_string(report.dt_margin) +
                            ")");
    }

    const double delta = std::sqrt(config.nu * config.dt);
    std::vector<NodeResult> results(state.grid.size());
    if (exec.backend == Execution::Backend::Serial) {
        update_nodes_serial(state, g, flux, config, delta, results);
    } else {
        update_nodes_omp(state, g, flux, config, delta, results, exec.threads);
    }

    NodalState next(state.grid, state.interp, state.time + config.dt);
    report.newton_iters.resize(results.size());
    for (std::size_t m = 0; m < results.size(); ++m) {
        const auto& r = results[m];
        next.values[m] = r.u;
        if (!next.derivs.empty()) next.derivs[0][m] = r.v;
        if (next.derivs.size() > 1) next.derivs[1][m] = r.w;
        report.newton_iters[m] = r.iters;
        report.max_residual = std::max(report.max_residual, r.residual);
        if (r.bisected) ++report.bisection_fallbacks;
    }
    return {std::move(next), std::move(report)};
}

std::pair<NodalState, RunReport> run(const DerivFn& initial, const PeriodicGrid& grid,
                                     const Flux& flux, const SchemeConfig& config,
                                     Execution exec) {
    const std::size_t n_steps = config.step_count();
    NodalState state = sample_state(grid, initial, config.interp, 0.0);
    RunReport report;
    for (std::size_t n = 1; n <= n_steps; ++n) {
        auto [next, step_report] = step(state, flux, config, exec);
        report.merge(step_report);
        state = std::move(next);
        // t_n = n dt without accumulated rounding
        state.time = static_cast<double>(n) * config.dt;
    }
    return {std::move(state), report};
}

std::pair<double, double> characteristic_slope_range(const Interpolant& w, const Flux& flux,
                                                     double dt, int per_cell) {
    const auto& grid = w.grid();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const double h = grid.cell_width(m);
        for (int j = 0; j < per_cell; ++j) {
            const double x = grid.node(m) + h * static_cast<double>(j) / per_cell;
            const double slope = 1.0 - dt * flux.f_prime(w.eval(x)) * w.eval(x, 1);
            lo = std::min(lo, slope);
            hi = std::max(hi, slope);
        }
    }
    return {lo, hi};
}

}  // namespace fsl
