#include "fsl/verify.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "fsl/analysis.hpp"
#include "fsl/problems.hpp"

namespace fsl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// f(u) = u + u^2 / 2: nonlinear, f'' != 0, so every term of the derivative update is exercised.
Flux quadratic_flux(double u_bound) {
    return Flux{
        [](double u) { return u + 0.5 * u * u; },
        [](double u) { return 1.0 + u; },
        [](double) { return 1.0; },
        1.0 + u_bound,
    };
}

std::string describe(const Interpolation& interp, std::size_t n) {
    return interp.name() + " N=" + std::to_string(n);
}

}  // namespace

TrigPoly TrigPoly::random(std::mt19937_64& rng, int modes) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    TrigPoly p;
    p.c = coef(rng);
    for (int j = 0; j < modes; ++j) {
        p.a.push_back(coef(rng));
        p.b.push_back(coef(rng));
    }
    return p;
}

double TrigPoly::operator()(double x, int k) const {
    double sum = k == 0 ? c : 0.0;
    const double shift = 0.5 * std::numbers::pi * k;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double w = kTwoPi * static_cast<double>(j + 1);
        const double scale = std::pow(w, k);
        sum += scale * (a[j] * std::sin(w * x + shift) + b[j] * std::cos(w * x + shift));
    }
    return sum;
}

bool VerifyReport::all_passed() const {
    for (const auto& c : checks) {
        if (!c.passed) return false;
    }
    return true;
}

double integral_relation_defect(Interpolation interp, std::size_t n, std::mt19937_64& rng) {
    const PeriodicGrid grid = uniform_grid(n);
    const TrigPoly v = TrigPoly::random(rng, 3);
    const TrigPoly w = TrigPoly::random(rng, 3);
    const Interpolant iv = interpolate_function(grid, v, interp);
    const Interpolant iw = interpolate_function(grid, w, interp);
    const int s = interp.s;
    constexpr int refine = 8;

    auto err_s = [&](double x) { return v(x, s) - iv.eval(x, s); };
    auto iw_s = [&](double x) { return iw.eval(x, s); };
    const double lhs = l2_norm([&](double x) { return err_s(x) - iw_s(x); }, grid, refine);
    const double e = l2_norm(err_s, grid, refine);
    const double q = l2_norm(iw_s, grid, refine);
    const double rhs = e * e + q * q;
    return std::abs(lhs * lhs - rhs) / rhs;
}

InterpolationOrders interpolation_orders(Interpolation interp, std::span<const std::size_t> ns) {
    const DerivFn v = [](double x, int k) {
        return std::pow(kTwoPi, k) * std::sin(kTwoPi * x + 0.5 * std::numbers::pi * k);
    };
    const int s = interp.s;
    std::vector<double> hs, l2, semi;
    for (std::size_t n : ns) {
        const PeriodicGrid grid = uniform_grid(n);
        const Interpolant iv = interpolate_function(grid, v, interp);
        hs.push_back(grid.mesh_size());
        l2.push_back(l2_norm([&](double x) { return v(x, 0) - iv.eval(x); }, grid));
        semi.push_back(l2_norm([&](double x) { return v(x, s) - iv.eval(x, s); }, grid));
    }
    return {observed_order(hs, l2), observed_order(hs, semi)};
}

double fixed_point_deviation(Interpolation interp, double c, const Flux& flux, double dt,
                             double nu) {
    const PeriodicGrid grid = uniform_grid(16);
    NodalState state(grid, interp);
    std::fill(state.values.begin(), state.values.end(), c);
    SchemeConfig cfg;
    cfg.nu = nu;
    cfg.dt = dt;
    cfg.t_final = 1.0;
    cfg.interp = interp;
    auto [next, report] = step(state, flux, cfg, Execution::serial());
    double worst = 0.0;
    for (double u : next.values) worst = std::max(worst, std::abs(u - c));
    for (const auto& row : next.derivs) {
        for (double d : row) worst = std::max(worst, std::abs(d));
    }
    return worst;
}

std::pair<double, double> characteristic_slope_check(Interpolation interp) {
    const PeriodicGrid grid = uniform_grid(64);
    // |v'| close to 5 makes dt_1 small enough to be the binding constraint
    const DerivFn v = [](double x, int k) {
        return 0.8 * std::pow(kTwoPi, k) * std::sin(kTwoPi * x + 0.5 * std::numbers::pi * k);
    };
    const Flux flux = burgers_flux();
    const NodalState state = sample_state(grid, v, interp);
    const Interpolant g = build_interpolant(state);
    SchemeConfig cfg;
    cfg.nu = 1e-3;
    cfg.dt = 0.9 * dt_max(flux.lip_bound, sampled_max_abs(g, 1));
    cfg.t_final = 1.0;
    cfg.interp = interp;
    auto [next, report] = step(state, flux, cfg, Execution::serial());
    return characteristic_slope_range(build_interpolant(next), flux, cfg.dt);
}

double derivative_propagation_defect(Interpolation hermite) {
    if (hermite.kind != InterpKind::Hermite) {
        throw ConfigError("derivative propagation applies to Hermite kinds only");
    }
    const PeriodicGrid grid = uniform_grid(32);
    const DerivFn u0 = [](double x, int k) {
        const double sh = 0.5 * std::numbers::pi * k;
        return 0.2 * std::pow(kTwoPi, k) * std::sin(kTwoPi * x + sh) +
               0.05 * std::pow(2.0 * kTwoPi, k) * std::cos(2.0 * kTwoPi * x + sh) +
               (k == 0 ? 0.1 : 0.0);
    };
    const Flux flux = quadratic_flux(0.4);
    SchemeConfig cfg;
    cfg.nu = 1e-3;
    cfg.dt = 1e-2;
    cfg.t_final = 1.0;
    cfg.interp = hermite;
    cfg.newton_tol = 1e-15;
    const NodalState state = sample_state(grid, u0, hermite);
    const Interpolant g = build_interpolant(state);
    auto [next, report] = step(state, flux, cfg, Execution::serial());

    const double delta = std::sqrt(cfg.nu * cfg.dt);
    auto nodal_map = [&](double x) {
        return solve_foot(x, g, flux, cfg.dt, delta, g.eval(x), cfg.newton_tol, 100).u;
    };
    double worst = 0.0;
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const double x = grid.node(m);
        const double e = 1e-3;
        auto d1 = [&](double eps) { return (nodal_map(x + eps) - nodal_map(x - eps)) / (2 * eps); };
        const double v_fd = (4.0 * d1(0.5 * e) - d1(e)) / 3.0;
        worst = std::max(worst, std::abs(v_fd - next.derivs[0][m]));
        if (hermite.s == 3) {
            const double u = nodal_map(x);
            auto d2 = [&](double eps) {
                return (nodal_map(x + eps) - 2.0 * u + nodal_map(x - eps)) / (eps * eps);
            };
            const double w_fd = (4.0 * d2(0.5 * e) - d2(e)) / 3.0;
            worst = std::max(worst, std::abs(w_fd - next.derivs[1][m]));
        }
    }
    return worst;
}

VerifyReport run_verify(std::ostream& log) {
    VerifyReport report;
    auto record = [&](std::string name, bool passed, double measured, double threshold,
                      std::string detail = {}) {
        char line[256];
        std::snprintf(line, sizeof line, "[%s] %-44s measured %.3e  threshold %.3e  %s",
                      passed ? "PASS" : "FAIL", name.c_str(), measured, threshold,
                      detail.c_str());
        log << line << '\n';
        report.checks.push_back({std::move(name), passed, measured, threshold, std::move(detail)});
    };

    const double quad_err = gauss_legendre7().max_monomial_error();
    record("quadrature exactness, degree <= 13", quad_err <= 1e-13, quad_err, 1e-13);

    const Interpolation high_order[] = {Interpolation::spline(2), Interpolation::spline(3),
                                        Interpolation::hermite(2), Interpolation::hermite(3)};
    std::mt19937_64 rng(20240917);
    for (const auto& interp : high_order) {
        for (std::size_t n : {8u, 16u, 32u}) {
            double worst = 0.0;
            for (int trial = 0; trial < 100; ++trial) {
                worst = std::max(worst, integral_relation_defect(interp, n, rng));
            }
            record("integral relation " + describe(interp, n), worst <= 1e-8, worst, 1e-8,
                   "100 trials");
        }
    }

    const std::size_t sweep[] = {20, 40, 80, 160};
    for (const auto& interp : high_order) {
        const auto orders = interpolation_orders(interp, sweep);
        const double l2_min = 2.0 * interp.s - 0.3;
        const double semi_min = interp.s - 0.3;
        record("L2 interpolation order " + interp.name(), orders.l2 >= l2_min, orders.l2, l2_min);
        record("H^s interpolation order " + interp.name(), orders.seminorm >= semi_min,
               orders.seminorm, semi_min);
    }

    const Interpolation all_kinds[] = {Interpolation::linear(), Interpolation::spline(2),
                                       Interpolation::spline(3), Interpolation::hermite(2),
                                       Interpolation::hermite(3)};
    for (const auto& interp : all_kinds) {
        double worst = 0.0;
        for (double c : {-0.7, 0.0, 0.35, 1.2}) {
            worst = std::max(worst, fixed_point_deviation(interp, c, burgers_flux(), 1e-2, 1e-3));
            worst = std::max(worst,
                             fixed_point_deviation(interp, c, quadratic_flux(1.2), 1e-2, 1e-3));
        }
        record("constant fixed point " + interp.name(), worst <= 1e-12, worst, 1e-12);
    }

    for (const auto& interp : high_order) {
        const auto [lo, hi] = characteristic_slope_check(interp);
        const bool ok = lo >= 0.5 && hi <= 1.5;
        char detail[96];
        std::snprintf(detail, sizeof detail, "range [%.4f, %.4f]", lo, hi);
        record("characteristic slope in [1/2,3/2] " + interp.name(), ok,
               std::max(0.5 - lo, hi - 1.5), 0.0, detail);
    }

    for (const auto& interp : {Interpolation::hermite(2), Interpolation::hermite(3)}) {
        const double defect = derivative_propagation_defect(interp);
        record("derivative propagation vs FD " + interp.name(), defect <= 1e-6, defect, 1e-6);
    }
    return report;
}

}  // namespace fsl
