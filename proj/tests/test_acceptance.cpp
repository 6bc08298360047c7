#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "cli_app.hpp"
#include "fsl/analysis.hpp"
#include "fsl/experiment.hpp"
#include "fsl/verify.hpp"
#include "oracles.hpp"

using namespace fsl;

namespace {

using Clock = std::chrono::steady_clock;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << "  " << detail
              << std::endl;
    CHECK_MESSAGE(pass, "criterion ", criterion, ": ", detail);
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

using Series = std::map<std::string, std::vector<double>>;

Series by_method(const std::vector<ExperimentRow>& rows) {
    Series s;
    for (const auto& r : rows) s[r.method].push_back(r.rel_l2_error.value_or(NAN));
    return s;
}

// Reference errors, rows N = 20..320.
const Series kFig1 = {
    {"linear", {8.285e-01, 6.635e-01, 4.929e-01, 3.203e-01, 1.574e-01}},
    {"spline3", {2.586e-02, 6.341e-03, 1.461e-03, 2.892e-04, 4.806e-05}},
    {"spline5", {1.101e-02, 2.421e-04, 2.654e-05, 1.886e-05, 1.852e-05}},
    {"hermite3", {2.566e-02, 6.268e-03, 1.448e-03, 2.874e-04, 4.787e-05}},
    {"hermite5", {4.139e-03, 1.245e-04, 2.257e-05, 1.863e-05, 1.851e-05}},
};

// Random trigonometric data with two modes.
DerivFn random_profile(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const double c = 0.2 * d(rng), a1 = scale * d(rng), b1 = scale * d(rng), a2 = 0.3 * scale * d(rng),
                 b2 = 0.3 * scale * d(rng);
    return [=](double x, int k) {
        const double w = 2.0 * std::numbers::pi;
        const double shift = 0.5 * std::numbers::pi * k;
        double v = a1 * std::pow(w, k) * std::sin(w * x + shift) + b1 * std::pow(w, k) * std::cos(w * x + shift) +
                   a2 * std::pow(2 * w, k) * std::sin(2 * w * x + shift) +
                   b2 * std::pow(2 * w, k) * std::cos(2 * w * x + shift);
        return k == 0 ? v + c : v;
    };
}

Flux quadratic_flux(double beta) {
    return Flux{[beta](double u) { return u + beta * u * u; }, [beta](double u) { return 1.0 + 2.0 * beta * u; },
                [beta](double) { return 2.0 * beta; }, 0.0};
}

}  // namespace

TEST_CASE("criterion 1: spatial convergence at fixed step count") {
    const auto t0 = Clock::now();
    const auto rows = run_experiment(ExperimentSpec::defaults(ExperimentKind::Fig1));
    const double elapsed = seconds_since(t0);
    const Series got = by_method(rows);
    double worst_low = 0.0, worst_high = 0.0;
    for (const auto& [method, ref] : kFig1) {
        const auto& vals = got.at(method);
        REQUIRE(vals.size() == ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
            const double rel = std::abs(vals[i] - ref[i]) / ref[i];
            double& worst = method.back() == '5' ? worst_high : worst_low;
            worst = std::max(worst, rel);
        }
    }
    const bool pass = worst_low <= 0.05 && worst_high <= 0.10 && elapsed <= 120.0;
    report(1, pass,
           fmt("max rel dev %.3g (linear/cubic, tol 0.05), %.3g (quintic, tol 0.10), %.2f s", worst_low,
               worst_high, elapsed));
    CHECK(got.at("spline3")[2] == doctest::Approx(1.461e-3).epsilon(0.05));
    CHECK(got.at("hermite5")[1] == doctest::Approx(1.245e-4).epsilon(0.10));
    CHECK(got.at("linear")[4] == doctest::Approx(1.574e-1).epsilon(0.05));
}

TEST_CASE("criterion 2: temporal convergence at fixed mesh") {
    const auto rows = run_experiment(ExperimentSpec::defaults(ExperimentKind::Fig2));
    const Series got = by_method(rows);
    const double anchor = got.at("spline3")[4];
    const bool anchor_ok = std::abs(anchor - 5.792e-5) / 5.792e-5 <= 0.05;
    double spread = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        double lo = INFINITY, hi = 0.0;
        for (const char* m : {"spline3", "spline5", "hermite3", "hermite5"}) {
            lo = std::min(lo, got.at(m)[i]);
            hi = std::max(hi, got.at(m)[i]);
        }
        spread = std::max(spread, (hi - lo) / lo);
    }
    const double lin40 = got.at("linear")[1], lin320 = got.at("linear")[4];
    const bool pass = anchor_ok && spread <= 0.01 && lin320 > lin40;
    report(2, pass,
           fmt("spline3 @ 1/320 = %.4e (ref 5.792e-05); high-order spread %.3g; linear 1/40 %.3e", anchor,
               spread, lin40) +
               fmt(" vs 1/320 %.3e", lin320));
}

TEST_CASE("criterion 3: coupled refinement slopes") {
    const auto rows = run_experiment(ExperimentSpec::defaults(ExperimentKind::Fig3));
    const Series got = by_method(rows);
    const std::vector<double> hs{1.0 / 80, 1.0 / 160, 1.0 / 320};
    std::string detail;
    bool pass = true;
    for (const auto& [method, expect] :
         std::vector<std::pair<std::string, double>>{{"linear", 1.0}, {"spline3", 2.0}, {"hermite3", 2.0},
                                                     {"spline5", 3.0}, {"hermite5", 3.0}}) {
        const auto& e = got.at(method);
        const std::vector<double> last(e.end() - 3, e.end());
        const double slope = observed_order(hs, last);
        pass = pass && std::abs(slope - expect) <= 0.3;
        detail += method + fmt(" %.3f (want %.0f)  ", slope, expect);
    }
    report(3, pass, detail);
}

TEST_CASE("criterion 4: truncation defect is first order in time") {
    const auto t0 = Clock::now();
    const BurgersBenchmark b;
    const PeriodicGrid grid = uniform_grid(320);
    const double t1 = truncation_probe(b, burgers_flux(), 0.5, 1e-2, grid);
    const double t2 = truncation_probe(b, burgers_flux(), 0.5, 5e-3, grid);
    const double t3 = truncation_probe(b, burgers_flux(), 0.5, 2.5e-3, grid);
    const double elapsed = seconds_since(t0);
    const double o12 = std::log2(t1 / t2), o23 = std::log2(t2 / t3);
    const bool pass = std::abs(o12 - 1.0) <= 0.2 && std::abs(o23 - 1.0) <= 0.2 && elapsed <= 1.0;
    report(4, pass, fmt("orders %.4f, %.4f; %.3f s", o12, o23, elapsed));
}

TEST_CASE("criterion 5: property suite") {
    std::ostringstream log;
    const VerifyReport r = run_verify(log);
    std::size_t failed = 0;
    for (const auto& c : r.checks) {
        if (!c.passed) {
            ++failed;
            std::cout << "  failed check: " << c.name << " measured " << c.measured << '\n';
        }
    }
    report(5, r.all_passed() && !r.checks.empty(),
           std::to_string(r.checks.size() - failed) + "/" + std::to_string(r.checks.size()) + " checks");
}

TEST_CASE("criterion 6: foot solver and derivative propagation against oracles") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Interpolation kinds[] = {Interpolation::linear(), Interpolation::spline(2), Interpolation::spline(3),
                                   Interpolation::hermite(2), Interpolation::hermite(3)};
    const std::size_t sizes[] = {16, 32, 64};

    double worst_foot = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Interpolation interp = kinds[trial % 5];
        const PeriodicGrid grid = uniform_grid(sizes[(trial / 5) % 3]);
        const NodalState state = sample_state(grid, random_profile(rng, 0.3), interp);
        const Interpolant g = build_interpolant(state);
        const Flux flux = trial % 2 == 0 ? burgers_flux() : quadratic_flux(0.5);
        const double lip = std::abs(flux.f_prime(0.0)) + 1.0 * sampled_max_abs(g, 0);
        const double dt = (0.05 + 0.9 * unit(rng)) * dt_max(lip, sampled_max_abs(g, 1));
        const double delta = std::sqrt((1e-4 + 1e-2 * unit(rng)) * dt);
        const std::size_t m = static_cast<std::size_t>(unit(rng) * grid.size()) % grid.size();
        const double x = grid.node(m);
        const FootSolve got = solve_foot(x, g, flux, dt, delta, state.values[m]);
        worst_foot = std::max(worst_foot, std::abs(got.u - testing::foot_by_bisection(x, g, flux, dt, delta)));
    }

    // Richardson-extrapolated differences of the oracle's nodal map, away from knots of g
    double worst_deriv = 0.0;
    int compared = 0;
    for (int trial = 0; compared < 200 && trial < 5000; ++trial) {
        const Interpolation interp = kinds[3 + trial % 2];
        const PeriodicGrid grid = uniform_grid(32);
        const NodalState state = sample_state(grid, random_profile(rng, 0.2), interp);
        const Interpolant g = build_interpolant(state);
        const Flux flux = trial % 3 == 0 ? burgers_flux() : quadratic_flux(0.5);
        SchemeConfig cfg;
        cfg.interp = interp;
        cfg.nu = 1e-3;
        cfg.dt = 0.5 * dt_max(std::abs(flux.f_prime(0.0)) + sampled_max_abs(g, 0), sampled_max_abs(g, 1));
        cfg.t_final = cfg.dt;
        const double delta = std::sqrt(cfg.nu * cfg.dt);
        const std::size_t m = static_cast<std::size_t>(unit(rng) * 32) % 32;
        const double x = grid.node(m);
        const double u = testing::foot_by_bisection(x, g, flux, cfg.dt, delta);
        const double e1 = 1e-3, e2 = 2e-3;
        // skip stencils whose feet cross a knot
        bool smooth = true;
        for (double sgn : {-1.0, 1.0}) {
            const double z = x - flux.f(u) * cfg.dt + sgn * std::sqrt(2.0) * delta;
            const std::size_t cell = grid.locate(z);
            const double lo = grid.node(cell), hi = grid.cell_right(cell);
            const double local = wrap(z) < lo ? wrap(z) + 1.0 : wrap(z);
            if (local - lo < 0.05 * grid.mesh_size() || hi - local < 0.05 * grid.mesh_size()) smooth = false;
        }
        if (!smooth) continue;
        auto map = [&](double xx) { return testing::foot_by_bisection(xx, g, flux, cfg.dt, delta); };
        auto d1 = [&](double e) { return (map(x + e) - map(x - e)) / (2.0 * e); };
        auto d2 = [&](double e) { return (map(x + e) - 2.0 * u + map(x - e)) / (e * e); };
        const double v_ref = (4.0 * d1(e1 / 2) - d1(e1)) / 3.0;
        const double w_ref = (4.0 * d2(e2 / 2) - d2(e2)) / 3.0;
        const auto [next, rep] = step(state, flux, cfg, Execution::serial());
        worst_deriv = std::max(worst_deriv, std::abs(next.derivs[0][m] - v_ref) / std::max(1.0, std::abs(v_ref)));
        if (interp.s == 3) {
            worst_deriv = std::max(worst_deriv, std::abs(next.derivs[1][m] - w_ref) / std::max(1.0, std::abs(w_ref)));
        }
        ++compared;
    }
    REQUIRE(compared == 200);
    const bool pass = worst_foot <= 1e-12 && worst_deriv <= 1e-6;
    report(6, pass,
           fmt("foot max |diff| %.2e over 1000 instances (tol 1e-12); derivative max rel diff %.2e over %.0f nodes "
               "(tol 1e-6)",
               worst_foot, worst_deriv, compared));
}

TEST_CASE("criterion 7: CSV is independent of the thread count") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto p1 = dir / "fsl_accept_t1.csv", p8 = dir / "fsl_accept_t8.csv";
    std::ostringstream out, err;
    const int c1 = cli::run({"convergence", "--experiment", "fig1", "--threads", "1", "--out", p1.string()}, out, err);
    const int c8 = cli::run({"convergence", "--experiment", "fig1", "--threads", "8", "--out", p8.string()}, out, err);
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    const std::string a = slurp(p1), b = slurp(p8);
    const bool pass = c1 == 0 && c8 == 0 && !a.empty() && a == b;
    report(7, pass, "exit codes " + std::to_string(c1) + "/" + std::to_string(c8) + ", " +
                        std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different"));
    std::filesystem::remove(p1);
    std::filesystem::remove(p8);
}
