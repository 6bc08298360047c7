#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "fsl/core.hpp"
#include "fsl/interpolation.hpp"

namespace fsl {

/// Flux f of u_t + f(u) u_x = nu u_xx, with the derivatives the scheme needs.
struct Flux {
    std::function<double(double)> f;
    std::function<double(double)> f_prime;
    std::function<double(double)> f_second;
    // Bound on |f'| over the solution range.
    double lip_bound = 0.0;
};

struct FootSolve {
    double u = 0.0;
    int iterations = 0;  // residual evaluations, so an exact initial guess costs 1
    double residual = 0.0;
    bool bisected = false;
};

struct StepReport {
    std::vector<int> newton_iters;
    double max_residual = 0.0;
    // dt_1 - dt for the state the step started from.
    double dt_margin = 0.0;
    std::size_t bisection_fallbacks = 0;
};

struct RunReport {
    std::size_t steps = 0;
    std::size_t node_updates = 0;
    std::size_t newton_iters_total = 0;
    std::size_t bisection_fallbacks = 0;
    double max_residual = 0.0;
    double min_dt_margin = 0.0;

    double newton_iters_avg() const {
        return node_updates == 0 ? 0.0
                                 : static_cast<double>(newton_iters_total) /
                                       static_cast<double>(node_updates);
    }
    void merge(const StepReport& step);
};

/// How the per-node update loop runs. Both paths produce bit-identical states.
struct Execution {
    enum class Backend { Serial, OpenMP };
    Backend backend = Backend::OpenMP;
    int threads = 0;  // 0 = OpenMP default

    static Execution serial() { return {Backend::Serial, 1}; }
    static Execution openmp(int threads = 0) { return {Backend::OpenMP, threads}; }
};

/// Step-size bound dt_1 = min{1 / (3 |f'|_inf |v'|_inf), 1} under which the implicit foot
/// equation is uniquely solvable and x -> x - f(w(x)) dt is a bijection.
double dt_max(double flux_lip, double grad_bound);

/// max |d^k g / dx^k| sampled at `per_cell` equispaced points per cell.
double sampled_max_abs(const Interpolant& g, int k, int per_cell = 8);

/// Solves xi = (g(x - f(xi) dt - sqrt2 delta) + g(x - f(xi) dt + sqrt2 delta)) / 2 by Newton's
/// method from u_init, falling back to bisection on an expanding bracket.
/// Throws ConvergenceError tagged with `node` when neither converges.
FootSolve solve_foot(double x, const Interpolant& g, const Flux& flux, double dt, double delta,
                     double u_init, double tol = 1e-13, int max_iter = 50, std::size_t node = 0);

/// One time step: rebuilds the interpolant of `state`, solves every node, and for Hermite
/// kinds propagates nodal derivatives by implicit differentiation of the nodal map.
std::pair<NodalState, StepReport> step(const NodalState& state, const Flux& flux,
                                       const SchemeConfig& config, Execution exec = {});

/// Samples `initial` at t = 0 and applies t_final / dt steps.
std::pair<NodalState, RunReport> run(const DerivFn& initial, const PeriodicGrid& grid,
                                     const Flux& flux, const SchemeConfig& config,
                                     Execution exec = {});

/// [min, max] of 1 - dt f'(w(x)) w'(x), the slope of x -> x - f(w(x)) dt, sampled at
/// `per_cell` points per cell.
std::pair<double, double> characteristic_slope_range(const Interpolant& w, const Flux& flux,
                                                     double dt, int per_cell = 8);

}  // namespace fsl
