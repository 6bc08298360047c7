#include "fsl/analysis.hpp"

#include <cmath>

namespace fsl {

double QuadratureRule::max_monomial_error() const {
    double worst = 0.0;
    for (int k = 0; k <= 13; ++k) {
        double sum = 0.0;
        for (std::size_t q = 0; q < nodes.size(); ++q) sum += weights[q] * std::pow(nodes[q], k);
        const double exact = k % 2 == 0 ? 2.0 / (k + 1) : 0.0;
        worst = std::max(worst, std::abs(sum - exact));
    }
    return worst;
}

const QuadratureRule& gauss_legendre7() {
    static const QuadratureRule rule = [] {
        QuadratureRule r{
            {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
             0.4058451513773972, 0.7415311855993945, 0.9491079123427585},
            {0.1294849661688697, 0.2797053914892766, 0.3818300505051189, 0.4179591836734694,
             0.3818300505051189, 0.2797053914892766, 0.1294849661688697},
        };
        if (r.max_monomial_error() > 1e-13) {
            throw NumericalError("Gauss-Legendre table failed its exactness self-check");
        }
        return r;
    }();
    return rule;
}

double l2_norm(const std::function<double(double)>& phi, const PeriodicGrid& grid, int refine) {
    if (refine < 1) throw DomainError("refinement factor must be positive");
    const auto& rule = gauss_legendre7();
    double total = 0.0;
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const double piece = grid.cell_width(m) / refine;
        const double half = 0.5 * piece;
        for (int j = 0; j < refine; ++j) {
            const double mid = grid.node(m) + (j + 0.5) * piece;
            double cell = 0.0;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double v = phi(mid + half * rule.nodes[q]);
                cell += rule.weights[q] * v * v;
            }
            total += half * cell;
        }
    }
    return std::sqrt(total);
}

double hs_seminorm(const Interpolant& v, int s) {
    if (s < 0 || s > v.degree()) {
        throw OrderOutOfRangeError("seminorm order exceeds interpolant degree");
    }
    return l2_norm([&](double x) { return v.eval(x, s); }, v.grid());
}

double hs_seminorm(const DerivFn& v, int s, const PeriodicGrid& grid, int refine) {
    if (s < 0) throw OrderOutOfRangeError("negative seminorm order");
    return l2_norm([&](double x) { return v(x, s); }, grid, refine);
}

namespace {

double combine_weighted(double l2, double semi, int s, double h, double dt) {
    if (!(dt > 0.0)) throw DomainError("weighted norm requires dt > 0");
    const double weight = std::pow(h, 2 * s) / dt;
    return std::sqrt(l2 * l2 + weight * semi * semi);
}

}  // namespace

double weighted_norm(const DerivFn& v, int s, const PeriodicGrid& grid, double dt) {
    if (!(dt > 0.0)) throw DomainError("weighted norm requires dt > 0");
    const double l2 = l2_norm([&](double x) { return v(x, 0); }, grid);
    return combine_weighted(l2, hs_seminorm(v, s, grid), s, grid.mesh_size(), dt);
}

double weighted_norm(const Interpolant& v, int s, double dt) {
    if (!(dt > 0.0)) throw DomainError("weighted norm requires dt > 0");
    const double l2 = l2_norm([&](double x) { return v.eval(x); }, v.grid());
    return combine_weighted(l2, hs_seminorm(v, s), s, v.grid().mesh_size(), dt);
}

double starred_norm(const DerivFn& v, int s, const PeriodicGrid& grid) {
    const double l2 = l2_norm([&](double x) { return v(x, 0); }, grid);
    const double semi = hs_seminorm(v, s, grid);
    return std::sqrt(l2 * l2 + semi * semi);
}

double rel_l2_error(const Interpolant& numeric, const std::function<double(double)>& exact,
                    const PeriodicGrid& grid) {
    const double denom = l2_norm(exact, grid);
    if (denom == 0.0) throw DomainError("relative error against a zero exact solution");
    const double num = l2_norm([&](double x) { return numeric.eval(x) - exact(x); }, grid);
    return num / denom;
}

ErrorReport make_error_report(const Interpolant& numeric, const DerivFn& exact, double dt,
                              double n_newton_avg) {
    const auto& grid = numeric.grid();
    ErrorReport r;
    r.h = grid.mesh_size();
    r.dt = dt;
    r.n_newton_avg = n_newton_avg;
    r.abs_l2 = l2_norm([&](double x) { return numeric.eval(x) - exact(x, 0); }, grid);
    const double denom = l2_norm([&](double x) { return exact(x, 0); }, grid);
    if (denom == 0.0) throw DomainError("relative error against a zero exact solution");
    r.rel_l2 = r.abs_l2 / denom;

    const int s = numeric.interpolation().s;
    try {
        const double semi = l2_norm(
            [&](double x) { return numeric.eval(x, s) - exact(x, s); }, grid);
        r.hs_seminorm_err = semi;
        r.weighted_err = combine_weighted(r.abs_l2, semi, s, r.h, dt);
    } catch (const OrderOutOfRangeError&) {
        // exact solution lacks the s-th derivative; seminorm fields stay empty
    }
    return r;
}

double truncation_probe(const BurgersBenchmark& b, const Flux& flux, double t_n, double dt,
                        const PeriodicGrid& grid) {
    if (!(dt > 0.0)) throw DomainError("truncation probe requires dt > 0");
    if (t_n < dt) throw DomainError("truncation probe requires t_n >= dt");
    const double t_prev = t_n - dt;
    const double offset = std::sqrt(2.0) * std::sqrt(b.nu * dt);
    auto tau = [&](double x) {
        const double un = exact_solution(b, x, t_n);
        const double zc = x - flux.f(un) * dt;
        const double avg =
            0.5 * (exact_solution(b, zc - offset, t_prev) + exact_solution(b, zc + offset, t_prev));
        return (un - avg) / dt;
    };
    return l2_norm(tau, grid);
}

double observed_order(std::span<const double> hs, std::span<const double> errs) {
    if (hs.size() != errs.size() || hs.size() < 2) {
        throw DomainError("observed order needs at least two matching (h, err) pairs");
    }
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (!(hs[i] > 0.0) || !(errs[i] > 0.0)) {
            throw DomainError("observed order needs strictly positive sizes and errors");
        }
        if (i > 0 && !(hs[i] < hs[i - 1])) {
            throw DomainError("observed order needs strictly decreasing sizes");
        }
    }
    const double n = static_cast<double>(hs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const double lx = std::log(hs[i]);
        const double ly = std::log(errs[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace fsl
