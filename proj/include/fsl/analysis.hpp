#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>

#include "fsl/characteristics.hpp"
#include "fsl/interpolation.hpp"
#include "fsl/problems.hpp"

namespace fsl {

/// 7-node Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree <= 13.
struct QuadratureRule {
    std::array<double, 7> nodes;
    std::array<double, 7> weights;

    // Largest error over the monomials x^0..x^13.
    double max_monomial_error() const;
};

/// The rule, verified against its exactness property on first use.
const QuadratureRule& gauss_legendre7();

/// Composite 7-point L2 norm over the cells of `grid`, each split into `refine` equal pieces.
double l2_norm(const std::function<double(double)>& phi, const PeriodicGrid& grid, int refine = 1);

/// |v|_{s,2} = || d^s v / dx^s ||_{0,2}.
double hs_seminorm(const Interpolant& v, int s);
double hs_seminorm(const DerivFn& v, int s, const PeriodicGrid& grid, int refine = 1);

/// (||v||^2 + (h^{2s} / dt) |v|_{s,2}^2)^{1/2}.
double weighted_norm(const DerivFn& v, int s, const PeriodicGrid& grid, double dt);
double weighted_norm(const Interpolant& v, int s, double dt);

/// (||v||^2 + |v|_{s,2}^2)^{1/2}. Diagnostics only.
double starred_norm(const DerivFn& v, int s, const PeriodicGrid& grid);

/// ||numeric - exact|| / ||exact|| with the difference taken pointwise at quadrature nodes.
double rel_l2_error(const Interpolant& numeric, const std::function<double(double)>& exact,
                    const PeriodicGrid& grid);

struct ErrorReport {
    double rel_l2 = 0.0;
    double abs_l2 = 0.0;
    std::optional<double> hs_seminorm_err;
    std::optional<double> weighted_err;
    double h = 0.0;
    double dt = 0.0;
    double n_newton_avg = 0.0;
};

/// Error of `numeric` against `exact`. The seminorm fields are filled when `s` derivatives
/// of `exact` are available (s <= 2 for the Burgers solution).
ErrorReport make_error_report(const Interpolant& numeric, const DerivFn& exact, double dt,
                              double n_newton_avg = 0.0);

/// L2 norm of the one-step defect of the exact solution under the scheme's update map,
/// without interpolation.
double truncation_probe(const BurgersBenchmark& b, const Flux& flux, double t_n, double dt,
                        const PeriodicGrid& grid);

/// Least-squares slope of log(err) against log(h).
double observed_order(std::span<const double> hs, std::span<const double> errs);

}  // namespace fsl
