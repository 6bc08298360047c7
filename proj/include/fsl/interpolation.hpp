#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fsl/core.hpp"

namespace fsl {

/// A scalar function on T together with its x-derivatives: f(x, k) = d^k f / dx^k (x).
using DerivFn = std::function<double(double x, int k)>;

/// Periodic piecewise polynomial of degree 2s-1. Cell m covers [x_m, x_{m+1}) and is stored
/// as monomial coefficients in the local variable (x - x_m).
class Interpolant {
public:
    Interpolant(PeriodicGrid grid, Interpolation interp, std::vector<double> cell_coeffs);

    const PeriodicGrid& grid() const { return grid_; }
    Interpolation interpolation() const { return interp_; }
    int degree() const { return degree_; }
    // Highest derivative order that is continuous across knots.
    int smoothness() const;

    /// k-th derivative at wrap(x). Throws OrderOutOfRangeError for k outside [0, degree].
    double eval(double x, int k = 0) const;

    // Coefficients of cell m, lowest order first.
    std::span<const double> cell(std::size_t m) const;

private:
    PeriodicGrid grid_;
    Interpolation interp_;
    int degree_;
    std::vector<double> coeffs_;
};

Interpolant build_linear(const PeriodicGrid& grid, std::span<const double> values);

/// Periodic spline of degree 2s-1, s in {2, 3}. Uniform grids only.
Interpolant build_spline(const PeriodicGrid& grid, std::span<const double> values, int s);

/// Two-point Hermite interpolant of degree 2s-1 from values and derivative rows
/// derivs[k-1] = k-th derivative, k = 1..s-1.
Interpolant build_hermite(const PeriodicGrid& grid, std::span<const double> values,
                          std::span<const std::vector<double>> derivs, int s);

Interpolant build_interpolant(const NodalState& state);

/// Samples f (and, for Hermite, its derivatives up to s-1) at the grid nodes.
NodalState sample_state(const PeriodicGrid& grid, const DerivFn& f, Interpolation interp,
                        double time = 0.0);

Interpolant interpolate_function(const PeriodicGrid& grid, const DerivFn& f, Interpolation interp);

}  // namespace fsl
