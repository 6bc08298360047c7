#pragma once

#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fsl/characteristics.hpp"
#include "fsl/interpolation.hpp"

namespace fsl {

/// Random trigonometric polynomial c + sum_j a_j sin(2 pi j x) + b_j cos(2 pi j x);
/// derivatives of every order are exact.
struct TrigPoly {
    double c = 0.0;
    std::vector<double> a, b;

    static TrigPoly random(std::mt19937_64& rng, int modes);
    double operator()(double x, int k) const;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

/// Relative defect of the integral relation
///   |(I - I_h) v - I_h w|_s^2 = |(I - I_h) v|_s^2 + |I_h w|_s^2
/// for random smooth v, w; seminorms by 7-point quadrature on a grid 8x finer.
double integral_relation_defect(Interpolation interp, std::size_t n, std::mt19937_64& rng);

struct InterpolationOrders {
    double l2 = 0.0;
    double seminorm = 0.0;
};

/// Observed L2 and H^s-seminorm interpolation orders for sin(2 pi x) over the grid sizes `ns`.
InterpolationOrders interpolation_orders(Interpolation interp, std::span<const std::size_t> ns);

/// max_m |u_m^1 - c| after one step from the constant state c.
double fixed_point_deviation(Interpolation interp, double c, const Flux& flux, double dt,
                             double nu);

/// Slope range of x -> x - f(w(x)) dt after one step with dt = 0.9 dt_1 from a steep state.
std::pair<double, double> characteristic_slope_check(Interpolation interp);

/// Largest disagreement between the closed-form Hermite derivative update and Richardson
/// finite differences of the nodal map x -> solve_foot(x, ...).
double derivative_propagation_defect(Interpolation hermite);

/// Runs the whole property suite, logging one line per check to `log`.
VerifyReport run_verify(std::ostream& log);

}  // namespace fsl
