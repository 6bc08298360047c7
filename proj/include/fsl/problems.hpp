#pragma once

#include "fsl/characteristics.hpp"
#include "fsl/interpolation.hpp"

namespace fsl {

/// Viscous Burgers problem with the closed-form solution
///   u(x,t) = 4 nu pi E(t) sin(2 pi x) / (1 + E(t) cos(2 pi x)),  E(t) = A exp(-4 pi^2 nu t).
struct BurgersBenchmark {
    double A = 0.9;
    double nu = 1e-3;
    double t_final = 1.0;

    void validate() const;
};

/// f(u) = u.
Flux burgers_flux();

/// k-th spatial derivative (k = 0, 1, 2) of the exact solution at (x, t).
double exact_solution(const BurgersBenchmark& b, double x, double t, int k = 0);

// Exact solution at a fixed time as a DerivFn.
DerivFn exact_at(const BurgersBenchmark& b, double t);

}  // namespace fsl
