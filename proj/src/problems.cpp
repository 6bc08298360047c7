#include "fsl/problems.hpp"

#include <cmath>
#include <numbers>

namespace fsl {

void BurgersBenchmark::validate() const {
    if (!(A > 0.0 && A < 1.0)) throw ConfigError("benchmark amplitude A must lie in (0,1)");
    if (!(nu > 0.0)) throw ConfigError("benchmark viscosity must be positive");
    if (!(t_final > 0.0)) throw ConfigError("benchmark final time must be positive");
}

Flux burgers_flux() {
    return Flux{
        [](double u) { return u; },
        [](double) { return 1.0; },
        [](double) { return 0.0; },
        1.0,
    };
}

double exact_solution(const BurgersBenchmark& b, double x, double t, int k) {
    if (k < 0 || k > 2) {
        throw OrderOutOfRangeError("exact solution derivatives are available for k <= 2");
    }
    if (t < 0.0) throw DomainError("exact solution requires t >= 0");
    constexpr double pi = std::numbers::pi;
    const double w = 2.0 * pi;
    const double e = b.A * std::exp(-4.0 * pi * pi * b.nu * t);
    const double amp = 4.0 * b.nu * pi * e;
    const double sn = std::sin(w * x);
    const double cs = std::cos(w * x);
    const double d = 1.0 + e * cs;
    switch (k) {
        case 0: return amp * sn / d;
        case 1: return amp * w * (cs + e) / (d * d);
        default: return amp * w * w * sn * (e * cs + 2.0 * e * e - 1.0) / (d * d * d);
    }
}

DerivFn exact_at(const BurgersBenchmark& b, double t) {
    return [b, t](double x, int k) { return exact_solution(b, x, t, k); };
}

}  // namespace fsl
