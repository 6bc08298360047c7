#include "fsl/interpolation.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <optional>

#include "fsl/banded.hpp"

namespace fsl {

namespace {

// Endpoint data of one cell in the scaled variable t = (x - x_m) / h:
// y = value, p = h * u', q = h^2 * u''.
struct CellEnds {
    double y0, y1;
    double p0 = 0.0, p1 = 0.0;
    double q0 = 0.0, q1 = 0.0;
};

// Monomial coefficients in (x - x_m) of the two-point Hermite polynomial of degree 2s-1.
void hermite_cell(int s, double h, const CellEnds& e, double* out) {
    std::array<double, 6> a{};
    switch (s) {
        case 1:
            a[0] = e.y0;
            a[1] = e.y1 - e.y0;
            break;
        case 2:
            a[0] = e.y0;
            a[1] = e.p0;
            a[2] = 3.0 * (e.y1 - e.y0) - 2.0 * e.p0 - e.p1;
            a[3] = 2.0 * (e.y0 - e.y1) + e.p0 + e.p1;
            break;
        case 3: {
            const double dy = e.y1 - e.y0;
            a[0] = e.y0;
            a[1] = e.p0;
            a[2] = 0.5 * e.q0;
            a[3] = 10.0 * dy - 6.0 * e.p0 - 4.0 * e.p1 - 1.5 * e.q0 + 0.5 * e.q1;
            a[4] = -15.0 * dy + 8.0 * e.p0 + 7.0 * e.p1 + 1.5 * e.q0 - e.q1;
            a[5] = 6.0 * dy - 3.0 * e.p0 - 3.0 * e.p1 - 0.5 * e.q0 + 0.5 * e.q1;
            break;
        }
        default:
            throw ConfigError("Hermite cell kernel supports s = 1, 2, 3");
    }
    double scale = 1.0;
    for (int k = 0; k < 2 * s; ++k) {
        out[k] = a[static_cast<std::size_t>(k)] / scale;
        scale *= h;
    }
}

void check_length(const PeriodicGrid& grid, std::span<const double> v, const char* what) {
    if (v.size() != grid.size()) {
        throw DimensionError(std::string(what) + " length does not match grid");
    }
}

// Cyclic system for the scaled nodal derivatives of a periodic uniform spline.
// Cubic: unknowns p_i. Quintic: interleaved (p_i, q_i), rows alternate C4 and C3 continuity.
std::shared_ptr<const CyclicBandedSystem> spline_system(std::size_t n, int s) {
    thread_local std::optional<std::pair<std::size_t, int>> key;
    thread_local std::shared_ptr<const CyclicBandedSystem> cached;
    if (key && key->first == n && key->second == s) return cached;

    std::shared_ptr<CyclicBandedSystem> sys;
    if (s == 2) {
        sys = std::make_shared<CyclicBandedSystem>(n, 1);
        for (std::size_t i = 0; i < n; ++i) {
            sys->add(i, -1, 1.0);
            sys->add(i, 0, 4.0);
            sys->add(i, 1, 1.0);
        }
    } else {
        sys = std::make_shared<CyclicBandedSystem>(2 * n, 3);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t r4 = 2 * i, r3 = 2 * i + 1;
            // 7 p_{i-1} + 16 p_i + 7 p_{i+1} + q_{i-1} - q_{i+1}
            sys->add(r4, -2, 7.0);
            sys->add(r4, 0, 16.0);
            sys->add(r4, 2, 7.0);
            sys->add(r4, -1, 1.0);
            sys->add(r4, 3, -1.0);
            // -8 p_{i-1} + 8 p_{i+1} - q_{i-1} + 6 q_i - q_{i+1}
            sys->add(r3, -3, -8.0);
            sys->add(r3, 1, 8.0);
            sys->add(r3, -2, -1.0);
            sys->add(r3, 0, 6.0);
            sys->add(r3, 2, -1.0);
        }
    }
    sys->factorize();
    key = {n, s};
    cached = sys;
    return cached;
}

}  // namespace

Interpolant::Interpolant(PeriodicGrid grid, Interpolation interp, std::vector<double> cell_coeffs)
    : grid_(std::move(grid)), interp_(interp), degree_(interp.degree()),
      coeffs_(std::move(cell_coeffs)) {
    interp_.validate();
    if (coeffs_.size() != grid_.size() * static_cast<std::size_t>(degree_ + 1)) {
        throw DimensionError("coefficient array does not match grid and degree");
    }
}

int Interpolant::smoothness() const {
    switch (interp_.kind) {
        case InterpKind::Linear: return 0;
        case InterpKind::Spline: return 2 * interp_.s - 2;
        case InterpKind::Hermite: return interp_.s - 1;
    }
    return 0;
}

std::span<const double> Interpolant::cell(std::size_t m) const {
    const std::size_t stride = static_cast<std::size_t>(degree_ + 1);
    return {coeffs_.data() + m * stride, stride};
}

double Interpolant::eval(double x, int k) const {
    if (k < 0 || k > degree_) {
        throw OrderOutOfRangeError("derivative order " + std::to_string(k) +
                                   " exceeds interpolant degree");
    }
    const double xw = wrap(x);
    const std::size_t m = grid_.locate(xw);
    double xl = xw - grid_.node(m);
    if (xl < 0.0 && m + 1 == grid_.size()) xl += 1.0;

    const auto c = cell(m);
    // Horner on the k-th derivative: sum_j c_j j!/(j-k)! xl^(j-k)
    double acc = 0.0;
    for (int j = degree_; j >= k; --j) {
        double falling = 1.0;
        for (int i = 0; i < k; ++i) falling *= static_cast<double>(j - i);
        acc = acc * xl + falling * c[static_cast<std::size_t>(j)];
    }
    return acc;
}

Interpolant build_linear(const PeriodicGrid& grid, std::span<const double> values) {
    check_length(grid, values, "values");
    const std::size_t n = grid.size();
    std::vector<double> coeffs(2 * n);
    for (std::size_t m = 0; m < n; ++m) {
        CellEnds e{values[m], values[(m + 1) % n]};
        hermite_cell(1, grid.cell_width(m), e, &coeffs[2 * m]);
    }
    return Interpolant(grid, Interpolation::linear(), std::move(coeffs));
}

Interpolant build_spline(const PeriodicGrid& grid, std::span<const double> values, int s) {
    if (s != 2 && s != 3) throw ConfigError("spline interpolation supports s = 2 or 3");
    check_length(grid, values, "values");
    if (!grid.is_uniform()) {
        throw UnsupportedGridError("spline interpolation requires a uniform grid");
    }
    const std::size_t n = grid.size();
    if (n < static_cast<std::size_t>(2 * s + 1)) {
        throw InvalidGridError("spline of degree 2s-1 needs at least 2s+1 nodes");
    }
    const auto sys = spline_system(n, s);
    const auto y = [&](std::size_t i, long off) {
        const long nn = static_cast<long>(n);
        return values[static_cast<std::size_t>(((static_cast<long>(i) + off) % nn + nn) % nn)];
    };

    std::vector<double> rhs(sys->size());
    if (s == 2) {
        for (std::size_t i = 0; i < n; ++i) rhs[i] = 3.0 * (y(i, 1) - y(i, -1));
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            rhs[2 * i] = 15.0 * (y(i, 1) - y(i, -1));
            rhs[2 * i + 1] = 20.0 * (y(i, -1) - 2.0 * y(i, 0) + y(i, 1));
        }
    }
    sys->solve(rhs);

    const double h = grid.cell_width(0);
    const std::size_t stride = static_cast<std::size_t>(2 * s);
    std::vector<double> coeffs(n * stride);
    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t r = (m + 1) % n;
        CellEnds e{values[m], values[r]};
        if (s == 2) {
            e.p0 = rhs[m];
            e.p1 = rhs[r];
        } else {
            e.p0 = rhs[2 * m];
            e.q0 = rhs[2 * m + 1];
            e.p1 = rhs[2 * r];
            e.q1 = rhs[2 * r + 1];
        }
        hermite_cell(s, h, e, &coeffs[m * stride]);
    }
    return Interpolant(grid, Interpolation::spline(s), std::move(coeffs));
}

Interpolant build_hermite(const PeriodicGrid& grid, std::span<const double> values,
                          std::span<const std::vector<double>> derivs, int s) {
    if (s != 2 && s != 3) throw ConfigError("Hermite interpolation supports s = 2 or 3");
    check_length(grid, values, "values");
    if (derivs.size() != static_cast<std::size_t>(s - 1)) {
        throw DimensionError("Hermite interpolation needs s-1 derivative rows");
    }
    for (const auto& row : derivs) check_length(grid, row, "derivative row");

    const std::size_t n = grid.size();
    const std::size_t stride = static_cast<std::size_t>(2 * s);
    std::vector<double> coeffs(n * stride);
    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t r = (m + 1) % n;
        const double h = grid.cell_width(m);
        CellEnds e{values[m], values[r]};
        e.p0 = h * derivs[0][m];
        e.p1 = h * derivs[0][r];
        if (s == 3) {
            e.q0 = h * h * derivs[1][m];
            e.q1 = h * h * derivs[1][r];
        }
        hermite_cell(s, h, e, &coeffs[m * stride]);
    }
    return Interpolant(grid, Interpolation::hermite(s), std::move(coeffs));
}

Interpolant build_interpolant(const NodalState& state) {
    state.check();
    switch (state.interp.kind) {
        case InterpKind::Linear: return build_linear(state.grid, state.values);
        case InterpKind::Spline: return build_spline(state.grid, state.values, state.interp.s);
        case InterpKind::Hermite:
            return build_hermite(state.grid, state.values, state.derivs, state.interp.s);
    }
    throw ConfigError("unknown interpolation kind");
}

NodalState sample_state(const PeriodicGrid& grid, const DerivFn& f, Interpolation interp,
                        double time) {
    NodalState state(grid, interp, time);
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const double x = grid.node(m);
        state.values[m] = f(x, 0);
        for (std::size_t k = 0; k < state.derivs.size(); ++k) {
            state.derivs[k][m] = f(x, static_cast<int>(k) + 1);
        }
    }
    return state;
}

Interpolant interpolate_function(const PeriodicGrid& grid, const DerivFn& f, Interpolation interp) {
    return build_interpolant(sample_state(grid, f, interp));
}

}  // namespace fsl
