#include "fsl/core.hpp"

#include <algorithm>
#include <cmath>

namespace fsl {

double wrap(double x) {
    double r = x - std::floor(x);
    // x slightly below an integer can round up to exactly 1.
    return r >= 1.0 ? 0.0 : r;
}

PeriodicGrid::PeriodicGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    const std::size_t n = nodes_.size();
    if (n < 4) {
        throw InvalidGridError("periodic grid needs at least 4 nodes, got " + std::to_string(n));
    }
    for (std::size_t m = 0; m < n; ++m) {
        if (!(nodes_[m] >= 0.0 && nodes_[m] < 1.0)) {
            throw InvalidGridError("grid node outside [0,1)");
        }
        if (m > 0 && !(nodes_[m] > nodes_[m - 1])) {
            throw InvalidGridError("grid nodes must be strictly increasing");
        }
    }
    for (std::size_t m = 0; m < n; ++m) {
        mesh_size_ = std::max(mesh_size_, cell_width(m));
    }
    uniform_ = nodes_[0] == 0.0;
    for (std::size_t m = 0; m < n && uniform_; ++m) {
        const double expect = static_cast<double>(m) / static_cast<double>(n);
        uniform_ = std::abs(nodes_[m] - expect) <= 1e-14;
    }
    if (uniform_) mesh_size_ = 1.0 / static_cast<double>(n);
}

double PeriodicGrid::cell_right(std::size_t m) const {
    return m + 1 < nodes_.size() ? nodes_[m + 1] : nodes_[0] + 1.0;
}

double PeriodicGrid::cell_width(std::size_t m) const { return cell_right(m) - nodes_[m]; }

std::size_t PeriodicGrid::locate(double x) const {
    const std::size_t n = nodes_.size();
    if (x < nodes_[0]) {
        return n - 1;  // wrap cell covers [x_{N-1}, 1) and [0, x_0)
    }
    std::size_t m;
    if (uniform_) {
        m = std::min(static_cast<std::size_t>(x * static_cast<double>(n)), n - 1);
        if (m + 1 < n && x >= nodes_[m + 1]) {
            ++m;
        } else if (x < nodes_[m]) {
            --m;
        }
    } else {
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
        m = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    }
    return m;
}

PeriodicGrid uniform_grid(std::size_t n_cells) {
    if (n_cells < 4) {
        throw InvalidGridError("uniform grid needs n_cells >= 4, got " + std::to_string(n_cells));
    }
    std::vector<double> nodes(n_cells);
    for (std::size_t m = 0; m < n_cells; ++m) {
        nodes[m] = static_cast<double>(m) / static_cast<double>(n_cells);
    }
    return PeriodicGrid(std::move(nodes));
}

void Interpolation::validate() const {
    const bool ok = (kind == InterpKind::Linear && s == 1) ||
                    (kind != InterpKind::Linear && (s == 2 || s == 3));
    if (!ok) {
        throw ConfigError("unsupported interpolation: kind/s combination");
    }
}

std::string Interpolation::name() const {
    switch (kind) {
        case InterpKind::Linear: return "linear";
        case InterpKind::Spline: return s == 2 ? "spline3" : "spline5";
        case InterpKind::Hermite: return s == 2 ? "hermite3" : "hermite5";
    }
    return "unknown";
}

Interpolation Interpolation::parse(const std::string& name) {
    if (name == "linear") return linear();
    if (name == "spline3") return spline(2);
    if (name == "spline5") return spline(3);
    if (name == "hermite3") return hermite(2);
    if (name == "hermite5") return hermite(3);
    throw ConfigError("unknown interpolation method '" + name + "'");
}

NodalState::NodalState(PeriodicGrid g, Interpolation i, double t)
    : grid(std::move(g)), interp(i), values(grid.size(), 0.0), time(t) {
    interp.validate();
    derivs.assign(static_cast<std::size_t>(interp.derivative_rows()),
                  std::vector<double>(grid.size(), 0.0));
}

void NodalState::check() const {
    if (values.size() != grid.size()) {
        throw DimensionError("nodal values length does not match grid");
    }
    if (derivs.size() != static_cast<std::size_t>(interp.derivative_rows())) {
        throw DimensionError("derivative stack has wrong number of rows");
    }
    for (const auto& row : derivs) {
        if (row.size() != grid.size()) {
            throw DimensionError("derivative row length does not match grid");
        }
    }
}

void SchemeConfig::validate() const {
    if (!(nu > 0.0)) throw ConfigError("nu must be positive");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(t_final > 0.0)) throw ConfigError("t_final must be positive");
    if (dt > t_final) throw ConfigError("dt must not exceed t_final");
    if (!(newton_tol > 0.0)) throw ConfigError("newton_tol must be positive");
    if (newton_max_iter < 1) throw ConfigError("newton_max_iter must be at least 1");
    interp.validate();
}

std::size_t SchemeConfig::step_count() const {
    validate();
    const double ratio = t_final / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
        throw ConfigError("t_final / dt is not a positive integer");
    }
    return static_cast<std::size_t>(rounded);
}

}  // namespace fsl
