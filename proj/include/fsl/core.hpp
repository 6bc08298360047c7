#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsl {

// Error hierarchy. Every failure the library reports derives from fsl::Error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidGridError : public Error { using Error::Error; };
class DimensionError : public Error { using Error::Error; };
class UnsupportedGridError : public Error { using Error::Error; };
class NumericalError : public Error { using Error::Error; };
class OrderOutOfRangeError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class StepSizeError : public Error { using Error::Error; };

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::size_t node, double residual)
        : Error(what), node_(node), residual_(residual) {}
    std::size_t node() const { return node_; }
    double residual() const { return residual_; }

private:
    std::size_t node_;
    double residual_;
};

/// Reduce x onto the unit torus [0, 1).
double wrap(double x);

/// One period of nodes on T = [0,1). The periodic image of nodes()[0] is 1 + nodes()[0].
class PeriodicGrid {
public:
    /// Throws InvalidGridError unless nodes are strictly increasing in [0,1) and at least 4.
    explicit PeriodicGrid(std::vector<double> nodes);

    std::size_t size() const { return nodes_.size(); }
    std::span<const double> nodes() const { return nodes_; }
    double node(std::size_t m) const { return nodes_[m]; }
    double mesh_size() const { return mesh_size_; }
    bool is_uniform() const { return uniform_; }

    // Width of cell m = [x_m, x_{m+1}], the last cell wrapping to x_0 + 1.
    double cell_width(std::size_t m) const;
    double cell_right(std::size_t m) const;

    // Cell containing wrap(x); a point on a knot belongs to the cell on its right.
    std::size_t locate(double x_wrapped) const;

private:
    std::vector<double> nodes_;
    double mesh_size_ = 0.0;
    bool uniform_ = false;
};

PeriodicGrid uniform_grid(std::size_t n_cells);

enum class InterpKind { Linear, Spline, Hermite };

/// Interpolation family plus smoothness parameter s (degree 2s-1). Linear is s = 1.
struct Interpolation {
    InterpKind kind = InterpKind::Spline;
    int s = 2;

    static Interpolation linear() { return {InterpKind::Linear, 1}; }
    static Interpolation spline(int s) { return {InterpKind::Spline, s}; }
    static Interpolation hermite(int s) { return {InterpKind::Hermite, s}; }

    int degree() const { return 2 * s - 1; }
    // Number of nodal derivative rows carried in the state.
    int derivative_rows() const { return kind == InterpKind::Hermite ? s - 1 : 0; }

    /// Throws ConfigError for unsupported (kind, s) pairs.
    void validate() const;
    std::string name() const;
    static Interpolation parse(const std::string& name);

    bool operator==(const Interpolation&) const = default;
};

struct NodalState {
    NodalState(PeriodicGrid grid, Interpolation interp, double time = 0.0);

    PeriodicGrid grid;
    Interpolation interp;
    std::vector<double> values;
    // derivs[k-1][m] holds the k-th x-derivative at node m (Hermite only).
    std::vector<std::vector<double>> derivs;
    double time = 0.0;

    void check() const;
};

struct SchemeConfig {
    double nu = 1e-3;
    double dt = 1e-3;
    double t_final = 1.0;
    Interpolation interp = Interpolation::spline(2);
    double newton_tol = 1e-13;
    int newton_max_iter = 50;
    bool strict_dt_check = true;

    void validate() const;
    // T / dt as an integer; throws ConfigError unless integral within 1e-9 relative.
    std::size_t step_count() const;
};

}  // namespace fsl
