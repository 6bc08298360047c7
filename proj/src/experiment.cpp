#include "fsl/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include <omp.h>

#include "fsl/analysis.hpp"
#include "fsl/characteristics.hpp"

namespace fsl {

ExperimentKind parse_experiment(const std::string& name) {
    if (name == "fig1") return ExperimentKind::Fig1;
    if (name == "fig2") return ExperimentKind::Fig2;
    if (name == "fig3") return ExperimentKind::Fig3;
    if (name == "single") return ExperimentKind::Single;
    throw ConfigError("unknown experiment '" + name + "'");
}

std::string experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Fig1: return "fig1";
        case ExperimentKind::Fig2: return "fig2";
        case ExperimentKind::Fig3: return "fig3";
        case ExperimentKind::Single: return "single";
    }
    return "unknown";
}

ExperimentSpec ExperimentSpec::defaults(ExperimentKind kind) {
    ExperimentSpec spec;
    spec.experiment = kind;
    spec.methods = {Interpolation::linear(), Interpolation::spline(2), Interpolation::spline(3),
                    Interpolation::hermite(2), Interpolation::hermite(3)};
    if (kind != ExperimentKind::Single) spec.resolutions = {20, 40, 80, 160, 320};
    return spec;
}

void ExperimentSpec::validate() const {
    benchmark.validate();
    if (methods.empty()) throw ConfigError("experiment needs at least one method");
    for (const auto& m : methods) m.validate();
    if (experiment != ExperimentKind::Single && resolutions.empty()) {
        throw ConfigError("experiment needs at least one resolution");
    }
    for (std::size_t r : resolutions) {
        if (r == 0) throw ConfigError("resolutions must be positive");
    }
    if (threads < 0) throw ConfigError("threads must be >= 0");
    if (!(newton_tol > 0.0) || newton_max_iter < 1) throw ConfigError("invalid Newton controls");
}

namespace {

struct Cell {
    Interpolation method;
    std::size_t nx = 0;
    std::size_t nt = 0;
    std::string setup_error;
};

std::size_t coupled_step_count(std::size_t nx, int s, double t_final) {
    const double dt = std::pow(10.0 / static_cast<double>(nx), s);
    const double ratio = t_final / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
        throw ConfigError("t_final / (10h)^s is not an integer for nx = " + std::to_string(nx));
    }
    return static_cast<std::size_t>(rounded);
}

std::vector<Cell> plan_cells(const ExperimentSpec& spec) {
    std::vector<Cell> cells;
    for (const auto& method : spec.methods) {
        if (spec.experiment == ExperimentKind::Single) {
            cells.push_back({method, spec.single_nx, spec.single_nt, {}});
            continue;
        }
        for (std::size_t r : spec.resolutions) {
            Cell c{method, 0, 0, {}};
            switch (spec.experiment) {
                case ExperimentKind::Fig1:
                    c.nx = r;
                    c.nt = spec.fixed_nt;
                    break;
                case ExperimentKind::Fig2:
                    c.nx = spec.fixed_nx;
                    c.nt = r;
                    break;
                case ExperimentKind::Fig3:
                    c.nx = r;
                    try {
                        c.nt = coupled_step_count(r, method.s, spec.benchmark.t_final);
                    } catch (const Error& e) {
                        c.setup_error = e.what();
                    }
                    break;
                case ExperimentKind::Single:
                    break;
            }
            cells.push_back(c);
        }
    }
    return cells;
}

ExperimentRow run_cell(const ExperimentSpec& spec, const Cell& cell) {
    ExperimentRow row;
    row.method = cell.method.name();
    row.s = cell.method.s;
    row.nx = cell.nx;
    row.nt = cell.nt;
    row.h = cell.nx > 0 ? 1.0 / static_cast<double>(cell.nx) : 0.0;
    row.dt = cell.nt > 0 ? spec.benchmark.t_final / static_cast<double>(cell.nt) : 0.0;
    if (!cell.setup_error.empty()) {
        row.error = cell.setup_error;
        return row;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        const PeriodicGrid grid = uniform_grid(cell.nx);
        SchemeConfig cfg;
        cfg.nu = spec.benchmark.nu;
        cfg.dt = row.dt;
        cfg.t_final = spec.benchmark.t_final;
        cfg.interp = cell.method;
        cfg.newton_tol = spec.newton_tol;
        cfg.newton_max_iter = spec.newton_max_iter;
        cfg.strict_dt_check = spec.strict_dt_check;

        const auto& b = spec.benchmark;
        auto [final_state, report] =
            run(exact_at(b, 0.0), grid, burgers_flux(), cfg, Execution::serial());
        const Interpolant numeric = build_interpolant(final_state);
        row.rel_l2_error = rel_l2_error(
            numeric, [&](double x) { return exact_solution(b, x, b.t_final); }, grid);
        row.newton_iters_avg = report.newton_iters_avg();
        row.min_dt_margin = report.min_dt_margin;
    } catch (const Error& e) {
        row.error = e.what();
    }
    if (spec.record_timing) {
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    }
    return row;
}

void fill_running_orders(const ExperimentSpec& spec, std::vector<ExperimentRow>& rows) {
    const bool versus_dt = spec.experiment == ExperimentKind::Fig2;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& prev = rows[i - 1];
        auto& cur = rows[i];
        if (prev.method != cur.method || !prev.rel_l2_error || !cur.rel_l2_error) continue;
        const double xs[2] = {versus_dt ? prev.dt : prev.h, versus_dt ? cur.dt : cur.h};
        const double es[2] = {*prev.rel_l2_error, *cur.rel_l2_error};
        try {
            cur.observed_order = observed_order(xs, es);
        } catch (const DomainError&) {
            // not a refinement pair (zero error or non-decreasing size)
        }
    }
}

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const std::vector<Cell> cells = plan_cells(spec);
    std::vector<ExperimentRow> rows(cells.size());
    const long n = static_cast<long>(cells.size());
    const int threads = spec.threads > 0 ? spec.threads : omp_get_max_threads();
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
        rows[static_cast<std::size_t>(i)] = run_cell(spec, cells[static_cast<std::size_t>(i)]);
    }
    fill_running_orders(spec, rows);
    return rows;
}

std::string format_csv_row(const ExperimentRow& r) {
    std::string line = r.method + "," + std::to_string(r.s) + "," + std::to_string(r.nx) + "," +
                       std::to_string(r.nt) + "," + sci(r.h) + "," + sci(r.dt) + ",";
    line += r.rel_l2_error ? sci(*r.rel_l2_error) : "";
    line += ",";
    line += r.observed_order ? sci(*r.observed_order) : "";
    line += "," + sci(r.newton_iters_avg) + ",";
    line += r.wall_ms ? sci(*r.wall_ms) : "";
    line += "," + sanitize(r.error);
    return line;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) out << format_csv_row(r) << '\n';
}

}  // namespace fsl
