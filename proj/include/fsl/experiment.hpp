#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fsl/core.hpp"
#include "fsl/problems.hpp"

namespace fsl {

enum class ExperimentKind { Fig1, Fig2, Fig3, Single };

ExperimentKind parse_experiment(const std::string& name);
std::string experiment_name(ExperimentKind kind);

/// A convergence sweep over (method, resolution) cells of the Burgers benchmark.
///  fig1: N_t fixed (1000), resolutions are N_x.
///  fig2: N_x fixed (1000), resolutions are N_t.
///  fig3: resolutions are N_x, dt = (10 h)^s with s per method (linear uses 1).
///  single: one (single_nx, single_nt) cell per method.
struct ExperimentSpec {
    ExperimentKind experiment = ExperimentKind::Fig1;
    std::vector<Interpolation> methods;
    std::vector<std::size_t> resolutions;
    BurgersBenchmark benchmark;
    std::string output_path;
    int threads = 0;

    std::size_t fixed_nt = 1000;
    std::size_t fixed_nx = 1000;
    std::size_t single_nx = 20;
    std::size_t single_nt = 10;

    bool strict_dt_check = true;
    bool record_timing = false;
    double newton_tol = 1e-13;
    int newton_max_iter = 50;

    /// Defaults for `kind`: all five methods and the sweep {20, 40, 80, 160, 320}.
    static ExperimentSpec defaults(ExperimentKind kind);

    void validate() const;
};

struct ExperimentRow {
    std::string method;
    int s = 0;
    std::size_t nx = 0;
    std::size_t nt = 0;
    double h = 0.0;
    double dt = 0.0;
    std::optional<double> rel_l2_error;
    std::optional<double> observed_order;
    double newton_iters_avg = 0.0;
    std::optional<double> wall_ms;
    std::string error;
    // Smallest dt_1 - dt seen over the run; not part of the CSV.
    double min_dt_margin = 0.0;
};

/// Runs every cell, `spec.threads` at a time. Rows come back method-major, resolution-minor;
/// a failing cell yields a row with `error` set and the sweep continues.
std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec);

inline constexpr const char* kCsvHeader =
    "method,s,nx,nt,h,dt,rel_l2_error,observed_order,newton_iters_avg,wall_ms,error";

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
std::string format_csv_row(const ExperimentRow& row);

}  // namespace fsl
