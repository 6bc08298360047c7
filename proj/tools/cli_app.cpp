#include "cli_app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>

#include "fsl/experiment.hpp"
#include "fsl/verify.hpp"

namespace fsl::cli {

namespace {

struct Options {
    std::string experiment = "fig1";
    std::vector<std::string> methods;
    std::vector<std::size_t> resolutions;
    std::string method = "spline3";
    std::size_t nx = 20;
    std::size_t nt = 10;
    double amplitude = 0.9;
    double nu = 1e-3;
    double t_final = 1.0;
    std::string out;
    std::string config;
    int threads = 0;
    bool no_strict_dt = false;
    bool timing = false;
    double newton_tol = 1e-13;
    int newton_max_iter = 50;
};

void add_shared(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config, "Config file of `key = value` lines; flags override it")
        ->check(CLI::ExistingFile);
    cmd->add_option("--A", o.amplitude, "Benchmark amplitude A in (0,1)")->capture_default_str();
    cmd->add_option("--nu", o.nu, "Viscosity")->capture_default_str();
    cmd->add_option("--t-final,--t_final", o.t_final, "Final time T")->capture_default_str();
    cmd->add_option("--out,--output_path", o.out, "CSV destination (default: stdout)");
    cmd->add_option("--threads", o.threads, "Worker threads, 0 = auto")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--no-strict-dt,--no_strict_dt", o.no_strict_dt,
                  "Warn instead of failing when dt >= dt_1");
    cmd->add_flag("--timing", o.timing, "Fill the wall_ms column");
    cmd->add_option("--newton-tol,--newton_tol", o.newton_tol)->capture_default_str();
    cmd->add_option("--newton-max-iter,--newton_max_iter", o.newton_max_iter)->capture_default_str();
}

// Keys name long options without the dashes. Values fill only options absent from the command line.
void apply_config(CLI::App* cmd, const std::string& path) {
    std::ifstream in(path);
    for (const auto& item : CLI::ConfigINI().from_config(in)) {
        if (item.name == "++" || item.name == "--") continue;
        CLI::Option* opt = cmd->get_option_no_throw("--" + item.name);
        if (opt == nullptr || opt->get_name() == "--config") {
            throw ConfigError("unknown config key '" + item.name + "' in " + path);
        }
        if (opt->count() > 0) continue;
        opt->add_result(item.inputs);
        opt->run_callback();
    }
}

ExperimentSpec to_spec(const Options& o, ExperimentKind kind) {
    ExperimentSpec spec = ExperimentSpec::defaults(kind);
    if (!o.methods.empty()) {
        spec.methods.clear();
        for (const auto& name : o.methods) spec.methods.push_back(Interpolation::parse(name));
    }
    if (!o.resolutions.empty()) spec.resolutions = o.resolutions;
    spec.benchmark = {o.amplitude, o.nu, o.t_final};
    spec.output_path = o.out;
    spec.threads = o.threads;
    spec.strict_dt_check = !o.no_strict_dt;
    spec.record_timing = o.timing;
    spec.newton_tol = o.newton_tol;
    spec.newton_max_iter = o.newton_max_iter;
    return spec;
}

int emit(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
    const auto rows = run_experiment(spec);
    if (spec.output_path.empty()) {
        write_csv(out, rows);
    } else {
        std::ofstream file(spec.output_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << spec.output_path << " for writing\n";
            return kUsageError;
        }
        write_csv(file, rows);
    }
    int code = kSuccess;
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            err << "error: " << r.method << " nx=" << r.nx << " nt=" << r.nt << ": " << r.error
                << '\n';
            code = kFailure;
        } else if (r.min_dt_margin <= 0.0) {
            err << "warning: " << r.method << " nx=" << r.nx << " nt=" << r.nt
                << " ran with dt >= dt_1 (margin " << r.min_dt_margin << ")\n";
        }
    }
    return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Implicit fully semi-Lagrangian solver for 1D periodic viscous Burgers"};
    app.require_subcommand(1);
    Options o;

    auto* solve = app.add_subcommand("solve", "Single run of the Burgers benchmark");
    add_shared(solve, o);
    solve->add_option("--method", o.method, "linear|spline3|spline5|hermite3|hermite5")
        ->capture_default_str();
    solve->add_option("--nx", o.nx, "Spatial cells")->capture_default_str();
    solve->add_option("--nt", o.nt, "Time steps")->capture_default_str();

    auto* conv = app.add_subcommand("convergence", "Convergence sweeps");
    add_shared(conv, o);
    conv->add_option("--experiment", o.experiment, "fig1|fig2|fig3")
        ->check(CLI::IsMember({"fig1", "fig2", "fig3"}))
        ->capture_default_str();
    conv->add_option("--methods", o.methods, "Subset of linear,spline3,spline5,hermite3,hermite5")
        ->delimiter(',');
    conv->add_option("--resolutions", o.resolutions, "Sweep values (N_x, or N_t for fig2)")
        ->delimiter(',');

    auto* verify = app.add_subcommand("verify", "Interpolation and scheme property suite");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        for (auto* sub : app.get_subcommands()) out << sub->help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kUsageError;
    }

    try {
        for (auto* cmd : {solve, conv}) {
            if (*cmd && !o.config.empty()) apply_config(cmd, o.config);
        }
    } catch (const CLI::Error& e) {
        err << "usage error: config " << o.config << ": " << e.what() << '\n';
        return kUsageError;
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    }

    try {
        if (*verify) {
            const VerifyReport report = run_verify(out);
            const auto failed = std::count_if(report.checks.begin(), report.checks.end(),
                                              [](const auto& c) { return !c.passed; });
            out << report.checks.size() - static_cast<std::size_t>(failed) << "/"
                << report.checks.size() << " checks passed\n";
            return report.all_passed() ? kSuccess : kFailure;
        }
        if (*solve) {
            ExperimentSpec spec = to_spec(o, ExperimentKind::Single);
            spec.methods = {Interpolation::parse(o.method)};
            spec.single_nx = o.nx;
            spec.single_nt = o.nt;
            return emit(spec, out, err);
        }
        return emit(to_spec(o, parse_experiment(o.experiment)), out, err);
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace fsl::cli
