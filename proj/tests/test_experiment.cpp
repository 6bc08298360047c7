#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "fsl/experiment.hpp"

using namespace fsl;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> result;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) result.push_back(line);
    return result;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("fsl_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("CSV header and row format") {
    std::ostringstream out;
    ExperimentRow r;
    r.method = "spline3";
    r.s = 2;
    r.nx = 20;
    r.nt = 1000;
    r.h = 0.05;
    r.dt = 1e-3;
    r.rel_l2_error = 1.5e-3;
    r.newton_iters_avg = 2.0;
    write_csv(out, {r});
    const auto ls = lines(out.str());
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == "method,s,nx,nt,h,dt,rel_l2_error,observed_order,newton_iters_avg,wall_ms,error");
    CHECK(ls[1] == "spline3,2,20,1000,5.00000000000e-02,1.00000000000e-03,1.50000000000e-03,,2.00000000000e+00,,");

    r.observed_order = 2.0;
    r.wall_ms = 12.5;
    r.rel_l2_error.reset();
    r.error = "bad, worse";
    CHECK(format_csv_row(r) ==
          "spline3,2,20,1000,5.00000000000e-02,1.00000000000e-03,,2.00000000000e+00,2.00000000000e+00,"
          "1.25000000000e+01,bad; worse");
}

TEST_CASE("experiment names and defaults") {
    CHECK(parse_experiment("fig2") == ExperimentKind::Fig2);
    CHECK(experiment_name(ExperimentKind::Fig3) == "fig3");
    CHECK_THROWS_AS(parse_experiment("fig4"), ConfigError);
    const ExperimentSpec d = ExperimentSpec::defaults(ExperimentKind::Fig1);
    CHECK(d.methods.size() == 5);
    CHECK(d.resolutions == std::vector<std::size_t>{20, 40, 80, 160, 320});
    ExperimentSpec bad = d;
    bad.methods.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = d;
    bad.resolutions = {20, 0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = d;
    bad.benchmark.A = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("sweep rows carry exact h and dt in method-major order") {
    ExperimentSpec spec = ExperimentSpec::defaults(ExperimentKind::Fig1);
    spec.methods = {Interpolation::linear(), Interpolation::hermite(2)};
    spec.resolutions = {20, 40, 80};
    spec.fixed_nt = 10;
    spec.benchmark.t_final = 0.1;
    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 6);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        CHECK(r.method == (i < 3 ? "linear" : "hermite3"));
        CHECK(r.nx == spec.resolutions[i % 3]);
        CHECK(r.h == 1.0 / static_cast<double>(r.nx));
        CHECK(r.dt == 0.1 / 10.0);
        CHECK(r.nt == 10);
        CHECK(r.error.empty());
        REQUIRE(r.rel_l2_error.has_value());
        CHECK(r.observed_order.has_value() == (i % 3 != 0));
        CHECK_FALSE(r.wall_ms.has_value());
        CHECK(r.newton_iters_avg >= 1.0);
    }
    const double order = std::log(*rows[4].rel_l2_error / *rows[5].rel_l2_error) / std::log(2.0);
    CHECK(*rows[5].observed_order == doctest::Approx(order).epsilon(1e-12));

    spec.record_timing = true;
    spec.methods = {Interpolation::linear()};
    spec.resolutions = {20};
    const auto timed = run_experiment(spec);
    REQUIRE(timed[0].wall_ms.has_value());
    CHECK(*timed[0].wall_ms >= 0.0);
}

TEST_CASE("fig2 sweeps the step count at fixed nx") {
    ExperimentSpec spec = ExperimentSpec::defaults(ExperimentKind::Fig2);
    spec.methods = {Interpolation::spline(2)};
    spec.resolutions = {10, 20};
    spec.fixed_nx = 40;
    spec.benchmark.t_final = 0.2;
    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].nx == 40);
    CHECK(rows[0].dt == 0.2 / 10.0);
    CHECK(rows[1].dt == 0.2 / 20.0);
}

TEST_CASE("fig3 couples the step to the mesh") {
    ExperimentSpec spec = ExperimentSpec::defaults(ExperimentKind::Fig3);
    spec.methods = {Interpolation::linear(), Interpolation::spline(2), Interpolation::hermite(3)};
    spec.resolutions = {20, 40};
    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 6);
    const std::size_t expect_nt[] = {2, 4, 4, 16, 8, 64};
    for (std::size_t i = 0; i < 6; ++i) {
        CAPTURE(i);
        CHECK(rows[i].nt == expect_nt[i]);
        CHECK(rows[i].dt == doctest::Approx(std::pow(10.0 / rows[i].nx, rows[i].s)).epsilon(1e-15));
        CHECK(rows[i].error.empty());
    }
}

TEST_CASE("a failing cell becomes an error row and the sweep continues") {
    ExperimentSpec spec = ExperimentSpec::defaults(ExperimentKind::Fig3);
    spec.methods = {Interpolation::linear(), Interpolation::spline(3)};
    spec.resolutions = {7, 20};
    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 4);
    CHECK_FALSE(rows[0].error.empty());
    CHECK_FALSE(rows[0].rel_l2_error.has_value());
    CHECK(rows[1].error.empty());
    CHECK(rows[1].rel_l2_error.has_value());
    // a spline of order 5 needs at least 7 nodes, and dt = (10/7)^3 > T anyway
    CHECK_FALSE(rows[2].error.empty());
    CHECK(rows[3].error.empty());
    CHECK_FALSE(rows[3].observed_order.has_value());
}

TEST_CASE("single smoke run") {
    ExperimentSpec spec = ExperimentSpec::defaults(ExperimentKind::Single);
    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 5);
    for (const auto& r : rows) {
        CHECK(r.nx == 20);
        CHECK(r.nt == 10);
        CHECK(r.dt == 0.1);
        REQUIRE(r.rel_l2_error.has_value());
        CHECK(*r.rel_l2_error < 1.0);
        CHECK_FALSE(r.observed_order.has_value());
    }
}

TEST_CASE("CLI usage errors exit 1") {
    CHECK(run_cli({}).code == 1);
    CHECK(run_cli({"frobnicate"}).code == 1);
    CHECK(run_cli({"solve", "--method", "spline7"}).code == 1);
    CHECK(run_cli({"solve", "--nx", "abc"}).code == 1);
    CHECK(run_cli({"convergence", "--experiment", "fig9"}).code == 1);
    CHECK(run_cli({"convergence", "--resolutions", "20,0"}).code == 1);
    CHECK(run_cli({"solve", "--A", "1.5"}).code == 1);
    CHECK(run_cli({"solve", "--threads", "-2"}).code == 1);
    CHECK(run_cli({"solve", "--config", "/nonexistent/fsl.ini"}).code == 1);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("CLI solve writes CSV to stdout or a file") {
    const auto r = run_cli({"solve", "--method", "hermite3", "--nx", "20", "--nt", "10"});
    CHECK(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == kCsvHeader);
    CHECK(ls[1].rfind("hermite3,2,20,10,", 0) == 0);

    const auto path = temp_file("solve.csv");
    std::filesystem::remove(path);
    CHECK(run_cli({"solve", "--out", path.string()}).code == 0);
    CHECK(lines(slurp(path)).size() == 2);
    std::filesystem::remove(path);
}

TEST_CASE("CLI config file loads and flags override it") {
    const auto cfg = temp_file("run.ini");
    {
        std::ofstream f(cfg);
        f << "method = linear\nnx = 16\nnt = 5\nt_final = 0.5\n";
    }
    const auto from_file = run_cli({"solve", "--config", cfg.string()});
    CHECK(from_file.code == 0);
    REQUIRE(lines(from_file.out).size() == 2);
    CHECK(lines(from_file.out)[1].rfind("linear,1,16,5,6.25000000000e-02,1.00000000000e-01,", 0) == 0);

    const auto overridden = run_cli({"solve", "--config", cfg.string(), "--nx", "32"});
    CHECK(overridden.code == 0);
    REQUIRE(lines(overridden.out).size() == 2);
    CHECK(lines(overridden.out)[1].rfind("linear,1,32,5,", 0) == 0);
    std::filesystem::remove(cfg);
}

TEST_CASE("CLI convergence subset and failure exit code") {
    const auto ok = run_cli({"convergence", "--experiment", "fig3", "--methods", "linear,spline3", "--resolutions", "20,40"});
    CHECK(ok.code == 0);
    CHECK(lines(ok.out).size() == 5);

    const auto failing = run_cli({"convergence", "--experiment", "fig3", "--methods", "linear", "--resolutions", "7,20"});
    CHECK(failing.code == 2);
    CHECK(lines(failing.out).size() == 3);
    CHECK(failing.err.find("error: linear nx=7") != std::string::npos);
}

TEST_CASE("CLI verify exits 0") {
    const auto r = run_cli({"verify"});
    CHECK(r.code == 0);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
    CHECK(r.out.find("checks passed") != std::string::npos);
}
