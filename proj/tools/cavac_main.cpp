// Command-line front end: run the full acoustic chain, benchmark the
// solvers over a grid-spacing ladder, tune Schwarz transmission
// parameters, or compare the face-interpolation schemes.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

#include "cavac/config.hpp"
#include "cavac/helmholtz.hpp"
#include "cavac/pipeline.hpp"
#include "cavac/schwarz.hpp"

namespace {

cavac::PipelineConfig load_or_default(const std::string& path) {
    if (path.empty()) return cavac::default_config();
    return cavac::load_config(path);
}

std::vector<double> parse_ladder(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cavac: cavity aeroacoustics toolkit (finite-volume scheme "
                 "comparison, FFT spectra, Helmholtz solves, Schwarz DDM)"};
    app.require_subcommand(1);
    app.footer(cavac::config_reference());

    bool sequential = false;
    app.add_flag("--sequential", sequential,
                 "Force sequential (bit-reproducible reference) kernels");

    std::string config_path;

    auto* cmd_run = app.add_subcommand(
        "run", "Run the full chain and write CSV artifacts");
    cmd_run->add_option("config", config_path, "Config file (optional)");

    std::string ladder_spec = "0.133425,0.066604,0.033289,0.016643";
    auto* cmd_bench = app.add_subcommand(
        "bench", "Benchmark the three solvers over an h ladder");
    cmd_bench->add_option("config", config_path, "Config file (optional)");
    cmd_bench->add_option("--ladder", ladder_spec,
                          "Comma-separated strictly decreasing h values");

    auto* cmd_tune = app.add_subcommand(
        "tune", "Sweep Schwarz transmission parameters on the cavity problem");
    cmd_tune->add_option("config", config_path, "Config file (optional)");

    auto* cmd_schemes = app.add_subcommand(
        "schemes", "Gaussian-pulse amplitude-retention scheme comparison");
    cmd_schemes->add_option("config", config_path, "Config file (optional)");

    CLI11_PARSE(app, argc, argv);

    cavac::set_exec_mode(sequential ? cavac::ExecMode::Sequential
                                    : cavac::ExecMode::Parallel);

    cavac::PipelineConfig cfg;
    try {
        cfg = load_or_default(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (cmd_run->parsed()) {
            cavac::PipelineOutcome out = cavac::run_pipeline(cfg);
            std::printf("dominant frequency: %.4g Hz (power %.6g)\n",
                        out.dominant.f_peak, out.dominant.power);
            std::printf("solver: %zu iterations, true relres %.3g\n",
                        out.solve_report.iterations,
                        out.solve_report.true_relres);
            for (const std::string& a : out.artifacts)
                std::printf("wrote %s\n", a.c_str());
        } else if (cmd_bench->parsed()) {
            std::vector<double> ladder = parse_ladder(ladder_spec);
            cavac::BenchTable table = cavac::bench_solvers(cfg, ladder);
            std::filesystem::create_directories(cfg.output_dir);
            const std::string path =
                (std::filesystem::path(cfg.output_dir) / "bench.csv").string();
            cavac::write_bench_csv(path, table);
            for (const cavac::BenchRow& r : table.rows)
                std::printf("%-10s h=%-9g n=%-7zu iters=%-5zu seq=%.4gs "
                            "par=%.4gs speedup=%.2f\n",
                            cavac::solver_name(r.solver).c_str(), r.h, r.n,
                            r.iterations, r.sequential_time_s,
                            r.parallel_time_s, r.speedup);
            std::printf("wrote %s\n", path.c_str());
        } else if (cmd_tune->parsed()) {
            cavac::CavityGrid grid = cavac::build_grid(
                cfg.cavity.width, cfg.cavity.height, cfg.cavity.h,
                cfg.cavity.roof_start, cfg.cavity.roof_end,
                cfg.cavity.admittance);
            const double omega = 2.0 * std::numbers::pi * 13.0;
            cavac::CVector dirichlet(grid.roof_size(), cavac::Complex(1.0));
            cavac::HelmholtzProblem problem =
                cavac::assemble(grid, omega, cfg.sound_speed, dirichlet);
            cavac::Partition part = cavac::partition(grid, cfg.ddm.n_sub);
            const double k = omega / cfg.sound_speed;
            cavac::TuneResult res = cavac::tune_parameters(
                problem, part, cavac::default_candidate_grid(k),
                cfg.solver_opts, cfg.ddm.max_outer);
            std::filesystem::create_directories(cfg.output_dir);
            const std::string path =
                (std::filesystem::path(cfg.output_dir) / "tune.csv").string();
            cavac::write_tune_table_csv(path, res.table);
            std::printf("best: s_left = %g%+gi, s_right = %g%+gi\n",
                        res.best.s_left.real(), res.best.s_left.imag(),
                        res.best.s_right.real(), res.best.s_right.imag());
            std::printf("wrote %s\n", path.c_str());
        } else if (cmd_schemes->parsed()) {
            std::vector<cavac::SchemeRetention> rows =
                cavac::compare_schemes(200, 500, 0.1);
            std::filesystem::create_directories(cfg.output_dir);
            const std::string path =
                (std::filesystem::path(cfg.output_dir) / "schemes.csv").string();
            cavac::write_schemes_csv(path, rows);
            for (const cavac::SchemeRetention& r : rows)
                std::printf("%-7s retention=%.4f range=[%.4g, %.4g]\n",
                            cavac::scheme_name(r.scheme).c_str(), r.retention,
                            r.min_final, r.max_final);
            std::printf("wrote %s\n", path.c_str());
        }
    } catch (const cavac::StageError& e) {
        std::cerr << "stage " << e.stage << ": " << e.what() << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
