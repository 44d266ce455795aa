#ifndef CAVAC_PIPELINE_HPP
#define CAVAC_PIPELINE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "cavac/config.hpp"
#include "cavac/krylov.hpp"
#include "cavac/spectra.hpp"

namespace cavac {

/// Stage failure with the exit code the CLI should return
/// (1 config, 2 stage failure, 3 solver non-convergence).
struct StageError : std::runtime_error {
    StageError(std::string stage_, int exit_code_, const std::string& what_)
        : std::runtime_error(what_), stage(std::move(stage_)),
          exit_code(exit_code_) {}
    std::string stage;
    int exit_code;
};

struct PipelineOutcome {
    DominantFrequency dominant;
    SolveReport solve_report;
    std::vector<std::string> artifacts;  // paths written
};

/// Full chain: surrogate transport -> fluctuation spectra -> Helmholtz
/// assembly -> solve -> line profiles. Writes probes.csv, baseline.csv,
/// psd_<probe>.csv, dominant.csv, system.mtx, rhs.csv, solution.csv,
/// profiles.csv and report.csv into cfg.output_dir. Partial artifacts
/// are retained on stage failure.
PipelineOutcome run_pipeline(const PipelineConfig& cfg);

struct BenchRow {
    SolverId solver;
    double h;
    std::size_t n;
    std::size_t iterations;
    bool converged;
    double sequential_time_s;
    double parallel_time_s;
    double speedup;
};

struct BenchTable {
    std::vector<BenchRow> rows;
};

/// Solver x grid-spacing benchmark over a strictly decreasing h ladder.
/// Each cell is assembled once and solved in sequential and in parallel
/// kernel mode; iteration counts must agree between modes.
BenchTable bench_solvers(const PipelineConfig& cfg,
                         const std::vector<double>& h_ladder);

void write_bench_csv(const std::string& path, const BenchTable& table);

struct SchemeRetention {
    SchemeId scheme;
    double peak_initial;
    double peak_final;
    double retention;       // peak_final / peak_initial
    double min_final;
    double max_final;
};

/// Gaussian-pulse amplitude-retention comparison across all five face
/// schemes, pure advection at the given CFL number.
std::vector<SchemeRetention> compare_schemes(std::size_t nx, std::size_t steps,
                                             double cfl);

void write_schemes_csv(const std::string& path,
                       const std::vector<SchemeRetention>& rows);

/// Piecewise-linear interpolation of the roof probes' Fourier
/// coefficients at one bin onto n_nodes roof grid nodes.
CVector interpolate_roof_dirichlet(const std::vector<Spectrum>& probe_spectra,
                                   std::size_t bin, std::size_t n_nodes);

}  // namespace cavac

#endif
