#include "cavac/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "cavac/fvschemes.hpp"
#include "cavac/helmholtz.hpp"
#include "cavac/mmio.hpp"
#include "cavac/schwarz.hpp"

namespace cavac {

namespace fs = std::filesystem;

namespace {

void write_psd_csv(const std::string& path, const std::vector<double>& p,
                   double sample_rate) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "bin,freq_hz,psd\n";
    const std::size_t N = 2 * (p.size() - 1);
    char buf[96];
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double f = static_cast<double>(k) * sample_rate /
                         static_cast<double>(N);
        std::snprintf(buf, sizeof buf, "%zu,%.9g,%.17g\n", k, f, p[k]);
        os << buf;
    }
}

void write_solution_csv(const std::string& path, const CVector& x) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "index,re,im\n";
    char buf[96];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, x[i].real(),
                      x[i].imag());
        os << buf;
    }
}

void write_report_csv(const std::string& path, SolverId solver, double h,
                      std::size_t n, const SolveReport& rep) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "solver,h,n,iterations,converged,final_relres,true_relres,"
          "wall_time_s\n";
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%.17g,%zu,%zu,%d,%.17g,%.17g,%.6g\n",
                  solver_name(solver).c_str(), h, n, rep.iterations,
                  rep.converged ? 1 : 0, rep.final_relres, rep.true_relres,
                  rep.wall_time);
    os << buf;
}

}  // namespace

CVector interpolate_roof_dirichlet(const std::vector<Spectrum>& probe_spectra,
                                   std::size_t bin, std::size_t n_nodes) {
    if (probe_spectra.empty())
        throw std::invalid_argument("interpolate_roof_dirichlet: no spectra");
    const std::size_t m = probe_spectra.size();
    CVector coeffs(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (bin >= probe_spectra[i].size())
            throw std::invalid_argument(
                "interpolate_roof_dirichlet: bin out of range");
        coeffs[i] = probe_spectra[i].bins[bin];
    }
    CVector out(n_nodes);
    for (std::size_t j = 0; j < n_nodes; ++j) {
        if (m == 1 || n_nodes == 1) {
            out[j] = coeffs[0];
            continue;
        }
        const double t = static_cast<double>(j) /
                         static_cast<double>(n_nodes - 1) *
                         static_cast<double>(m - 1);
        const std::size_t i0 =
            std::min(static_cast<std::size_t>(t), m - 2);
        const double w = t - static_cast<double>(i0);
        out[j] = (1.0 - w) * coeffs[i0] + w * coeffs[i0 + 1];
    }
    return out;
}

PipelineOutcome run_pipeline(const PipelineConfig& cfg) {
    PipelineOutcome out;
    fs::create_directories(cfg.output_dir);
    auto path = [&](const std::string& name) {
        return (fs::path(cfg.output_dir) / name).string();
    };
    auto emit = [&](const std::string& p) { out.artifacts.push_back(p); };

    // transport stage: disturbed run plus undisturbed baseline
    TransportResult disturbed, baseline;
    try {
        disturbed = advect(cfg.transport, cfg.scheme);
        TransportConfig base_cfg = cfg.transport;
        base_cfg.disturbance.W0 = 0.0;
        baseline = advect(base_cfg, cfg.scheme);
        write_probe_csv(path("probes.csv"), disturbed.probes);
        emit(path("probes.csv"));
        write_probe_csv(path("baseline.csv"), baseline.probes);
        emit(path("baseline.csv"));
    } catch (const std::exception& e) {
        throw StageError("transport", 2, e.what());
    }

    // spectra stage
    std::vector<Spectrum> spectra;
    try {
        std::ofstream dom(path("dominant.csv"));
        dom << "probe_id,f_peak_hz,power\n";
        bool have_dominant = false;
        for (std::size_t p = 0; p < disturbed.probes.size(); ++p) {
            TimeSeries fluct = extract_fluctuation(
                disturbed.probes[p].samples, baseline.probes[p].samples);
            Spectrum s = fft(fluct, cfg.fft_n);
            std::vector<double> pwr = psd(s);
            write_psd_csv(path("psd_" + std::to_string(p) + ".csv"), pwr,
                          s.sample_rate);
            emit(path("psd_" + std::to_string(p) + ".csv"));
            spectra.push_back(std::move(s));
            DominantFrequency d = dominant_frequency(pwr, spectra[p].sample_rate);
            char buf[96];
            std::snprintf(buf, sizeof buf, "%zu,%.9g,%.17g\n", p, d.f_peak,
                          d.power);
            dom << buf;
            if (p == cfg.transport.roof_begin) {
                out.dominant = d;
                have_dominant = true;
            }
        }
        dom.close();
        emit(path("dominant.csv"));
        if (!have_dominant)
            throw std::runtime_error("no roof probe produced a spectrum");
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError("spectra", 2, e.what());
    }

    // Helmholtz stage
    HelmholtzProblem problem;
    try {
        CavityGrid grid =
            build_grid(cfg.cavity.width, cfg.cavity.height, cfg.cavity.h,
                       cfg.cavity.roof_start, cfg.cavity.roof_end,
                       cfg.cavity.admittance);
        const double omega = 2.0 * std::numbers::pi * out.dominant.f_peak;
        const std::size_t peak_bin = static_cast<std::size_t>(std::llround(
            out.dominant.f_peak * static_cast<double>(cfg.fft_n) /
            spectra[cfg.transport.roof_begin].sample_rate));
        std::vector<Spectrum> roof_spectra(
            spectra.begin() + static_cast<std::ptrdiff_t>(cfg.transport.roof_begin),
            spectra.begin() + static_cast<std::ptrdiff_t>(cfg.transport.roof_end));
        CVector dirichlet =
            interpolate_roof_dirichlet(roof_spectra, peak_bin, grid.roof_size());
        problem = assemble(grid, omega, cfg.sound_speed, dirichlet);
        write_matrix_market(path("system.mtx"), problem.A);
        emit(path("system.mtx"));
        write_rhs_csv(path("rhs.csv"), problem.b);
        emit(path("rhs.csv"));
    } catch (const std::exception& e) {
        throw StageError("helmholtz", 2, e.what());
    }

    // solve stage
    CVector solution;
    try {
        if (cfg.ddm.enabled) {
            Partition part = partition(problem.grid, cfg.ddm.n_sub);
            TransmissionParams tp = cfg.ddm.params;
            const double k = problem.omega / problem.c;
            if (tp.s_left == Complex(0.0)) tp.s_left = Complex(0.0, k);
            if (tp.s_right == Complex(0.0)) tp.s_right = Complex(0.0, k);
            DdmResult r = schwarz_solve(problem, part, tp, cfg.solver_opts,
                                        cfg.ddm.tol, cfg.ddm.max_outer,
                                        cfg.solver);
            solution = std::move(r.x);
            write_ddm_report_csv(path("ddm_report.csv"), part, tp, r.report);
            emit(path("ddm_report.csv"));
            out.solve_report = r.report.per_subdomain_solves.empty()
                                   ? SolveReport{}
                                   : r.report.per_subdomain_solves.front();
            out.solve_report.converged = r.report.converged;
            out.solve_report.iterations = r.report.outer_iterations;
        } else {
            Preconditioner M = jacobi(problem.A);
            SolveResult r =
                solve(cfg.solver, problem.A, problem.b, M, cfg.solver_opts);
            solution = std::move(r.x);
            out.solve_report = r.report;
        }
        write_solution_csv(path("solution.csv"), solution);
        emit(path("solution.csv"));
        write_report_csv(path("report.csv"), cfg.solver, problem.grid.h,
                         problem.grid.size(), out.solve_report);
        emit(path("report.csv"));
    } catch (const std::exception& e) {
        throw StageError("solve", 2, e.what());
    }
    if (!out.solve_report.converged)
        throw StageError("solve", 3, "solver did not converge");

    // profile stage
    try {
        std::vector<LineProfile> profiles =
            sample_lines(problem, solution, cfg.lines);
        write_profiles_csv(path("profiles.csv"), profiles);
        emit(path("profiles.csv"));
    } catch (const std::exception& e) {
        throw StageError("profiles", 2, e.what());
    }

    return out;
}

BenchTable bench_solvers(const PipelineConfig& cfg,
                         const std::vector<double>& h_ladder) {
    if (h_ladder.empty())
        throw std::invalid_argument("bench_solvers: empty h ladder");
    for (std::size_t i = 1; i < h_ladder.size(); ++i)
        if (!(h_ladder[i] < h_ladder[i - 1]))
            throw std::invalid_argument(
                "bench_solvers: ladder must be strictly decreasing");

    const ExecMode saved = exec_mode();
    BenchTable table;
    const double f_default = 13.0;  // dominant cavity response
    for (SolverId solver_id :
         {SolverId::BiCGStab, SolverId::BiCGStabL, SolverId::TfQmr}) {
        for (double h : h_ladder) {
            CavityGrid grid =
                build_grid(cfg.cavity.width, cfg.cavity.height, h,
                           cfg.cavity.roof_start, cfg.cavity.roof_end,
                           cfg.cavity.admittance);
            const double omega = 2.0 * std::numbers::pi * f_default;
            CVector dirichlet(grid.roof_size(), Complex(1.0));
            HelmholtzProblem problem =
                assemble(grid, omega, cfg.sound_speed, dirichlet);
            Preconditioner M = jacobi(problem.A);

            // Untimed warmup, then alternating timed runs; keep the
            // fastest of each mode so scheduler noise does not decide
            // the speed-up column.
            set_exec_mode(ExecMode::Sequential);
            SolveResult seq =
                solve(solver_id, problem.A, problem.b, M, cfg.solver_opts);
            set_exec_mode(ExecMode::Parallel);
            SolveResult par =
                solve(solver_id, problem.A, problem.b, M, cfg.solver_opts);
            for (int rep = 0; rep < 9; ++rep) {
                set_exec_mode(ExecMode::Sequential);
                SolveResult s2 =
                    solve(solver_id, problem.A, problem.b, M, cfg.solver_opts);
                if (s2.report.wall_time < seq.report.wall_time) seq = s2;
                set_exec_mode(ExecMode::Parallel);
                SolveResult p2 =
                    solve(solver_id, problem.A, problem.b, M, cfg.solver_opts);
                if (p2.report.wall_time < par.report.wall_time) par = p2;
            }
            set_exec_mode(saved);

            if (seq.report.iterations != par.report.iterations)
                throw std::logic_error(
                    "bench_solvers: iteration counts differ between modes");

            BenchRow row;
            row.solver = solver_id;
            row.h = h;
            row.n = grid.size();
            row.iterations = seq.report.iterations;
            row.converged = seq.report.converged && par.report.converged;
            row.sequential_time_s = seq.report.wall_time;
            row.parallel_time_s = par.report.wall_time;
            row.speedup = par.report.wall_time > 0
                              ? seq.report.wall_time / par.report.wall_time
                              : 0.0;
            table.rows.push_back(row);
        }
    }
    set_exec_mode(saved);
    return table;
}

void write_bench_csv(const std::string& path, const BenchTable& table) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "solver,h,n,iterations,converged,seq_time_s,par_time_s,speedup\n";
    char buf[256];
    for (const BenchRow& r : table.rows) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%zu,%zu,%d,%.6g,%.6g,%.3g\n",
                      solver_name(r.solver).c_str(), r.h, r.n, r.iterations,
                      r.converged ? 1 : 0, r.sequential_time_s,
                      r.parallel_time_s, r.speedup);
        os << buf;
    }
}

std::vector<SchemeRetention> compare_schemes(std::size_t nx, std::size_t steps,
                                             double cfl) {
    TransportConfig cfg;
    cfg.nx = nx;
    cfg.ny = 1;
    cfg.dx = 1.0 / static_cast<double>(nx);
    cfg.dy = cfg.dx;
    cfg.dt = 1e-3;
    cfg.u = cfl * cfg.dx / cfg.dt;
    cfg.diffusivity = 0.0;
    cfg.steps = steps;
    cfg.disturbance = {0.0, 0.0};
    cfg.probes = {{nx / 2, 0}};
    cfg.roof_begin = 0;
    cfg.roof_end = 1;

    // Gaussian pulse far enough from the inflow; it must stay inside the
    // domain over the run (steps * cfl cells of travel).
    std::vector<double> init(nx, 0.0);
    const double center = 25.0, sigma = 6.0;
    for (std::size_t i = 0; i < nx; ++i) {
        const double d = (static_cast<double>(i) - center) / sigma;
        init[i] = std::exp(-0.5 * d * d);
    }
    double peak0 = 0.0;
    for (double v : init) peak0 = std::max(peak0, v);

    std::vector<SchemeRetention> out;
    for (SchemeId s : {SchemeId::UDS, SchemeId::CDS, SchemeId::QUICK,
                       SchemeId::SMART, SchemeId::HQUICK}) {
        TransportResult r = advect(cfg, s, init);
        SchemeRetention row;
        row.scheme = s;
        row.peak_initial = peak0;
        row.peak_final = 0.0;
        row.min_final = r.final_field[0];
        row.max_final = r.final_field[0];
        for (double v : r.final_field) {
            row.peak_final = std::max(row.peak_final, v);
            row.min_final = std::min(row.min_final, v);
            row.max_final = std::max(row.max_final, v);
        }
        row.retention = row.peak_final / row.peak_initial;
        out.push_back(row);
    }
    return out;
}

void write_schemes_csv(const std::string& path,
                       const std::vector<SchemeRetention>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "scheme,peak_initial,peak_final,retention,min_final,max_final\n";
    char buf[200];
    for (const SchemeRetention& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      scheme_name(r.scheme).c_str(), r.peak_initial,
                      r.peak_final, r.retention, r.min_final, r.max_final);
        os << buf;
    }
}

}  // namespace cavac
