#include "cavac/schwarz.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cavac {

namespace {

struct LocalSystem {
    std::size_t c0, c1;  // owned global columns, half-open
    CsrMatrix A;
    Preconditioner M;
    // Robin elimination weight k2 / (1/h + s/2) per side, applied to the
    // neighbor trace functional when building the local rhs.
    Complex rhs_weight_left{0.0};
    Complex rhs_weight_right{0.0};
};

std::size_t local_index(const LocalSystem& ls, std::size_t ny, std::size_t gx,
                        std::size_t iy) {
    const std::size_t w = ls.c1 - ls.c0;
    (void)ny;
    return iy * w + (gx - ls.c0);
}

// Local matrix: global rows of the owned columns with cross-cut couplings
// replaced by the eliminated Robin ghost term on the diagonal.
LocalSystem build_local(const HelmholtzProblem& p, std::size_t c0,
                        std::size_t c1, bool has_left_cut, bool has_right_cut,
                        const TransmissionParams& tp) {
    const CavityGrid& g = p.grid;
    const double h = g.h;
    const double k2 = p.c * p.c / (h * h);
    const std::size_t width = c1 - c0;
    const std::size_t n_local = width * g.ny;

    // subdomain right of a cut applies s_right, left of a cut s_left
    const Complex s_at_left_cut = tp.s_right;
    const Complex s_at_right_cut = tp.s_left;
    const Complex den_left = Complex(1.0 / h) + 0.5 * s_at_left_cut;
    const Complex den_right = Complex(1.0 / h) + 0.5 * s_at_right_cut;

    LocalSystem ls;
    ls.c0 = c0;
    ls.c1 = c1;
    if (has_left_cut) ls.rhs_weight_left = k2 / den_left;
    if (has_right_cut) ls.rhs_weight_right = k2 / den_right;

    std::vector<Triplet> trip;
    trip.reserve(5 * n_local);
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
        for (std::size_t gx = c0; gx < c1; ++gx) {
            const std::size_t grow = g.node(gx, iy);
            const std::size_t lrow = local_index(ls, g.ny, gx, iy);
            Complex diag_extra(0.0);
            for (std::size_t k = p.A.row_offsets[grow];
                 k < p.A.row_offsets[grow + 1]; ++k) {
                const std::size_t gcol = p.A.col_indices[k];
                const std::size_t cx = gcol % g.nx;
                if (cx >= c0 && cx < c1) {
                    const std::size_t cy = gcol / g.nx;
                    trip.push_back(
                        {lrow, local_index(ls, g.ny, cx, cy), p.A.values[k]});
                } else if (cx == c0 - 1 && has_left_cut) {
                    // ghost column, eliminated: phi_ghost =
                    //   (g + (1/h - s/2) phi_edge) / (1/h + s/2)
                    diag_extra +=
                        p.A.values[k] *
                        ((Complex(1.0 / h) - 0.5 * s_at_left_cut) / den_left);
                } else if (cx == c1 && has_right_cut) {
                    diag_extra +=
                        p.A.values[k] *
                        ((Complex(1.0 / h) - 0.5 * s_at_right_cut) / den_right);
                } else {
                    throw std::logic_error(
                        "build_local: unexpected cross coupling");
                }
            }
            if (diag_extra != Complex(0.0))
                trip.push_back({lrow, lrow, diag_extra});
        }
    }
    ls.A = csr_from_triplets(trip, n_local, n_local);
    ls.M = jacobi(ls.A);
    return ls;
}

}  // namespace

Partition partition(const CavityGrid& grid, std::size_t n_sub) {
    if (n_sub < 1) throw std::invalid_argument("partition: n_sub must be >= 1");
    if (n_sub > 1 && grid.nx / 3 < n_sub)
        throw std::invalid_argument(
            "partition: too many subdomains, each strip needs >= 3 columns");
    Partition part;
    part.n_sub = n_sub;
    part.col_begin.resize(n_sub + 1);
    const std::size_t base = grid.nx / n_sub;
    const std::size_t rem = grid.nx % n_sub;
    part.col_begin[0] = 0;
    for (std::size_t s = 0; s < n_sub; ++s)
        part.col_begin[s + 1] = part.col_begin[s] + base + (s < rem ? 1 : 0);
    for (std::size_t s = 1; s < n_sub; ++s)
        part.cut_columns.push_back(part.col_begin[s]);
    return part;
}

DdmResult schwarz_solve(const HelmholtzProblem& problem, const Partition& part,
                        const TransmissionParams& tp,
                        const SolverOptions& inner, double ddm_tol,
                        std::size_t max_outer, SolverId inner_solver) {
    const CavityGrid& g = problem.grid;
    DdmResult res;

    if (part.n_sub == 1) {
        Preconditioner M = jacobi(problem.A);
        SolveResult sr = solve(inner_solver, problem.A, problem.b, M, inner);
        res.x = std::move(sr.x);
        res.report.outer_iterations = 1;
        res.report.converged = sr.report.converged;
        res.report.per_subdomain_solves.push_back(sr.report);
        return res;
    }

    const double h = g.h;
    std::vector<LocalSystem> locals;
    locals.reserve(part.n_sub);
    for (std::size_t s = 0; s < part.n_sub; ++s)
        locals.push_back(build_local(problem, part.col_begin[s],
                                     part.col_begin[s + 1], s > 0,
                                     s + 1 < part.n_sub, tp));

    // Robin interface data, one value per (cut, row) and side. gl feeds
    // the left subdomain's right-cut condition (coefficient s_left), gr
    // the right subdomain's left-cut condition (coefficient s_right).
    const std::size_t n_cuts = part.cut_columns.size();
    std::vector<CVector> gl(n_cuts, CVector(g.ny, Complex(0.0)));
    std::vector<CVector> gr(n_cuts, CVector(g.ny, Complex(0.0)));
    const Complex a_l = Complex(1.0 / h) + 0.5 * tp.s_left;
    const Complex b_l = Complex(-1.0 / h) + 0.5 * tp.s_left;
    const Complex a_r = Complex(1.0 / h) + 0.5 * tp.s_right;
    const Complex b_r = Complex(-1.0 / h) + 0.5 * tp.s_right;
    const Complex s_sum = tp.s_left + tp.s_right;

    CVector x(g.size(), Complex(0.0));
    double res0 = -1.0;
    DdmReport& rep = res.report;

    for (std::size_t outer = 1; outer <= max_outer; ++outer) {
        rep.per_subdomain_solves.clear();
        CVector x_new(g.size(), Complex(0.0));
        std::vector<CVector> u_loc(part.n_sub);
        bool inner_ok = true;

        for (std::size_t s = 0; s < part.n_sub; ++s) {
            const LocalSystem& ls = locals[s];
            CVector rhs(ls.A.nrows);
            for (std::size_t iy = 0; iy < g.ny; ++iy)
                for (std::size_t gx = ls.c0; gx < ls.c1; ++gx)
                    rhs[local_index(ls, g.ny, gx, iy)] =
                        problem.b[g.node(gx, iy)];

            if (s > 0) {
                for (std::size_t iy = 0; iy < g.ny; ++iy)
                    rhs[local_index(ls, g.ny, ls.c0, iy)] +=
                        ls.rhs_weight_left * gr[s - 1][iy];
            }
            if (s + 1 < part.n_sub) {
                for (std::size_t iy = 0; iy < g.ny; ++iy)
                    rhs[local_index(ls, g.ny, ls.c1 - 1, iy)] +=
                        ls.rhs_weight_right * gl[s][iy];
            }

            SolveResult sr = solve(inner_solver, ls.A, rhs, ls.M, inner);
            rep.per_subdomain_solves.push_back(sr.report);
            if (sr.report.breakdown) inner_ok = false;
            for (std::size_t iy = 0; iy < g.ny; ++iy)
                for (std::size_t gx = ls.c0; gx < ls.c1; ++gx)
                    x_new[g.node(gx, iy)] =
                        sr.x[local_index(ls, g.ny, gx, iy)];
            u_loc[s] = std::move(sr.x);
        }

        // exchange: each side's new data is minus the opposite data plus
        // (s_left + s_right) times the neighbor's interface trace, the
        // trace being the mean of its edge value and eliminated ghost
        for (std::size_t cidx = 0; cidx < n_cuts; ++cidx) {
            const std::size_t cut = part.cut_columns[cidx];
            const LocalSystem& lsl = locals[cidx];
            const LocalSystem& lsr = locals[cidx + 1];
            for (std::size_t iy = 0; iy < g.ny; ++iy) {
                const Complex edge_l =
                    u_loc[cidx][local_index(lsl, g.ny, cut - 1, iy)];
                const Complex edge_r =
                    u_loc[cidx + 1][local_index(lsr, g.ny, cut, iy)];
                const Complex ghost_l = (gl[cidx][iy] - b_l * edge_l) / a_l;
                const Complex ghost_r = (gr[cidx][iy] - b_r * edge_r) / a_r;
                const Complex gr_new =
                    -gl[cidx][iy] + s_sum * 0.5 * (ghost_l + edge_l);
                const Complex gl_new =
                    -gr[cidx][iy] + s_sum * 0.5 * (ghost_r + edge_r);
                gr[cidx][iy] = gr_new;
                gl[cidx][iy] = gl_new;
            }
        }

        // interface update norm across all cuts
        double jump2 = 0.0;
        for (std::size_t cut : part.cut_columns) {
            for (std::size_t iy = 0; iy < g.ny; ++iy) {
                jump2 += std::norm(x_new[g.node(cut - 1, iy)] -
                                   x[g.node(cut - 1, iy)]);
                jump2 += std::norm(x_new[g.node(cut, iy)] -
                                   x[g.node(cut, iy)]);
            }
        }
        const double jump = std::sqrt(jump2);
        rep.interface_residual_history.push_back(jump);
        rep.outer_iterations = outer;
        x = std::move(x_new);

        if (!inner_ok) {
            rep.converged = false;
            break;
        }
        if (res0 < 0.0) res0 = jump;
        if (jump == 0.0 || jump <= ddm_tol * res0) {
            rep.converged = true;
            break;
        }
    }

    res.x = std::move(x);
    return res;
}

TuneResult tune_parameters(const HelmholtzProblem& problem,
                           const Partition& part,
                           const std::vector<TransmissionParams>& candidates,
                           const SolverOptions& inner, std::size_t budget) {
    if (candidates.empty())
        throw std::invalid_argument("tune_parameters: empty candidate grid");
    TuneResult out;
    bool any = false;
    std::size_t best_outer = 0, best_inner = 0;
    for (const TransmissionParams& tp : candidates) {
        DdmResult r = schwarz_solve(problem, part, tp, inner, 1e-6, budget);
        TuneEntry e;
        e.params = tp;
        e.outer_iterations = r.report.outer_iterations;
        e.converged = r.report.converged;
        e.total_inner_iterations = 0;
        for (const SolveReport& sr : r.report.per_subdomain_solves)
            e.total_inner_iterations += sr.iterations;
        out.table.push_back(e);
        if (!e.converged) continue;
        if (!any || e.outer_iterations < best_outer ||
            (e.outer_iterations == best_outer &&
             e.total_inner_iterations < best_inner)) {
            any = true;
            best_outer = e.outer_iterations;
            best_inner = e.total_inner_iterations;
            out.best = tp;
        }
    }
    if (!any) {
        std::string msg = "tune_parameters: all candidates diverged;";
        for (const TuneEntry& e : out.table)
            msg += " (" + std::to_string(e.params.s_left.real()) + "+" +
                   std::to_string(e.params.s_left.imag()) + "i / " +
                   std::to_string(e.params.s_right.real()) + "+" +
                   std::to_string(e.params.s_right.imag()) + "i: " +
                   std::to_string(e.outer_iterations) + ")";
        throw std::runtime_error(msg);
    }
    return out;
}

std::vector<TransmissionParams> default_candidate_grid(double k) {
    std::vector<TransmissionParams> out;
    const Complex ik(0.0, k);
    out.push_back({ik, ik});  // symmetric baseline
    const double re_scales[] = {0.25, 1.0, 4.0, 16.0, 64.0};
    const double im_scales[] = {0.0, 0.25, 1.0, 4.0, 16.0};
    for (double rs : re_scales) {
        for (double is : im_scales) {
            const Complex s(rs * k, is * k);
            out.push_back({s, s});
        }
    }
    // two-sided pairs
    for (double rs : re_scales) {
        const Complex s(rs * k, k);
        out.push_back({s, 2.0 * s});
        out.push_back({2.0 * s, s});
    }
    return out;
}

void write_ddm_report_csv(const std::string& path, const Partition& part,
                          const TransmissionParams& tp,
                          const DdmReport& report) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "n_sub,s_left_re,s_left_im,s_right_re,s_right_im,outer_iters,"
          "converged\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%zu,%d\n",
                  part.n_sub, tp.s_left.real(), tp.s_left.imag(),
                  tp.s_right.real(), tp.s_right.imag(),
                  report.outer_iterations, report.converged ? 1 : 0);
    os << buf;
}

void write_tune_table_csv(const std::string& path,
                          const std::vector<TuneEntry>& table) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "s_left_re,s_left_im,s_right_re,s_right_im,outer_iters,"
          "total_inner_iters,converged\n";
    char buf[200];
    for (const TuneEntry& e : table) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%zu,%zu,%d\n",
                      e.params.s_left.real(), e.params.s_left.imag(),
                      e.params.s_right.real(), e.params.s_right.imag(),
                      e.outer_iterations, e.total_inner_iterations,
                      e.converged ? 1 : 0);
        os << buf;
    }
}

}  // namespace cavac
