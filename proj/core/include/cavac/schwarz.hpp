#ifndef CAVAC_SCHWARZ_HPP
#define CAVAC_SCHWARZ_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "cavac/helmholtz.hpp"
#include "cavac/krylov.hpp"
#include "cavac/numkit.hpp"

namespace cavac {

/// Non-overlapping vertical strips of interior grid columns. Leftover
/// columns go to the leftmost strips.
struct Partition {
    std::size_t n_sub = 1;
    std::vector<std::size_t> col_begin;    // size n_sub+1, half-open ranges
    std::vector<std::size_t> cut_columns;  // first column of each right strip

    std::size_t strip_width(std::size_t s) const {
        return col_begin[s + 1] - col_begin[s];
    }
};

/// Robin coefficients on the two sides of each cut. The subdomain left
/// of a cut applies s_left on its right boundary, the subdomain right of
/// the cut applies s_right. Equal coefficients give the symmetric
/// one-sided method.
struct TransmissionParams {
    Complex s_left;
    Complex s_right;
};

struct DdmReport {
    std::size_t outer_iterations = 0;
    std::vector<double> interface_residual_history;
    bool converged = false;
    std::vector<SolveReport> per_subdomain_solves;  // last outer sweep
};

struct DdmResult {
    CVector x;
    DdmReport report;
};

Partition partition(const CavityGrid& grid, std::size_t n_sub);

/// Additive (Jacobi-type) optimized Schwarz sweep: every outer step
/// solves each strip's local Helmholtz system with Robin interface data
/// taken from the previous global iterate, then exchanges traces.
/// Converged when the interface update norm drops below ddm_tol times
/// its initial value. n_sub = 1 reduces to a single Krylov solve.
DdmResult schwarz_solve(const HelmholtzProblem& problem, const Partition& part,
                        const TransmissionParams& tp,
                        const SolverOptions& inner, double ddm_tol,
                        std::size_t max_outer,
                        SolverId inner_solver = SolverId::BiCGStab);

struct TuneEntry {
    TransmissionParams params;
    std::size_t outer_iterations;
    std::size_t total_inner_iterations;
    bool converged;
};

struct TuneResult {
    TransmissionParams best;
    std::vector<TuneEntry> table;
};

/// Empirical sweep over candidate Robin coefficients; minimizer by outer
/// iterations, ties broken by total inner iterations. Throws when every
/// candidate diverges.
TuneResult tune_parameters(const HelmholtzProblem& problem,
                           const Partition& part,
                           const std::vector<TransmissionParams>& candidates,
                           const SolverOptions& inner, std::size_t budget);

/// Logarithmic sweep around the wavenumber k: the symmetric i*k
/// baseline, symmetric real/complex coefficients, and a few asymmetric
/// two-sided pairs.
std::vector<TransmissionParams> default_candidate_grid(double k);

void write_ddm_report_csv(const std::string& path, const Partition& part,
                          const TransmissionParams& tp,
                          const DdmReport& report);
void write_tune_table_csv(const std::string& path,
                          const std::vector<TuneEntry>& table);

}  // namespace cavac

#endif
