#ifndef CAVAC_KRYLOV_HPP
#define CAVAC_KRYLOV_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cavac/numkit.hpp"

namespace cavac {

struct SolverOptions {
    double tol = 1e-9;       // relative residual target
    std::size_t max_iter = 10000;
    std::size_t l = 8;       // polynomial degree for bicgstab_l
    bool record_history = false;
};

/// Left preconditioner, x -> M^{-1} x.
struct Preconditioner {
    std::function<CVector(const CVector&)> apply;
};

struct SolveReport {
    bool converged = false;
    std::size_t iterations = 0;
    double final_relres = 0.0;  // preconditioned, as recurred by the solver
    double true_relres = 0.0;   // recomputed ||b - Ax|| / ||b||
    double wall_time = 0.0;     // seconds
    std::vector<double> residual_history;
    std::optional<std::string> breakdown;
};

Preconditioner identity_preconditioner();

/// Jacobi (diagonal) preconditioner. Throws if any diagonal entry is
/// missing or zero.
Preconditioner jacobi(const CsrMatrix& A);

struct SolveResult {
    CVector x;
    SolveReport report;
};

// All solvers: left preconditioning, x0 = 0, shadow residual = initial
// residual. Convergence is tested on the preconditioned relative
// residual; the true unpreconditioned residual is recomputed into the
// report after the iteration stops.
SolveResult bicgstab(const CsrMatrix& A, const CVector& b,
                     const Preconditioner& M, const SolverOptions& opts);

/// BiCGSTAB(l); iterations counts outer cycles of l BiCG steps plus one
/// degree-l minimal-residual polynomial step.
SolveResult bicgstab_l(const CsrMatrix& A, const CVector& b,
                       const Preconditioner& M, const SolverOptions& opts);

/// Transpose-free QMR; one iteration is a pair of half-steps. The
/// quasi-residual norm is nonincreasing.
SolveResult tfqmr(const CsrMatrix& A, const CVector& b,
                  const Preconditioner& M, const SolverOptions& opts);

enum class SolverId { BiCGStab, BiCGStabL, TfQmr };

SolverId solver_from_name(const std::string& name);
std::string solver_name(SolverId id);

SolveResult solve(SolverId id, const CsrMatrix& A, const CVector& b,
                  const Preconditioner& M, const SolverOptions& opts);

}  // namespace cavac

#endif
