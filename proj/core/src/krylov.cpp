#include "cavac/krylov.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace cavac {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double true_relative_residual(const CsrMatrix& A, const CVector& b,
                              const CVector& x) {
    CVector r = spmv(A, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    const double bn = norm2(b);
    return bn > 0 ? norm2(r) / bn : norm2(r);
}

}  // namespace

Preconditioner identity_preconditioner() {
    return {[](const CVector& v) { return v; }};
}

Preconditioner jacobi(const CsrMatrix& A) {
    if (A.nrows != A.ncols)
        throw std::invalid_argument("jacobi: matrix must be square");
    CVector inv_diag(A.nrows);
    for (std::size_t i = 0; i < A.nrows; ++i) {
        Complex d(0.0);
        bool found = false;
        for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
            if (A.col_indices[k] == i) {
                d = A.values[k];
                found = true;
                break;
            }
        }
        if (!found || d == Complex(0.0))
            throw std::invalid_argument("jacobi: zero diagonal at row " +
                                        std::to_string(i));
        inv_diag[i] = 1.0 / d;
    }
    return {[inv_diag](const CVector& v) {
        CVector out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = inv_diag[i] * v[i];
        return out;
    }};
}

SolveResult bicgstab(const CsrMatrix& A, const CVector& b,
                     const Preconditioner& M, const SolverOptions& opts) {
    if (A.nrows != A.ncols || A.nrows != b.size())
        throw std::invalid_argument("bicgstab: dimension mismatch");
    const auto t0 = Clock::now();
    SolveResult res;
    res.x.assign(b.size(), Complex(0.0));
    SolveReport& rep = res.report;

    auto op = [&](const CVector& v) { return M.apply(spmv(A, v)); };

    CVector r = M.apply(b);
    const double bnorm = norm2(r);
    if (bnorm == 0.0) {
        rep.converged = true;
        rep.wall_time = seconds_since(t0);
        return res;
    }
    const double brk = 1e-30 * bnorm * bnorm;

    CVector shadow = r;
    CVector p(b.size(), Complex(0.0)), v(b.size(), Complex(0.0));
    Complex rho(1.0), alpha(1.0), omega(1.0);

    for (std::size_t iter = 1; iter <= opts.max_iter; ++iter) {
        const Complex rho_new = dot_hermitian(shadow, r);
        if (std::abs(rho_new) < brk) {
            rep.breakdown = "rho breakdown";
            rep.iterations = iter - 1;
            break;
        }
        if (iter == 1) {
            p = r;
        } else {
            const Complex beta = (rho_new / rho) * (alpha / omega);
            // p = r + beta*(p - omega*v)
            axpy_inplace(-omega, v, p);
            xpay_inplace(beta, p, r);
        }
        rho = rho_new;
        v = op(p);
        const Complex gamma = dot_hermitian(shadow, v);
        if (std::abs(gamma) < brk) {
            rep.breakdown = "stagnation in <shadow, v>";
            rep.iterations = iter - 1;
            break;
        }
        alpha = rho / gamma;
        CVector s = axpy(-alpha, v, r);
        axpy_inplace(alpha, p, res.x);
        double relres = norm2(s) / bnorm;
        if (relres <= opts.tol) {
            rep.converged = true;
            rep.iterations = iter;
            rep.final_relres = relres;
            if (opts.record_history) rep.residual_history.push_back(relres);
            break;
        }
        CVector t = op(s);
        const Complex tt = dot_hermitian(t, t);
        if (std::abs(tt) < brk) {
            rep.breakdown = "omega breakdown";
            rep.iterations = iter;
            break;
        }
        omega = dot_hermitian(t, s) / tt;
        axpy_inplace(omega, s, res.x);
        r = axpy(-omega, t, s);
        relres = norm2(r) / bnorm;
        rep.final_relres = relres;
        rep.iterations = iter;
        if (opts.record_history) rep.residual_history.push_back(relres);
        if (relres <= opts.tol) {
            rep.converged = true;
            break;
        }
    }

    rep.true_relres = true_relative_residual(A, b, res.x);
    rep.wall_time = seconds_since(t0);
    return res;
}

SolveResult bicgstab_l(const CsrMatrix& A, const CVector& b,
                       const Preconditioner& M, const SolverOptions& opts) {
    if (A.nrows != A.ncols || A.nrows != b.size())
        throw std::invalid_argument("bicgstab_l: dimension mismatch");
    if (opts.l < 1) throw std::invalid_argument("bicgstab_l: l must be >= 1");
    const auto t0 = Clock::now();
    const std::size_t l = opts.l;
    SolveResult res;
    res.x.assign(b.size(), Complex(0.0));
    SolveReport& rep = res.report;

    auto op = [&](const CVector& v) { return M.apply(spmv(A, v)); };

    CVector r0 = M.apply(b);
    const double bnorm = norm2(r0);
    if (bnorm == 0.0) {
        rep.converged = true;
        rep.wall_time = seconds_since(t0);
        return res;
    }
    const double brk = 1e-30 * bnorm * bnorm;
    const CVector shadow = r0;

    std::vector<CVector> r(l + 1), u(l + 1);
    r[0] = r0;
    for (std::size_t i = 1; i <= l; ++i) r[i].assign(b.size(), Complex(0.0));
    for (std::size_t i = 0; i <= l; ++i) u[i].assign(b.size(), Complex(0.0));

    Complex rho_old(1.0), alpha(0.0), omega(1.0);
    std::vector<Complex> gamma(l), gamma_p(l), gamma_pp(l), sigma(l);
    std::vector<std::vector<Complex>> tau(l, std::vector<Complex>(l));

    for (std::size_t cycle = 1; cycle <= opts.max_iter; ++cycle) {
        rho_old = -omega * rho_old;

        // BiCG part
        bool broke = false;
        for (std::size_t j = 0; j < l; ++j) {
            const Complex rho = dot_hermitian(shadow, r[j]);
            if (std::abs(rho_old) < brk) {
                rep.breakdown = "rho breakdown";
                broke = true;
                break;
            }
            const Complex beta = alpha * rho / rho_old;
            rho_old = rho;
            for (std::size_t i = 0; i <= j; ++i)
                xpay_inplace(-beta, u[i], r[i]);
            u[j + 1] = op(u[j]);
            const Complex g = dot_hermitian(shadow, u[j + 1]);
            if (std::abs(g) < brk) {
                rep.breakdown = "stagnation in <shadow, u>";
                broke = true;
                break;
            }
            alpha = rho_old / g;
            for (std::size_t i = 0; i <= j; ++i)
                axpy_inplace(-alpha, u[i + 1], r[i]);
            r[j + 1] = op(r[j]);
            axpy_inplace(alpha, u[0], res.x);
            // stop as soon as the running residual is already below the
            // target: continuing the cycle on a numerically zero residual
            // amplifies roundoff without bound
            if (norm2(r[0]) <= opts.tol * bnorm) {
                broke = true;
                break;
            }
        }
        if (broke) {
            // a breakdown right after the residual hit zero is success,
            // not failure (exact solve inside one cycle)
            const double relres = norm2(r[0]) / bnorm;
            rep.final_relres = relres;
            if (relres <= opts.tol) {
                rep.converged = true;
                rep.breakdown.reset();
                rep.iterations = cycle;
                if (opts.record_history) rep.residual_history.push_back(relres);
            } else {
                rep.iterations = cycle - 1;
            }
            break;
        }

        // Minimal-residual part: modified Gram-Schmidt on r[1..l], then the
        // polynomial coefficients.
        for (std::size_t j = 0; j < l; ++j) {
            for (std::size_t i = 0; i < j; ++i) {
                tau[i][j] = dot_hermitian(r[i + 1], r[j + 1]) / sigma[i];
                axpy_inplace(-tau[i][j], r[i + 1], r[j + 1]);
            }
            sigma[j] = dot_hermitian(r[j + 1], r[j + 1]);
            if (std::abs(sigma[j]) < brk) {
                rep.breakdown = "degenerate least-squares in MR step";
                broke = true;
                break;
            }
            gamma_p[j] = dot_hermitian(r[j + 1], r[0]) / sigma[j];
        }
        if (broke) {
            const double relres = norm2(r[0]) / bnorm;
            rep.final_relres = relres;
            rep.iterations = cycle;
            if (relres <= opts.tol) {
                rep.converged = true;
                rep.breakdown.reset();
                if (opts.record_history) rep.residual_history.push_back(relres);
            }
            break;
        }

        gamma[l - 1] = gamma_p[l - 1];
        omega = gamma[l - 1];
        for (std::size_t jj = l - 1; jj-- > 0;) {
            gamma[jj] = gamma_p[jj];
            for (std::size_t i = jj + 1; i < l; ++i)
                gamma[jj] -= tau[jj][i] * gamma[i];
        }
        for (std::size_t j = 0; j + 1 < l; ++j) {
            gamma_pp[j] = gamma[j + 1];
            for (std::size_t i = j + 1; i + 1 < l; ++i)
                gamma_pp[j] += tau[j][i] * gamma[i + 1];
        }

        axpy_inplace(gamma[0], r[0], res.x);
        axpy_inplace(-gamma_p[l - 1], r[l], r[0]);
        axpy_inplace(-gamma[l - 1], u[l], u[0]);
        for (std::size_t j = 1; j < l; ++j) {
            axpy_inplace(-gamma[j - 1], u[j], u[0]);
            axpy_inplace(gamma_pp[j - 1], r[j], res.x);
            axpy_inplace(-gamma_p[j - 1], r[j], r[0]);
        }

        const double relres = norm2(r[0]) / bnorm;
        rep.final_relres = relres;
        rep.iterations = cycle;
        if (opts.record_history) rep.residual_history.push_back(relres);
        if (relres <= opts.tol) {
            rep.converged = true;
            break;
        }
    }

    rep.true_relres = true_relative_residual(A, b, res.x);
    rep.wall_time = seconds_since(t0);
    return res;
}

SolveResult tfqmr(const CsrMatrix& A, const CVector& b,
                  const Preconditioner& M, const SolverOptions& opts) {
    if (A.nrows != A.ncols || A.nrows != b.size())
        throw std::invalid_argument("tfqmr: dimension mismatch");
    const auto t0 = Clock::now();
    SolveResult res;
    res.x.assign(b.size(), Complex(0.0));
    SolveReport& rep = res.report;

    auto op = [&](const CVector& v) { return M.apply(spmv(A, v)); };

    CVector r = M.apply(b);
    const double bnorm = norm2(r);
    if (bnorm == 0.0) {
        rep.converged = true;
        rep.wall_time = seconds_since(t0);
        return res;
    }
    const double brk = 1e-30 * bnorm * bnorm;

    const CVector shadow = r;
    CVector w = r;
    CVector u = r;        // u_j
    CVector au = op(u);   // A' u_j with A' = M^{-1} A
    CVector v = au;
    CVector d(b.size(), Complex(0.0));
    double tau = bnorm, theta = 0.0;
    Complex eta(0.0), rho = dot_hermitian(shadow, r), alpha(0.0);

    for (std::size_t halfstep = 0; halfstep < 2 * opts.max_iter; ++halfstep) {
        const bool even = (halfstep % 2 == 0);
        if (even) {
            const Complex sigma = dot_hermitian(shadow, v);
            if (std::abs(sigma) < brk) {
                rep.breakdown = "sigma breakdown";
                break;
            }
            alpha = rho / sigma;
        }
        // w_{j+1} = w_j - alpha A' u_j
        axpy_inplace(-alpha, au, w);
        // d_{j+1} = u_j + (theta^2 eta / alpha) d_j
        xpay_inplace(theta * theta * eta / alpha, d, u);
        theta = norm2(w) / tau;
        const double c = 1.0 / std::sqrt(1.0 + theta * theta);
        tau = tau * theta * c;
        eta = c * c * alpha;
        axpy_inplace(eta, d, res.x);

        // quasi-residual bound ||r|| <= tau * sqrt(j+2)
        const double relres =
            tau * std::sqrt(static_cast<double>(halfstep + 2)) / bnorm;
        rep.final_relres = relres;
        rep.iterations = halfstep / 2 + 1;
        if (!even && opts.record_history)
            rep.residual_history.push_back(relres);
        if (relres <= opts.tol) {
            rep.converged = true;
            break;
        }

        if (even) {
            // u_{j+1} = u_j - alpha v
            axpy_inplace(-alpha, v, u);
            au = op(u);
        } else {
            const Complex rho_new = dot_hermitian(shadow, w);
            if (std::abs(rho) < brk) {
                rep.breakdown = "rho breakdown";
                break;
            }
            const Complex beta = rho_new / rho;
            rho = rho_new;
            CVector u_next = w;
            axpy_inplace(beta, u, u_next);
            CVector au_next = op(u_next);
            // v = A' u_{j+1} + beta (A' u_j + beta v)
            xpay_inplace(beta, v, au);
            xpay_inplace(beta, v, au_next);
            u = std::move(u_next);
            au = std::move(au_next);
        }
    }

    rep.true_relres = true_relative_residual(A, b, res.x);
    rep.wall_time = seconds_since(t0);
    return res;
}

SolverId solver_from_name(const std::string& name) {
    if (name == "bicgstab") return SolverId::BiCGStab;
    if (name == "bicgstab_l") return SolverId::BiCGStabL;
    if (name == "tfqmr") return SolverId::TfQmr;
    throw std::invalid_argument(
        "unknown solver \"" + name +
        "\" (allowed: bicgstab, bicgstab_l, tfqmr)");
}

std::string solver_name(SolverId id) {
    switch (id) {
        case SolverId::BiCGStab: return "bicgstab";
        case SolverId::BiCGStabL: return "bicgstab_l";
        case SolverId::TfQmr: return "tfqmr";
    }
    return "?";
}

SolveResult solve(SolverId id, const CsrMatrix& A, const CVector& b,
                  const Preconditioner& M, const SolverOptions& opts) {
    switch (id) {
        case SolverId::BiCGStab: return bicgstab(A, b, M, opts);
        case SolverId::BiCGStabL: return bicgstab_l(A, b, M, opts);
        case SolverId::TfQmr: return tfqmr(A, b, M, opts);
    }
    throw std::logic_error("solve: unreachable");
}

}  // namespace cavac
