#include "cavac/numkit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#ifdef CAVAC_HAVE_OPENMP
#include <omp.h>
#endif

namespace cavac {

namespace {
std::atomic<ExecMode> g_mode{ExecMode::Sequential};

// With a single OpenMP thread the parallel region is pure overhead, so
// parallel mode degenerates to the sequential loop body.
bool parallel_worthwhile() {
#ifdef CAVAC_HAVE_OPENMP
    return omp_get_max_threads() > 1;
#else
    return false;
#endif
}
}

void set_exec_mode(ExecMode mode) { g_mode.store(mode); }
ExecMode exec_mode() { return g_mode.load(); }

std::vector<Triplet> CsrMatrix::to_triplets() const {
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (std::size_t i = 0; i < nrows; ++i)
        for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
            t.push_back({i, col_indices[k], values[k]});
    return t;
}

CsrMatrix csr_from_triplets(const std::vector<Triplet>& triplets,
                            std::size_t nrows, std::size_t ncols) {
    for (const auto& t : triplets) {
        if (t.row >= nrows || t.col >= ncols)
            throw std::invalid_argument(
                "csr_from_triplets: index out of range at (" +
                std::to_string(t.row) + ", " + std::to_string(t.col) + ")");
    }
    std::vector<Triplet> sorted = triplets;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Triplet& a, const Triplet& b) {
                         return std::tie(a.row, a.col) < std::tie(b.row, b.col);
                     });

    CsrMatrix A;
    A.nrows = nrows;
    A.ncols = ncols;
    A.row_offsets.assign(nrows + 1, 0);
    for (std::size_t k = 0; k < sorted.size();) {
        std::size_t j = k + 1;
        Complex sum = sorted[k].value;
        while (j < sorted.size() && sorted[j].row == sorted[k].row &&
               sorted[j].col == sorted[k].col) {
            sum += sorted[j].value;
            ++j;
        }
        A.col_indices.push_back(sorted[k].col);
        A.values.push_back(sum);
        ++A.row_offsets[sorted[k].row + 1];
        k = j;
    }
    for (std::size_t i = 0; i < nrows; ++i)
        A.row_offsets[i + 1] += A.row_offsets[i];
    return A;
}

CsrMatrix csr_identity(std::size_t n) {
    CsrMatrix A;
    A.nrows = A.ncols = n;
    A.row_offsets.resize(n + 1);
    A.col_indices.resize(n);
    A.values.assign(n, Complex(1.0, 0.0));
    for (std::size_t i = 0; i <= n; ++i) A.row_offsets[i] = i;
    for (std::size_t i = 0; i < n; ++i) A.col_indices[i] = i;
    return A;
}

void spmv(const CsrMatrix& A, const CVector& x, CVector& y) {
    if (A.ncols != x.size())
        throw std::invalid_argument("spmv: dimension mismatch");
    y.assign(A.nrows, Complex(0.0));
    const bool par =
        exec_mode() == ExecMode::Parallel && parallel_worthwhile();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(A.nrows);
#ifdef CAVAC_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (par)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        Complex acc(0.0);
        for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
            acc += A.values[k] * x[A.col_indices[k]];
        y[i] = acc;
    }
    (void)par;
}

CVector spmv(const CsrMatrix& A, const CVector& x) {
    CVector y;
    spmv(A, x, y);
    return y;
}

Complex dot_hermitian(const CVector& x, const CVector& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("dot_hermitian: length mismatch");
    Complex acc(0.0);
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

double norm2(const CVector& x) {
    double acc = 0.0;
    for (const Complex& z : x) acc += std::norm(z);
    return std::sqrt(acc);
}

CVector axpy(Complex alpha, const CVector& x, const CVector& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("axpy: length mismatch");
    CVector z = y;
    axpy_inplace(alpha, x, z);
    return z;
}

void axpy_inplace(Complex alpha, const CVector& x, CVector& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("axpy: length mismatch");
    const bool par =
        exec_mode() == ExecMode::Parallel && parallel_worthwhile();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#ifdef CAVAC_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (par)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += alpha * x[i];
    (void)par;
}

void xpay_inplace(Complex alpha, CVector& x, const CVector& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("xpay: length mismatch");
    const bool par =
        exec_mode() == ExecMode::Parallel && parallel_worthwhile();
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#ifdef CAVAC_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (par)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) x[i] = alpha * x[i] + y[i];
    (void)par;
}

void scale_inplace(Complex alpha, CVector& x) {
    for (Complex& z : x) z *= alpha;
}

}  // namespace cavac
