#ifndef CAVAC_NUMKIT_HPP
#define CAVAC_NUMKIT_HPP

#include <complex>
#include <cstddef>
#include <tuple>
#include <vector>

namespace cavac {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Kernel execution mode. Sequential is the bit-reproducible reference;
/// Parallel partitions elementwise work across OpenMP threads. Inner
/// products always accumulate sequentially, so both modes produce
/// identical iterates.
enum class ExecMode { Sequential, Parallel };

void set_exec_mode(ExecMode mode);
ExecMode exec_mode();

struct Triplet {
    std::size_t row;
    std::size_t col;
    Complex value;
};

/// Complex sparse matrix, compressed sparse row. Column indices within
/// each row are strictly increasing.
struct CsrMatrix {
    std::size_t nrows = 0;
    std::size_t ncols = 0;
    std::vector<std::size_t> row_offsets;  // size nrows+1
    std::vector<std::size_t> col_indices;
    CVector values;

    std::size_t nnz() const { return values.size(); }
    std::vector<Triplet> to_triplets() const;
};

/// Assemble CSR from (row, col, value) triplets. Duplicates at the same
/// position are summed. Throws on out-of-range indices.
CsrMatrix csr_from_triplets(const std::vector<Triplet>& triplets,
                            std::size_t nrows, std::size_t ncols);

CsrMatrix csr_identity(std::size_t n);

/// y = A x. Per-row accumulation is left-to-right in both exec modes.
CVector spmv(const CsrMatrix& A, const CVector& x);
void spmv(const CsrMatrix& A, const CVector& x, CVector& y);

/// Hermitian inner product sum_i conj(x_i) y_i. Always sequential.
Complex dot_hermitian(const CVector& x, const CVector& y);

double norm2(const CVector& x);

/// alpha*x + y.
CVector axpy(Complex alpha, const CVector& x, const CVector& y);
/// y += alpha*x in place.
void axpy_inplace(Complex alpha, const CVector& x, CVector& y);
/// x = alpha*x + y in place (used by direction-vector updates).
void xpay_inplace(Complex alpha, CVector& x, const CVector& y);

void scale_inplace(Complex alpha, CVector& x);

}  // namespace cavac

#endif
