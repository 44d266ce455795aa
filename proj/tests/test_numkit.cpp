#include <doctest.h>

#include <random>
#include <sstream>

#include "cavac/mmio.hpp"
#include "cavac/numkit.hpp"

using namespace cavac;

namespace {

std::mt19937 rng(20240817);

Complex random_complex() {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    return {d(rng), d(rng)};
}

CVector random_vector(std::size_t n) {
    CVector x(n);
    for (auto& z : x) z = random_complex();
    return x;
}

CsrMatrix random_matrix(std::size_t n, std::size_t nnz) {
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::vector<Triplet> trip;
    for (std::size_t k = 0; k < nnz; ++k)
        trip.push_back({idx(rng), idx(rng), random_complex()});
    return csr_from_triplets(trip, n, n);
}

CVector dense_spmv(const CsrMatrix& A, const CVector& x) {
    // independent oracle: expand to dense, multiply row by row
    std::vector<CVector> dense(A.nrows, CVector(A.ncols, Complex(0.0)));
    for (const Triplet& t : A.to_triplets()) dense[t.row][t.col] += t.value;
    CVector y(A.nrows, Complex(0.0));
    for (std::size_t i = 0; i < A.nrows; ++i)
        for (std::size_t j = 0; j < A.ncols; ++j) y[i] += dense[i][j] * x[j];
    return y;
}

}  // namespace

TEST_CASE("csr_from_triplets basic layouts") {
    CsrMatrix empty = csr_from_triplets({}, 2, 2);
    CHECK(empty.nnz() == 0);
    CHECK(empty.nrows == 2);
    CHECK(empty.row_offsets == std::vector<std::size_t>{0, 0, 0});

    CsrMatrix summed =
        csr_from_triplets({{0, 0, Complex(1.0)}, {0, 0, Complex(2.0)}}, 1, 1);
    CHECK(summed.nnz() == 1);
    CHECK(summed.values[0] == Complex(3.0));

    CsrMatrix anti = csr_from_triplets(
        {{0, 1, Complex(0.0, 1.0)}, {1, 0, Complex(0.0, -1.0)}}, 2, 2);
    CHECK(anti.row_offsets == std::vector<std::size_t>{0, 1, 2});
    CHECK(anti.col_indices == std::vector<std::size_t>{1, 0});
}

TEST_CASE("csr_from_triplets rejects out-of-range indices") {
    CHECK_THROWS_AS(csr_from_triplets({{2, 0, Complex(1.0)}}, 2, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(csr_from_triplets({{0, 5, Complex(1.0)}}, 2, 2),
                    std::invalid_argument);
}

TEST_CASE("csr columns sorted within rows") {
    CsrMatrix A = csr_from_triplets(
        {{0, 3, Complex(1.0)}, {0, 1, Complex(2.0)}, {0, 2, Complex(3.0)}}, 1,
        4);
    CHECK(A.col_indices == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("triplet round trip is idempotent") {
    CsrMatrix A = random_matrix(8, 30);
    CsrMatrix B = csr_from_triplets(A.to_triplets(), A.nrows, A.ncols);
    CHECK(B.row_offsets == A.row_offsets);
    CHECK(B.col_indices == A.col_indices);
    CHECK(B.values == A.values);
}

TEST_CASE("spmv identity and zero") {
    CVector x = random_vector(3);
    CHECK(spmv(csr_identity(3), x) == x);
    CVector y = spmv(csr_from_triplets({}, 3, 3), x);
    for (const Complex& z : y) CHECK(z == Complex(0.0));
}

TEST_CASE("spmv dimension mismatch") {
    CHECK_THROWS_AS(spmv(csr_identity(3), random_vector(4)),
                    std::invalid_argument);
}

TEST_CASE("spmv matches dense oracle") {
    // the 5x5 nnz=12 instance plus a sweep of sizes up to 20
    {
        CsrMatrix A = random_matrix(5, 12);
        CVector x = random_vector(5);
        CVector y = spmv(A, x);
        CVector z = dense_spmv(A, x);
        for (std::size_t i = 0; i < 5; ++i)
            CHECK(std::abs(y[i] - z[i]) <= 1e-14 * (1.0 + std::abs(z[i])));
    }
    for (std::size_t n = 2; n <= 20; ++n) {
        CsrMatrix A = random_matrix(n, 3 * n);
        CVector x = random_vector(n);
        CVector y = spmv(A, x);
        CVector z = dense_spmv(A, x);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(y[i] - z[i]) <= 1e-13 * (1.0 + std::abs(z[i])));
    }
}

TEST_CASE("parallel spmv agrees with sequential") {
    CsrMatrix A = random_matrix(50, 300);
    CVector x = random_vector(50);
    set_exec_mode(ExecMode::Sequential);
    CVector ys = spmv(A, x);
    set_exec_mode(ExecMode::Parallel);
    CVector yp = spmv(A, x);
    set_exec_mode(ExecMode::Sequential);
    for (std::size_t i = 0; i < ys.size(); ++i)
        CHECK(std::abs(ys[i] - yp[i]) <= 1e-12 * (1.0 + std::abs(ys[i])));
}

TEST_CASE("dot_hermitian hand values and properties") {
    CVector x = {Complex(1.0, 1.0), Complex(2.0)};
    CHECK(dot_hermitian(x, x) == Complex(6.0));
    CHECK(dot_hermitian({Complex(1.0)}, {Complex(0.0)}) == Complex(0.0));
    CHECK(dot_hermitian({Complex(1.0), Complex(0.0)},
                        {Complex(0.0), Complex(1.0)}) == Complex(0.0));
    CHECK_THROWS_AS(dot_hermitian(random_vector(2), random_vector(3)),
                    std::invalid_argument);

    for (int rep = 0; rep < 20; ++rep) {
        CVector a = random_vector(11), b = random_vector(11);
        Complex ab = dot_hermitian(a, b);
        Complex ba = dot_hermitian(b, a);
        CHECK(std::abs(ab - std::conj(ba)) <= 1e-13);
        Complex aa = dot_hermitian(a, a);
        CHECK(aa.real() >= 0.0);
        CHECK(std::abs(aa.imag()) <= 1e-15 * std::abs(aa.real()));
    }
}

TEST_CASE("norm2") {
    CHECK(norm2({Complex(3.0, 4.0)}) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(norm2({}) == 0.0);
    CHECK(norm2(CVector(4, Complex(0.0))) == 0.0);
    for (int rep = 0; rep < 10; ++rep) {
        CVector x = random_vector(9);
        Complex alpha = random_complex();
        CVector ax = x;
        scale_inplace(alpha, ax);
        CHECK(norm2(ax) ==
              doctest::Approx(std::abs(alpha) * norm2(x)).epsilon(1e-14));
    }
}

TEST_CASE("axpy family") {
    CVector x = random_vector(6), y = random_vector(6);
    CHECK(axpy(Complex(0.0), x, y) == y);
    CHECK(axpy(Complex(1.0), x, CVector(6, Complex(0.0))) == x);
    CHECK(axpy(Complex(0.0, 1.0), {Complex(1.0)}, {Complex(1.0)}) ==
          CVector{Complex(1.0, 1.0)});
    CHECK_THROWS_AS(axpy(Complex(1.0), random_vector(2), random_vector(3)),
                    std::invalid_argument);

    Complex alpha = random_complex();
    CVector expect = axpy(alpha, x, y);
    CVector y2 = y;
    axpy_inplace(alpha, x, y2);
    CHECK(y2 == expect);

    // xpay: x <- alpha*x + y
    CVector x2 = x;
    xpay_inplace(alpha, x2, y);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(x2[i] - (alpha * x[i] + y[i])) <= 1e-15);
}

TEST_CASE("matrix market round trip") {
    CsrMatrix A = random_matrix(7, 20);
    std::stringstream ss;
    write_matrix_market(ss, A);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "%%MatrixMarket matrix coordinate complex general");
    ss.seekg(0);
    CsrMatrix B = read_matrix_market(ss);
    CHECK(B.nrows == A.nrows);
    CHECK(B.ncols == A.ncols);
    CHECK(B.row_offsets == A.row_offsets);
    CHECK(B.col_indices == A.col_indices);
    CHECK(B.values == A.values);
}

TEST_CASE("matrix market rejects foreign headers") {
    std::stringstream ss("%%MatrixMarket matrix array real general\n1 1\n1.0\n");
    CHECK_THROWS_AS(read_matrix_market(ss), std::runtime_error);
}
