#include "cavac/mmio.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace cavac {

void write_matrix_market(std::ostream& os, const CsrMatrix& A) {
    os << "%%MatrixMarket matrix coordinate complex general\n";
    os << A.nrows << " " << A.ncols << " " << A.nnz() << "\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < A.nrows; ++i) {
        for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
            os << i + 1 << " " << A.col_indices[k] + 1 << " "
               << A.values[k].real() << " " << A.values[k].imag() << "\n";
        }
    }
}

void write_matrix_market(const std::string& path, const CsrMatrix& A) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_matrix_market(os, A);
}

CsrMatrix read_matrix_market(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("matrix market: empty stream");
    if (line.rfind("%%MatrixMarket", 0) != 0)
        throw std::runtime_error("matrix market: missing header");
    {
        std::istringstream hs(line);
        std::string tag, obj, fmt, field, symm;
        hs >> tag >> obj >> fmt >> field >> symm;
        if (obj != "matrix" || fmt != "coordinate" || field != "complex" ||
            symm != "general")
            throw std::runtime_error(
                "matrix market: unsupported header \"" + line + "\"");
    }
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream sz(line);
    std::size_t nrows, ncols, nnz;
    if (!(sz >> nrows >> ncols >> nnz))
        throw std::runtime_error("matrix market: bad size line");

    std::vector<Triplet> triplets;
    triplets.reserve(nnz);
    for (std::size_t k = 0; k < nnz; ++k) {
        std::size_t r, c;
        double re, im;
        if (!(is >> r >> c >> re >> im))
            throw std::runtime_error("matrix market: truncated entry list");
        if (r == 0 || c == 0)
            throw std::runtime_error("matrix market: indices are 1-based");
        triplets.push_back({r - 1, c - 1, Complex(re, im)});
    }
    return csr_from_triplets(triplets, nrows, ncols);
}

CsrMatrix read_matrix_market(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_matrix_market(is);
}

}  // namespace cavac
