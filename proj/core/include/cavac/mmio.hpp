#ifndef CAVAC_MMIO_HPP
#define CAVAC_MMIO_HPP

#include <iosfwd>
#include <string>

#include "cavac/numkit.hpp"

namespace cavac {

// Matrix Market "coordinate complex general" format, 1-based indices,
// one "row col re im" entry per line.
void write_matrix_market(std::ostream& os, const CsrMatrix& A);
void write_matrix_market(const std::string& path, const CsrMatrix& A);

CsrMatrix read_matrix_market(std::istream& is);
CsrMatrix read_matrix_market(const std::string& path);

}  // namespace cavac

#endif
