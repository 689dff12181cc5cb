#ifndef CAPMAX_MATRIX_IO_HPP
#define CAPMAX_MATRIX_IO_HPP

#include <iosfwd>
#include <string>

#include "capmax/types.hpp"

namespace capmax {

/// Text matrix format: header "<rows> <cols> complex", then one matrix row
/// per line, entries as "re,im" pairs with 17 significant digits, so that
/// write -> read round-trips every finite value bit-exactly.
void write_matrix(std::ostream& os, const CMatrix& A);
void write_matrix_file(const std::string& path, const CMatrix& A);
CMatrix read_matrix(std::istream& is);
CMatrix read_matrix_file(const std::string& path);

/// Column vectors use the same container with cols = 1.
void write_vector_file(const std::string& path, const CVector& v);
CVector read_vector_file(const std::string& path);

/// Real vectors (design parameters): header "<n> 1 real", one value per line.
void write_real_vector_file(const std::string& path, const RVector& v);
RVector read_real_vector_file(const std::string& path);

} // namespace capmax

#endif
