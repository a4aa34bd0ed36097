/// @file matrix_market.hpp
/// @brief Matrix Market coordinate I/O (real, general or symmetric).

#ifndef ILUAMG_MATRIX_MARKET_HPP
#define ILUAMG_MATRIX_MARKET_HPP

#include "iluamg/sparse.hpp"

#include <iosfwd>
#include <string>

namespace iluamg {

/// Reads a Matrix Market coordinate file. Symmetric files are expanded to
/// full storage, indices converted to 0-based, duplicates summed. Complex,
/// pattern, and skew-symmetric files are rejected with a clear message.
SparseMatrix mm_read(const std::string& path);
SparseMatrix mm_read(std::istream& in, const std::string& name = "<stream>");

/// Writes coordinate real general with 1-based indices and full precision,
/// so a write/read round trip reproduces the matrix exactly.
void mm_write(const SparseMatrix& A, const std::string& path);
void mm_write(const SparseMatrix& A, std::ostream& out);

} // namespace iluamg

#endif // ILUAMG_MATRIX_MARKET_HPP
