/// @file sparse.hpp
/// @brief CSR sparse matrices, dense vectors, and the core kernels
///        (SpMV, transpose, sparse product, norms, triangular splitting).

#ifndef ILUAMG_SPARSE_HPP
#define ILUAMG_SPARSE_HPP

#include <cstdint>
#include <tuple>
#include <vector>

namespace iluamg {

using index_t = std::int64_t;
using DenseVector = std::vector<double>;

/// Compressed sparse row matrix with owned storage.
///
/// Invariants: row_starts is non-decreasing with row_starts[0] == 0 and
/// row_starts[nrows] == nnz; column indices are strictly increasing within
/// each row and all less than ncols. Stored entries may be zero, but the
/// factory constructors drop exact zeros unless told otherwise.
struct SparseMatrix {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<index_t> row_starts{0};
    std::vector<index_t> col_indices;
    std::vector<double> values;

    index_t nnz() const { return static_cast<index_t>(values.size()); }

    /// Entry lookup by binary search; returns 0 for positions outside the
    /// stored pattern. Convenience for diagnostics and tests, not kernels.
    double at(index_t i, index_t j) const;

    static SparseMatrix identity(index_t n);
    static SparseMatrix diagonal(const DenseVector& d);

    /// Builds from (row, col, value) triplets: entries are sorted,
    /// duplicates summed (Matrix Market convention), and exact zeros
    /// dropped unless keep_zeros is set.
    static SparseMatrix from_triplets(index_t nrows, index_t ncols,
                                      std::vector<std::tuple<index_t, index_t, double>> triplets,
                                      bool keep_zeros = false);

    /// Adopts already-valid CSR arrays; validates the invariants.
    static SparseMatrix from_csr(index_t nrows, index_t ncols,
                                 std::vector<index_t> row_starts,
                                 std::vector<index_t> col_indices,
                                 std::vector<double> values);
};

/// Structural triangular shapes. UnitLower is stored strictly lower with an
/// implicit unit diagonal (the convention used for ILU L factors).
enum class TriShape { UnitLower, Lower, Upper, StrictLower, StrictUpper };

bool has_shape(const SparseMatrix& A, TriShape shape);
void require_shape(const SparseMatrix& A, TriShape shape, const char* what);

// Kernels. All are pure functions over immutable inputs; accumulation is in
// ascending column order so results are bit-reproducible run to run.

DenseVector spmv(const SparseMatrix& A, const DenseVector& x);
void spmv_into(const SparseMatrix& A, const DenseVector& x, DenseVector& y);

/// Exact sparse product: symbolic pass for the pattern, numeric pass for the
/// values; exact-zero results are dropped.
SparseMatrix matmul(const SparseMatrix& A, const SparseMatrix& B);

SparseMatrix transpose(const SparseMatrix& A);

double frobenius_norm(const SparseMatrix& A);
double two_norm(const DenseVector& x);
double inf_norm(const DenseVector& x);
double one_norm_cols(const SparseMatrix& A); ///< max column absolute sum

DenseVector diag(const SparseMatrix& A);

/// Splits a square A into (strictly lower, diagonal, strictly upper); the
/// three parts sum back to A exactly, partitioning its stored entries.
std::tuple<SparseMatrix, SparseMatrix, SparseMatrix> split_triangular(const SparseMatrix& A);

/// r = b - A*x
DenseVector residual(const SparseMatrix& A, const DenseVector& x, const DenseVector& b);

} // namespace iluamg

#endif // ILUAMG_SPARSE_HPP
