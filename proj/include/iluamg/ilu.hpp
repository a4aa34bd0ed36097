/// @file ilu.hpp
/// @brief Incomplete LU factorizations (ILU(0), dual-threshold ILUT), row and
///        row/column scaling of the U factor, and the non-normality and
///        conditioning diagnostics that motivate the scaling.

#ifndef ILUAMG_ILU_HPP
#define ILUAMG_ILU_HPP

#include "iluamg/sparse.hpp"

#include <optional>

namespace iluamg {

enum class IluVariant { ilu0, ilut };

/// What to do when a pivot is exactly zero (pivoting itself is never done):
/// `error` aborts loudly, `replace` substitutes a small signed magnitude
/// sign(estimate) * max(droptol*|row_k(A)|_2, 1e-16*|A|_F).
enum class PivotPatch { error, replace };

struct IluParams {
    IluVariant variant = IluVariant::ilu0;
    double droptol = 0.0;  ///< drop threshold, relative to the 2-norm of the A row
    index_t lfill = 0;     ///< max fill entries kept per row in each of the L and U parts
    PivotPatch pivot_patch = PivotPatch::error;
};

/// Result of a factorization: L is stored strictly lower with an implicit
/// unit diagonal, U is upper with the diagonal stored. When scaling has been
/// applied, the original U is diag(row_scale) * U * diag(col_scale) with
/// col_scale defaulting to ones; the stored U then has an exact unit diagonal.
struct IluFactors {
    SparseMatrix L; ///< strictly lower part, unit diagonal implicit
    SparseMatrix U; ///< upper triangular, diagonal stored
    std::optional<DenseVector> row_scale;
    std::optional<DenseVector> col_scale;
    index_t nnz_L = 0; ///< including the implicit unit diagonal
    index_t nnz_U = 0;
};

/// ILU(0): no fill, L and U carry exactly the lower/upper pattern of A.
/// Every diagonal position of A must be structurally present.
IluFactors ilu0(const SparseMatrix& A, PivotPatch pivot_patch = PivotPatch::error);

/// Saad-style dual-threshold ILUT. The working row is dropped against
/// droptol * |row_i(A)|_2; original-pattern entries survive on the threshold
/// alone, while fill entries are additionally capped at the lfill largest by
/// magnitude in each of the L and U parts. The diagonal is always kept, so
/// row i of L holds at most lower_pattern(A,i) + lfill entries and row i of
/// U at most upper_pattern(A,i) + lfill.
IluFactors ilut(const SparseMatrix& A, const IluParams& params);

IluFactors ilu_factorize(const SparseMatrix& A, const IluParams& params);

/// Extracts D = diag(U) and replaces U by D^-1 U (unit diagonal); L is left
/// untouched. The incomplete LU becomes an incomplete LDU.
IluFactors row_scale(const IluFactors& f);

/// Two-sided scaling D_r U D_c with unit diagonal, using the symmetric
/// magnitude split d_c = |u_ii|^-1/2, d_r = sign(u_ii) |u_ii|^-1/2.
IluFactors row_col_scale(const IluFactors& f);

/// Recovers the unscaled U (diag(row_scale) * U * diag(col_scale)).
SparseMatrix unscaled_upper(const IluFactors& f);

/// Henrici departure from normality sqrt(|T|_F^2 - sum_i t_ii^2) for a
/// structurally triangular T, whose eigenvalues are its diagonal entries.
/// A radicand within rounding slack of zero is clamped to 0; a materially
/// negative one is an error.
double departure_from_normality(const SparseMatrix& T, TriShape shape);

/// Hager-style 1-norm condition estimate kappa_1(T) via direct triangular
/// solves. An order-of-magnitude diagnostic, not kappa_2.
double condition_estimate(const SparseMatrix& T, TriShape shape);

struct StripingColumn {
    index_t col = 0;
    double max_abs = 0.0;
    double median_abs = 0.0;
    double ratio = 0.0;
};

/// Per-column max/median absolute-value spread over L+U; columns whose ratio
/// exceeds the threshold are flagged (the vertical-striping indicator of
/// ill-conditioned factors).
struct StripingReport {
    std::vector<StripingColumn> columns; ///< all columns, in column order
    std::vector<index_t> flagged;
    double threshold = 1e8;
};

StripingReport striping_report(const IluFactors& f, double threshold = 1e8);

} // namespace iluamg

#endif // ILUAMG_ILU_HPP
