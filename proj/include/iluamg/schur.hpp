/// @file schur.hpp
/// @brief Simulated-parallel ILUT Schur-complement smoother: contiguous block
///        row partition, interior/interface splitting, one-iteration
///        interface GMRES, Richardson back-substitution for the interiors.

#ifndef ILUAMG_SCHUR_HPP
#define ILUAMG_SCHUR_HPP

#include "iluamg/ilu.hpp"
#include "iluamg/sparse.hpp"
#include "iluamg/trisolve.hpp"

#include <utility>

namespace iluamg {

enum class ScalingKind { none, row, row_col };

/// Applies the chosen scaling to freshly computed factors.
IluFactors apply_scaling(IluFactors f, ScalingKind scaling);

/// One diagonal sub-domain of the partition: a contiguous run of the
/// interior ordering plus the incomplete factors of its B sub-block.
struct SchurBlock {
    index_t begin = 0; ///< first interior position owned by this block
    index_t end = 0;   ///< one past the last
    IluFactors factors;
};

/// Block decomposition of A standing in for an MPI rank partition. Rows are
/// cut into p contiguous ranges; a row is interface iff it couples (by row or
/// by column) across a cut, so B stays square and block-diagonal. Under the
/// interior-first permutation, [[B,E],[F,C]] reassembles A exactly.
struct SchurPartition {
    index_t p = 1;
    std::vector<std::pair<index_t, index_t>> block_ranges; ///< [begin,end) global rows
    std::vector<index_t> interior_idx; ///< ascending global ids
    std::vector<index_t> interface_idx;
    std::vector<index_t> perm; ///< global id -> position in (interior ++ interface)
    SparseMatrix B, E, F, C;
    std::vector<SchurBlock> blocks;
    bool factorized = false;
    TriSolveConfig trisolve;
};

SchurPartition partition(const SparseMatrix& A, index_t p);

/// Computes the per-block ILUT factors (independent per block). Richardson
/// block solves require row or row/col scaling.
void factorize_blocks(SchurPartition& part, const IluParams& ilu, ScalingKind scaling,
                      const TriSolveConfig& trisolve);

/// Applies the approximate B^-1 block by block to an interior-length vector.
DenseVector block_solve(const SchurPartition& part, const DenseVector& f);

/// One smoothing application: r = b - A x is split into interior f and
/// interface g through the permutation; gt = g - F B^-1 f; a single GMRES
/// iteration (modified Gram-Schmidt, one-vector basis, no residual check)
/// approximates S y = gt with S applied matrix-free as S v = C v - F B^-1 E v;
/// interiors follow by back-substitution x_I = B^-1 (f - E y); the update is
/// merged through the permutation into x.
void schur_smooth(const SparseMatrix& A, const SchurPartition& part, const DenseVector& b,
                  DenseVector& x);

} // namespace iluamg

#endif // ILUAMG_SCHUR_HPP
