/// @file smoother.hpp
/// @brief The V-cycle smoother family: Jacobi, l1-Jacobi, Gauss-Seidel,
///        polynomial Gauss-Seidel (truncated Neumann series), the ILU
///        smoother with direct or Richardson triangular solves, and the
///        ILUT Schur-complement smoother.

#ifndef ILUAMG_SMOOTHER_HPP
#define ILUAMG_SMOOTHER_HPP

#include "iluamg/ilu.hpp"
#include "iluamg/schur.hpp"
#include "iluamg/sparse.hpp"
#include "iluamg/trisolve.hpp"

#include <memory>

namespace iluamg {

enum class SmootherKind { jacobi, l1_jacobi, gauss_seidel, poly_gs, ilu, schur_ilut };

struct SmootherConfig {
    SmootherKind kind = SmootherKind::gauss_seidel;
    index_t sweeps = 2;      ///< applications per smoothing phase; 0 = identity (diagnostic)
    index_t poly_degree = 2; ///< p in the truncated Neumann series of poly_gs
    IluParams ilu_params;
    TriSolveConfig trisolve;
    ScalingKind scaling = ScalingKind::row;
    index_t schur_blocks = 4;
};

/// Per-level data precomputed in setup and read-only afterwards, so states
/// are reused across V-cycles and shareable between concurrent solves.
struct SmootherState {
    SmootherKind kind = SmootherKind::gauss_seidel;
    SmootherConfig config;
    index_t n = 0;
    index_t nnz = 0;
    DenseVector inv_diag;        // jacobi, poly_gs
    DenseVector inv_l1_diag;     // l1_jacobi
    SparseMatrix strict_lower;   // poly_gs
    IluFactors factors;          // ilu (scaled per config)
    std::unique_ptr<SchurPartition> schur; // schur_ilut
};

SmootherState build_smoother_state(const SparseMatrix& A, const SmootherConfig& cfg);

/// Applies config.sweeps applications of the configured relaxation and
/// returns the post-sweep residual 2-norm, so divergence is never silent.
double smooth(const SparseMatrix& A, const SmootherState& state, const DenseVector& b,
              DenseVector& x);

// Single sweeps, exposed for direct use and testing. Each updates x in place.

/// x += D^-1 (b - A x)
void jacobi_sweep(const SparseMatrix& A, const DenseVector& b, DenseVector& x);

/// x += D_l1^-1 (b - A x) with d_i = |a_ii| + sum_{j != i} |a_ij|
void l1_jacobi_sweep(const SparseMatrix& A, const DenseVector& b, DenseVector& x);

/// x' = (D+L)^-1 (b - U x) by exact forward substitution
void gauss_seidel_sweep(const SparseMatrix& A, const DenseVector& b, DenseVector& x);

/// x += sum_{j=0}^{p} (-D^-1 L)^j D^-1 r, the Gauss-Seidel forward solve with
/// its inverse replaced by a truncated Neumann series (p+1 terms).
void poly_gs_sweep(const SparseMatrix& A, const DenseVector& b, DenseVector& x, index_t p);

/// r = b - A x; L y = r; U z = y (direct or Richardson per the state's
/// trisolve config, on the scaled factors); x += z.
void ilu_smooth_sweep(const SparseMatrix& A, const SmootherState& state, const DenseVector& b,
                      DenseVector& x);

} // namespace iluamg

#endif // ILUAMG_SMOOTHER_HPP
