/// @file amg.hpp
/// @brief Algebraic multigrid: strength of connection, C/F splitting
///        (index-ordered greedy and PMIS), direct and MM-ext interpolation,
///        Galerkin coarse operators, the V-cycle, and the flops model.

#ifndef ILUAMG_AMG_HPP
#define ILUAMG_AMG_HPP

#include "iluamg/dense.hpp"
#include "iluamg/smoother.hpp"
#include "iluamg/sparse.hpp"

#include <cstdint>

namespace iluamg {

enum class Coarsening { rs_greedy, pmis };
enum class Interpolation { direct, mm_ext };

/// Which smoother runs on which level: `finest` applies to the finest
/// `finest_levels` levels, `fallback` everywhere below (the coarsest level is
/// solved directly and gets no smoother).
struct SmootherPlan {
    SmootherConfig finest;
    index_t finest_levels = 1;
    SmootherConfig fallback;

    const SmootherConfig& for_level(index_t k) const {
        return k < finest_levels ? finest : fallback;
    }
};

struct AmgParams {
    double theta = 0.25; ///< strength threshold, 0 < theta <= 1
    index_t max_levels = 25;
    index_t coarse_size = 16; ///< direct-solve threshold
    Coarsening coarsening = Coarsening::rs_greedy;
    Interpolation interpolation = Interpolation::direct;
    index_t cycles_nu = 1; ///< 1 = V-cycle, 2 = W-cycle
    std::uint64_t pmis_seed = 1;
    SmootherPlan plan;
};

struct CfSplit {
    std::vector<char> is_coarse;      ///< per point
    std::vector<index_t> coarse_index; ///< point -> coarse numbering (-1 for F)
    index_t n_coarse = 0;
};

struct Level {
    SparseMatrix A;
    SparseMatrix P, R; ///< absent on the coarsest level
    CfSplit split;
    SmootherState smoother;
    index_t mm_ext_fallback_rows = 0;
};

struct Hierarchy {
    std::vector<Level> levels;
    DenseLu coarse_lu;
    AmgParams params;

    index_t num_levels() const { return static_cast<index_t>(levels.size()); }
    double operator_complexity() const;
};

/// Strength pattern: S_ij = 1 iff j != i and |a_ij| >= theta * max_{k != i} |a_ik|.
SparseMatrix strength(const SparseMatrix& A, double theta);

/// First pass visits points in ascending index order (the documented
/// "lowest index wins" tie-break): an unassigned point becomes C and the
/// unassigned points it strongly influences become F. A repair pass promotes
/// any F-point left without a strong C-neighbor.
CfSplit coarsen_rs_greedy(const SparseMatrix& S);

/// Parallel-flavored maximal independent set: weights are the
/// strong-transpose degree plus seeded hash jitter in [0,1); local maxima
/// over unassigned strong neighbors join C each round, points they strongly
/// influence become F. Same repair pass. Deterministic given the seed.
CfSplit coarsen_pmis(const SparseMatrix& S, std::uint64_t seed);

/// Direct interpolation with the closed-form least-squares weights
///   w_ij = -(a_ij + beta_i / n_Cs) / (a_ii + sum_{k in Nw} a_ik),
///   beta_i = sum over strong F-neighbors and weak C-neighbors of a_ik,
/// where the weak set Nw holds every off-diagonal non-strong neighbor.
/// C-points get identity rows.
SparseMatrix interp_direct(const SparseMatrix& A, const CfSplit& split, const SparseMatrix& S);

/// MM-ext interpolation  W = -[(D_FF+D_g)^-1 (A^s_FF + D_b)] [D_b^-1 A^s_FC]
/// with D_b = diag(A^s_FC 1), D_g = diag(A^w_FF 1 + A^w_FC 1), assembled via
/// sparse products and diagonal scalings. Rows with a zero D_b entry fall
/// back to direct interpolation (their count is reported via fallback_rows).
SparseMatrix interp_mm_ext(const SparseMatrix& A, const CfSplit& split, const SparseMatrix& S,
                           index_t* fallback_rows = nullptr);

/// Builds the hierarchy: strength -> coarsen -> interpolate -> Galerkin
/// triple product, until the level is small enough, max_levels is reached, or
/// coarsening stalls (less than 5% shrink). Smoother states are built per
/// level and the coarsest matrix is factorized densely.
Hierarchy setup(const SparseMatrix& A, const AmgParams& params);

/// One multigrid cycle (nu recursive calls per level): pre-smooth, restrict
/// the residual, recurse from a zero initial guess, prolongate and correct,
/// post-smooth; the coarsest level is solved directly.
void vcycle(const Hierarchy& hier, const DenseVector& b, DenseVector& x);

/// Per-level nnz and the smoother kind drive the cycle cost model.
struct LevelCost {
    index_t nnz = 0;
    bool ilu_smoothed = false; ///< 80 flops per nonzero, else 8 (polynomial accounting)
};

struct FlopsModel {
    std::int64_t smoothing = 0;   ///< sum over smoothed levels of nnz * (80 or 8)
    std::int64_t coarse_solve = 0; ///< m_c^3, reported separately
    std::int64_t krylov_spmv = 0;  ///< 2 * nnz(A_0) per Krylov iteration
};

FlopsModel flops_model(const std::vector<LevelCost>& levels, index_t coarse_size,
                       index_t fine_nnz);
FlopsModel flops_model(const Hierarchy& hier);

} // namespace iluamg

#endif // ILUAMG_AMG_HPP
