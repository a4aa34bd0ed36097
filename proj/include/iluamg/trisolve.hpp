/// @file trisolve.hpp
/// @brief Triangular solves: exact substitution as the baseline, and the
///        Richardson iteration (truncated Neumann series) that replaces it
///        on scaled factors, plus nilpotence diagnostics.

#ifndef ILUAMG_TRISOLVE_HPP
#define ILUAMG_TRISOLVE_HPP

#include "iluamg/ilu.hpp"
#include "iluamg/sparse.hpp"

#include <cstdint>

namespace iluamg {

enum class TriSolveMode { direct, richardson };

struct TriSolveConfig {
    TriSolveMode mode = TriSolveMode::richardson;
    index_t m_lower = 10; ///< Richardson iterations for the L solve
    index_t m_upper = 10; ///< Richardson iterations for the U solve
};

/// Exact forward substitution for unit-lower L stored as its strict part.
DenseVector solve_lower_direct(const SparseMatrix& L_strict, const DenseVector& b);

/// Exact back substitution for upper U with stored (nonzero) diagonal.
DenseVector solve_upper_direct(const SparseMatrix& U, const DenseVector& b);

/// Forward substitution with an explicit diagonal (lower incl. diagonal).
DenseVector solve_lower_explicit(const SparseMatrix& L, const DenseVector& b);

/// Back substitution for unit-upper U stored as its strict part.
DenseVector solve_upper_unit(const SparseMatrix& U_strict, const DenseVector& b);

/// Richardson iteration for L y = b with L = I + L_s:
/// y(0) = 0, y(k+1) = b - L_s y(k); the m-th iterate equals the truncated
/// Neumann sum  sum_{i=0}^{m-1} (-L_s)^i b.
DenseVector richardson_lower(const SparseMatrix& L_strict, const DenseVector& b, index_t m);

/// Richardson iteration for the U solve on scaled factors. The factors must
/// carry row_scale; b is pre-scaled to b_s = b / row_scale, the iteration
/// runs on the unit-diagonal stored U (x(k+1) = b_s - U_s x(k)), and when a
/// col_scale is present the result is unscaled so that the returned x solves
/// the original (unscaled) U x = b in every scaling convention.
DenseVector richardson_upper_scaled(const IluFactors& factors, const DenseVector& b, index_t m);

/// Direct counterpart of richardson_upper_scaled (same pre/post scaling).
DenseVector solve_upper_scaled_direct(const IluFactors& factors, const DenseVector& b);

/// Randomized estimate of |T_s^p|_2 for a strictly triangular T_s: p
/// successive products on `probes` random unit vectors; the max amplification
/// is reported. Deterministic given the seed.
double neumann_tail_norm(const SparseMatrix& T_strict, index_t p, index_t probes,
                         std::uint64_t seed);

} // namespace iluamg

#endif // ILUAMG_TRISOLVE_HPP
