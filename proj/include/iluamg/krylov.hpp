/// @file krylov.hpp
/// @brief Right-preconditioned GMRES and flexible FGMRES with modified
///        Gram-Schmidt, relative-residual and NRBE stopping criteria, and
///        false-convergence detection.

#ifndef ILUAMG_KRYLOV_HPP
#define ILUAMG_KRYLOV_HPP

#include "iluamg/error.hpp"
#include "iluamg/sparse.hpp"

#include <cstdint>
#include <functional>
#include <utility>

namespace iluamg {

/// Preconditioner application z = M(r). A fixed linear operator for gmres;
/// fgmres tolerates a different operator per iteration.
using LinearOperator = std::function<void(const DenseVector& r, DenseVector& z)>;

LinearOperator identity_preconditioner();

enum class KrylovMethod { gmres, fgmres };
enum class StopCriterion { relres, nrbe };

struct KrylovParams {
    KrylovMethod method = KrylovMethod::gmres;
    index_t restart = 50;
    index_t max_iters = 200;
    double tol = 1e-5;
    StopCriterion criterion = StopCriterion::relres;
    bool record_history = true;
    std::uint64_t anorm_seed = 7; ///< seed of the |A|_2 power iteration
};

struct HistoryEntry {
    index_t iter = 0;
    double arnoldi_resnorm = 0.0; ///< residual norm from the Givens recurrence
    double true_resnorm = 0.0;    ///< |b - A x_k|_2 with x_k explicitly formed
    double nrbe = 0.0;
};

struct SolveReport {
    index_t iterations = 0;
    std::vector<HistoryEntry> history; ///< length iterations+1 when recorded
    bool converged = false;
    bool false_convergence = false;
    double anorm_estimate = 0.0;
    double bnorm = 0.0;
    double final_relres = 0.0;
    double final_nrbe = 0.0;
};

/// Thrown when iterates degenerate to NaN/Inf; carries the partial report.
class SolveFailure : public Error {
public:
    SolveFailure(const std::string& msg, SolveReport report)
        : Error(ErrorKind::numeric, msg), report(std::move(report)) {}
    SolveReport report;
};

/// Seeded power iteration on A^T A, a fixed number of steps; the estimate
/// only scales the NRBE denominator, so a few percent of slack is fine.
double estimate_two_norm(const SparseMatrix& A, index_t steps = 50, std::uint64_t seed = 7);

/// Norm-wise relative backward error |b - Ax|_2 / (|b|_2 + |A|_2 |x|_2);
/// returns 0 by convention when the denominator vanishes (b = 0 and x = 0).
double nrbe(const SparseMatrix& A, const DenseVector& x, const DenseVector& b, double anorm);

std::pair<DenseVector, SolveReport> gmres(const SparseMatrix& A, const DenseVector& b,
                                          const DenseVector& x0, const LinearOperator& precond,
                                          const KrylovParams& params);

std::pair<DenseVector, SolveReport> fgmres(const SparseMatrix& A, const DenseVector& b,
                                           const DenseVector& x0, const LinearOperator& precond,
                                           const KrylovParams& params);

/// Dispatches on params.method.
std::pair<DenseVector, SolveReport> krylov_solve(const SparseMatrix& A, const DenseVector& b,
                                                 const DenseVector& x0,
                                                 const LinearOperator& precond,
                                                 const KrylovParams& params);

} // namespace iluamg

#endif // ILUAMG_KRYLOV_HPP
