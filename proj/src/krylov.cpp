#include "iluamg/krylov.hpp"
#include "iluamg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iluamg {

LinearOperator identity_preconditioner() {
    return [](const DenseVector& r, DenseVector& z) { z = r; };
}

double estimate_two_norm(const SparseMatrix& A, index_t steps, std::uint64_t seed) {
    if (A.nrows == 0 || A.ncols == 0 || A.nnz() == 0) return 0.0;
    const SparseMatrix At = transpose(A);
    DenseVector v = random_unit(A.ncols, seed);
    DenseVector w, u;
    for (index_t s = 0; s < steps; ++s) {
        spmv_into(A, v, w);
        spmv_into(At, w, u);
        const double nrm = two_norm(u);
        if (nrm == 0.0) return 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] / nrm;
    }
    spmv_into(A, v, w);
    return two_norm(w);
}

double nrbe(const SparseMatrix& A, const DenseVector& x, const DenseVector& b, double anorm) {
    const double denom = two_norm(b) + anorm * two_norm(x);
    if (denom == 0.0) return 0.0;
    return two_norm(residual(A, x, b)) / denom;
}

namespace {

double dot(const DenseVector& a, const DenseVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

struct GmresWorkspace {
    std::vector<DenseVector> V; // Arnoldi basis
    std::vector<DenseVector> Z; // preconditioned directions (flexible / history)
    std::vector<double> H;      // (restart+1) x restart, column-major
    std::vector<double> cs, sn, g;
    index_t restart;

    explicit GmresWorkspace(index_t restart_) : restart(restart_) {
        H.assign(static_cast<std::size_t>((restart + 1) * restart), 0.0);
        cs.assign(static_cast<std::size_t>(restart), 0.0);
        sn.assign(static_cast<std::size_t>(restart), 0.0);
        g.assign(static_cast<std::size_t>(restart) + 1, 0.0);
    }

    double& h(index_t i, index_t j) {
        return H[static_cast<std::size_t>(j * (restart + 1) + i)];
    }

    /// Solves the j x j upper-triangular system from the rotated H.
    std::vector<double> solve_y(index_t j) {
        std::vector<double> y(static_cast<std::size_t>(j));
        for (index_t i = j; i-- > 0;) {
            double s = g[static_cast<std::size_t>(i)];
            for (index_t k = i + 1; k < j; ++k)
                s -= h(i, k) * y[static_cast<std::size_t>(k)];
            y[static_cast<std::size_t>(i)] = s / h(i, i);
        }
        return y;
    }
};

std::pair<DenseVector, SolveReport> gmres_impl(const SparseMatrix& A, const DenseVector& b,
                                               const DenseVector& x0,
                                               const LinearOperator& precond,
                                               const KrylovParams& params, bool flexible) {
    if (A.nrows != A.ncols) fail_invalid("gmres: matrix must be square");
    if (static_cast<index_t>(b.size()) != A.nrows || x0.size() != b.size())
        fail_invalid("gmres: vector length mismatch");
    if (params.restart < 1) fail_invalid("gmres: restart must be >= 1");
    if (!(params.tol > 0.0)) fail_invalid("gmres: tol must be > 0");

    SolveReport rep;
    rep.anorm_estimate = estimate_two_norm(A, 50, params.anorm_seed);
    rep.bnorm = two_norm(b);
    const double bden = rep.bnorm > 0.0 ? rep.bnorm : 1.0;

    DenseVector x = x0;
    auto record = [&](index_t iter, double arnoldi, const DenseVector& xk) {
        HistoryEntry e;
        e.iter = iter;
        e.arnoldi_resnorm = arnoldi;
        e.true_resnorm = two_norm(residual(A, xk, b));
        e.nrbe = nrbe(A, xk, b, rep.anorm_estimate);
        if (params.record_history) rep.history.push_back(e);
        return e;
    };
    auto criterion_met = [&](double arnoldi, const HistoryEntry& e) {
        return params.criterion == StopCriterion::relres ? arnoldi / bden < params.tol
                                                         : e.nrbe < params.tol;
    };

    index_t total = 0;
    double last_arnoldi = 0.0;
    {
        const HistoryEntry e0 = record(0, two_norm(residual(A, x, b)), x);
        last_arnoldi = e0.arnoldi_resnorm;
        if (criterion_met(e0.arnoldi_resnorm, e0)) {
            rep.converged = true;
            rep.iterations = 0;
            rep.final_relres = e0.true_resnorm / bden;
            rep.final_nrbe = e0.nrbe;
            return {x, rep};
        }
    }

    bool done = false;
    while (!done && total < params.max_iters) {
        DenseVector r = residual(A, x, b);
        const double beta = two_norm(r);
        if (!std::isfinite(beta)) {
            rep.iterations = total;
            throw SolveFailure("gmres: residual is not finite", rep);
        }
        if (beta == 0.0) {
            rep.converged = true;
            break;
        }

        GmresWorkspace ws(params.restart);
        ws.V.assign(1, r);
        for (double& v : ws.V[0]) v /= beta;
        ws.Z.clear();
        ws.g.assign(static_cast<std::size_t>(params.restart) + 1, 0.0);
        ws.g[0] = beta;

        const DenseVector x_cycle = x;
        index_t j = 0;
        for (; j < params.restart && total < params.max_iters; ++j) {
            DenseVector z(b.size());
            precond(ws.V[static_cast<std::size_t>(j)], z);
            ws.Z.push_back(z);
            DenseVector w = spmv(A, z);

            // modified Gram-Schmidt
            for (index_t i = 0; i <= j; ++i) {
                const double hij = dot(w, ws.V[static_cast<std::size_t>(i)]);
                ws.h(i, j) = hij;
                const DenseVector& vi = ws.V[static_cast<std::size_t>(i)];
                for (std::size_t t = 0; t < w.size(); ++t) w[t] -= hij * vi[t];
            }
            const double hnext = two_norm(w);
            ws.h(j + 1, j) = hnext;
            bool finite = std::isfinite(hnext);
            for (index_t i = 0; finite && i <= j; ++i) finite = std::isfinite(ws.h(i, j));
            if (!finite) {
                rep.iterations = total;
                throw SolveFailure("gmres: Arnoldi coefficients are not finite at iteration " +
                                       std::to_string(total + 1),
                                   rep);
            }
            const bool happy = hnext == 0.0;
            if (!happy) {
                DenseVector vnext = w;
                for (double& v : vnext) v /= hnext;
                ws.V.push_back(std::move(vnext));
            }

            // Givens rotations: rotate the new column, then extend.
            for (index_t i = 0; i < j; ++i) {
                const double t = ws.cs[static_cast<std::size_t>(i)] * ws.h(i, j) +
                                 ws.sn[static_cast<std::size_t>(i)] * ws.h(i + 1, j);
                ws.h(i + 1, j) = -ws.sn[static_cast<std::size_t>(i)] * ws.h(i, j) +
                                 ws.cs[static_cast<std::size_t>(i)] * ws.h(i + 1, j);
                ws.h(i, j) = t;
            }
            {
                const double a = ws.h(j, j), c = ws.h(j + 1, j);
                const double rho = std::hypot(a, c);
                ws.cs[static_cast<std::size_t>(j)] = rho == 0.0 ? 1.0 : a / rho;
                ws.sn[static_cast<std::size_t>(j)] = rho == 0.0 ? 0.0 : c / rho;
                ws.h(j, j) = rho;
                ws.h(j + 1, j) = 0.0;
            }
            ws.g[static_cast<std::size_t>(j) + 1] =
                -ws.sn[static_cast<std::size_t>(j)] * ws.g[static_cast<std::size_t>(j)];
            ws.g[static_cast<std::size_t>(j)] =
                ws.cs[static_cast<std::size_t>(j)] * ws.g[static_cast<std::size_t>(j)];
            const double arnoldi = std::abs(ws.g[static_cast<std::size_t>(j) + 1]);
            ++total;
            last_arnoldi = arnoldi;

            // Form the iterate: x_cycle + M (V y) for gmres, x_cycle + Z y flexible.
            const std::vector<double> y = ws.solve_y(j + 1);
            DenseVector xk = x_cycle;
            if (flexible) {
                for (index_t i = 0; i <= j; ++i) {
                    const DenseVector& zi = ws.Z[static_cast<std::size_t>(i)];
                    const double yi = y[static_cast<std::size_t>(i)];
                    for (std::size_t t = 0; t < xk.size(); ++t) xk[t] += yi * zi[t];
                }
            } else {
                DenseVector vy(b.size(), 0.0);
                for (index_t i = 0; i <= j; ++i) {
                    const DenseVector& vi = ws.V[static_cast<std::size_t>(i)];
                    const double yi = y[static_cast<std::size_t>(i)];
                    for (std::size_t t = 0; t < vy.size(); ++t) vy[t] += yi * vi[t];
                }
                DenseVector mz(b.size());
                precond(vy, mz);
                for (std::size_t t = 0; t < xk.size(); ++t) xk[t] += mz[t];
            }
            if (!std::isfinite(two_norm(xk))) {
                rep.iterations = total;
                throw SolveFailure("gmres: iterate is not finite at iteration " +
                                       std::to_string(total),
                                   rep);
            }

            const HistoryEntry e = record(total, arnoldi, xk);
            x = xk;
            if (criterion_met(arnoldi, e) || happy) {
                rep.converged = true;
                done = true;
                break;
            }
        }
    }

    rep.iterations = total;
    const double true_res = two_norm(residual(A, x, b));
    rep.final_relres = true_res / bden;
    rep.final_nrbe = nrbe(A, x, b, rep.anorm_estimate);
    rep.false_convergence = std::abs(true_res - last_arnoldi) / bden > 10.0 * params.tol;
    return {x, rep};
}

} // namespace

std::pair<DenseVector, SolveReport> gmres(const SparseMatrix& A, const DenseVector& b,
                                          const DenseVector& x0, const LinearOperator& precond,
                                          const KrylovParams& params) {
    return gmres_impl(A, b, x0, precond, params, /*flexible=*/false);
}

std::pair<DenseVector, SolveReport> fgmres(const SparseMatrix& A, const DenseVector& b,
                                           const DenseVector& x0, const LinearOperator& precond,
                                           const KrylovParams& params) {
    return gmres_impl(A, b, x0, precond, params, /*flexible=*/true);
}

std::pair<DenseVector, SolveReport> krylov_solve(const SparseMatrix& A, const DenseVector& b,
                                                 const DenseVector& x0,
                                                 const LinearOperator& precond,
                                                 const KrylovParams& params) {
    return params.method == KrylovMethod::gmres ? gmres(A, b, x0, precond, params)
                                                : fgmres(A, b, x0, precond, params);
}

} // namespace iluamg
