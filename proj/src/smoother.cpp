#include "iluamg/smoother.hpp"
#include "iluamg/error.hpp"

#include <cmath>
#include <string>

namespace iluamg {

namespace {

DenseVector inverted_diag(const SparseMatrix& A, const char* what) {
    DenseVector d = diag(A);
    for (index_t i = 0; i < static_cast<index_t>(d.size()); ++i) {
        if (d[static_cast<std::size_t>(i)] == 0.0)
            fail_numeric(std::string(what) + ": zero diagonal at row " + std::to_string(i));
        d[static_cast<std::size_t>(i)] = 1.0 / d[static_cast<std::size_t>(i)];
    }
    return d;
}

void jacobi_like_sweep(const SparseMatrix& A, const DenseVector& invd, const DenseVector& b,
                       DenseVector& x) {
    DenseVector r = residual(A, x, b);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += invd[i] * r[i];
}

void poly_gs_apply(const SparseMatrix& A, const DenseVector& invd, const SparseMatrix& Ls,
                   const DenseVector& b, DenseVector& x, index_t p) {
    // x += sum_{j=0}^{p} (-D^-1 L)^j D^-1 r
    DenseVector r = residual(A, x, b);
    DenseVector term(r.size()), acc(r.size()), t;
    for (std::size_t i = 0; i < r.size(); ++i) term[i] = invd[i] * r[i];
    acc = term;
    for (index_t j = 1; j <= p; ++j) {
        spmv_into(Ls, term, t);
        for (std::size_t i = 0; i < term.size(); ++i) term[i] = -invd[i] * t[i];
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += term[i];
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += acc[i];
}

void check_state(const SparseMatrix& A, const SmootherState& state, const char* what) {
    if (state.n != A.nrows || state.nnz != A.nnz())
        fail_invalid(std::string(what) + ": smoother state was built for a different matrix");
}

} // namespace

SmootherState build_smoother_state(const SparseMatrix& A, const SmootherConfig& cfg) {
    if (cfg.sweeps < 0) fail_invalid("build_smoother_state: sweeps must be >= 0");
    if (cfg.poly_degree < 0) fail_invalid("build_smoother_state: poly_degree must be >= 0");
    SmootherState st;
    st.kind = cfg.kind;
    st.config = cfg;
    st.n = A.nrows;
    st.nnz = A.nnz();

    switch (cfg.kind) {
    case SmootherKind::jacobi:
        st.inv_diag = inverted_diag(A, "jacobi");
        break;
    case SmootherKind::l1_jacobi: {
        DenseVector d(static_cast<std::size_t>(A.nrows), 0.0);
        for (index_t i = 0; i < A.nrows; ++i)
            for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
                 k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
                d[static_cast<std::size_t>(i)] += std::abs(A.values[static_cast<std::size_t>(k)]);
        for (index_t i = 0; i < A.nrows; ++i) {
            if (d[static_cast<std::size_t>(i)] == 0.0)
                fail_numeric("l1_jacobi: row " + std::to_string(i) + " is entirely zero");
            d[static_cast<std::size_t>(i)] = 1.0 / d[static_cast<std::size_t>(i)];
        }
        st.inv_l1_diag = std::move(d);
        break;
    }
    case SmootherKind::gauss_seidel:
        break;
    case SmootherKind::poly_gs: {
        st.inv_diag = inverted_diag(A, "poly_gs");
        auto [l, d, u] = split_triangular(A);
        (void)d;
        (void)u;
        st.strict_lower = std::move(l);
        break;
    }
    case SmootherKind::ilu: {
        if (cfg.trisolve.mode == TriSolveMode::richardson && cfg.scaling == ScalingKind::none)
            fail_invalid("ilu smoother: the iterative U solve requires row or row/col scaling");
        st.factors = apply_scaling(ilu_factorize(A, cfg.ilu_params), cfg.scaling);
        break;
    }
    case SmootherKind::schur_ilut: {
        auto part = std::make_unique<SchurPartition>(partition(A, cfg.schur_blocks));
        factorize_blocks(*part, cfg.ilu_params, cfg.scaling, cfg.trisolve);
        st.schur = std::move(part);
        break;
    }
    }
    return st;
}

void jacobi_sweep(const SparseMatrix& A, const DenseVector& b, DenseVector& x) {
    jacobi_like_sweep(A, inverted_diag(A, "jacobi_sweep"), b, x);
}

void l1_jacobi_sweep(const SparseMatrix& A, const DenseVector& b, DenseVector& x) {
    SmootherConfig cfg;
    cfg.kind = SmootherKind::l1_jacobi;
    const SmootherState st = build_smoother_state(A, cfg);
    jacobi_like_sweep(A, st.inv_l1_diag, b, x);
}

void gauss_seidel_sweep(const SparseMatrix& A, const DenseVector& b, DenseVector& x) {
    if (A.nrows != A.ncols || static_cast<index_t>(x.size()) != A.nrows ||
        b.size() != x.size())
        fail_invalid("gauss_seidel_sweep: dimension mismatch");
    for (index_t i = 0; i < A.nrows; ++i) {
        double s = b[static_cast<std::size_t>(i)];
        double d = 0.0;
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            const index_t j = A.col_indices[static_cast<std::size_t>(k)];
            if (j == i)
                d = A.values[static_cast<std::size_t>(k)];
            else
                s -= A.values[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(j)];
        }
        if (d == 0.0)
            fail_numeric("gauss_seidel_sweep: zero diagonal at row " + std::to_string(i));
        x[static_cast<std::size_t>(i)] = s / d;
    }
}

void poly_gs_sweep(const SparseMatrix& A, const DenseVector& b, DenseVector& x, index_t p) {
    if (p < 0) fail_invalid("poly_gs_sweep: degree must be >= 0");
    const DenseVector invd = inverted_diag(A, "poly_gs_sweep");
    auto [l, d, u] = split_triangular(A);
    (void)d;
    (void)u;
    poly_gs_apply(A, invd, l, b, x, p);
}

void ilu_smooth_sweep(const SparseMatrix& A, const SmootherState& state, const DenseVector& b,
                      DenseVector& x) {
    check_state(A, state, "ilu_smooth_sweep");
    const IluFactors& f = state.factors;
    const TriSolveConfig& ts = state.config.trisolve;

    const DenseVector r = residual(A, x, b);
    DenseVector y, z;
    if (ts.mode == TriSolveMode::direct) {
        y = solve_lower_direct(f.L, r);
        z = f.row_scale ? solve_upper_scaled_direct(f, y) : solve_upper_direct(f.U, y);
    } else {
        y = richardson_lower(f.L, r, ts.m_lower);
        z = richardson_upper_scaled(f, y, ts.m_upper);
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += z[i];
}

double smooth(const SparseMatrix& A, const SmootherState& state, const DenseVector& b,
              DenseVector& x) {
    check_state(A, state, "smooth");
    for (index_t s = 0; s < state.config.sweeps; ++s) {
        switch (state.kind) {
        case SmootherKind::jacobi:
            jacobi_like_sweep(A, state.inv_diag, b, x);
            break;
        case SmootherKind::l1_jacobi:
            jacobi_like_sweep(A, state.inv_l1_diag, b, x);
            break;
        case SmootherKind::gauss_seidel:
            gauss_seidel_sweep(A, b, x);
            break;
        case SmootherKind::poly_gs:
            poly_gs_apply(A, state.inv_diag, state.strict_lower, b, x, state.config.poly_degree);
            break;
        case SmootherKind::ilu:
            ilu_smooth_sweep(A, state, b, x);
            break;
        case SmootherKind::schur_ilut:
            schur_smooth(A, *state.schur, b, x);
            break;
        }
    }
    return two_norm(residual(A, x, b));
}

} // namespace iluamg
