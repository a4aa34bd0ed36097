#include "iluamg/trisolve.hpp"
#include "iluamg/error.hpp"
#include "iluamg/rng.hpp"

#include <cmath>
#include <string>

namespace iluamg {

namespace {

void check_square_rhs(const SparseMatrix& A, const DenseVector& b, const char* what) {
    if (A.nrows != A.ncols) fail_invalid(std::string(what) + ": matrix must be square");
    if (static_cast<index_t>(b.size()) != A.nrows)
        fail_invalid(std::string(what) + ": right-hand side length mismatch");
}

} // namespace

DenseVector solve_lower_direct(const SparseMatrix& L_strict, const DenseVector& b) {
    check_square_rhs(L_strict, b, "solve_lower_direct");
    require_shape(L_strict, TriShape::StrictLower, "solve_lower_direct");
    DenseVector x(b.size());
    for (index_t i = 0; i < L_strict.nrows; ++i) {
        double s = b[static_cast<std::size_t>(i)];
        for (index_t k = L_strict.row_starts[static_cast<std::size_t>(i)];
             k < L_strict.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
            s -= L_strict.values[static_cast<std::size_t>(k)] *
                 x[static_cast<std::size_t>(L_strict.col_indices[static_cast<std::size_t>(k)])];
        x[static_cast<std::size_t>(i)] = s;
    }
    return x;
}

DenseVector solve_upper_direct(const SparseMatrix& U, const DenseVector& b) {
    check_square_rhs(U, b, "solve_upper_direct");
    require_shape(U, TriShape::Upper, "solve_upper_direct");
    DenseVector x(b.size());
    for (index_t i = U.nrows; i-- > 0;) {
        double s = b[static_cast<std::size_t>(i)];
        double d = 0.0;
        for (index_t k = U.row_starts[static_cast<std::size_t>(i)];
             k < U.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            const index_t j = U.col_indices[static_cast<std::size_t>(k)];
            if (j == i)
                d = U.values[static_cast<std::size_t>(k)];
            else
                s -= U.values[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(j)];
        }
        if (d == 0.0)
            fail_numeric("solve_upper_direct: zero diagonal at row " + std::to_string(i));
        x[static_cast<std::size_t>(i)] = s / d;
    }
    return x;
}

DenseVector solve_lower_explicit(const SparseMatrix& L, const DenseVector& b) {
    check_square_rhs(L, b, "solve_lower_explicit");
    require_shape(L, TriShape::Lower, "solve_lower_explicit");
    DenseVector x(b.size());
    for (index_t i = 0; i < L.nrows; ++i) {
        double s = b[static_cast<std::size_t>(i)];
        double d = 0.0;
        for (index_t k = L.row_starts[static_cast<std::size_t>(i)];
             k < L.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            const index_t j = L.col_indices[static_cast<std::size_t>(k)];
            if (j == i)
                d = L.values[static_cast<std::size_t>(k)];
            else
                s -= L.values[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(j)];
        }
        if (d == 0.0)
            fail_numeric("solve_lower_explicit: zero diagonal at row " + std::to_string(i));
        x[static_cast<std::size_t>(i)] = s / d;
    }
    return x;
}

DenseVector solve_upper_unit(const SparseMatrix& U_strict, const DenseVector& b) {
    check_square_rhs(U_strict, b, "solve_upper_unit");
    require_shape(U_strict, TriShape::StrictUpper, "solve_upper_unit");
    DenseVector x(b.size());
    for (index_t i = U_strict.nrows; i-- > 0;) {
        double s = b[static_cast<std::size_t>(i)];
        for (index_t k = U_strict.row_starts[static_cast<std::size_t>(i)];
             k < U_strict.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
            s -= U_strict.values[static_cast<std::size_t>(k)] *
                 x[static_cast<std::size_t>(U_strict.col_indices[static_cast<std::size_t>(k)])];
        x[static_cast<std::size_t>(i)] = s;
    }
    return x;
}

DenseVector richardson_lower(const SparseMatrix& L_strict, const DenseVector& b, index_t m) {
    check_square_rhs(L_strict, b, "richardson_lower");
    require_shape(L_strict, TriShape::StrictLower, "richardson_lower");
    if (m < 1) fail_invalid("richardson_lower: iteration count must be >= 1");
    DenseVector y(b.size(), 0.0), t;
    for (index_t k = 0; k < m; ++k) {
        spmv_into(L_strict, y, t);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = b[i] - t[i];
    }
    return y;
}

namespace {

// Strict-upper Richardson on the stored unit-diagonal U with scaling applied
// around it; shared by the iterative and direct scaled U solves.
DenseVector scale_rhs(const IluFactors& f, const DenseVector& b) {
    DenseVector bs(b.size());
    const DenseVector& rs = *f.row_scale;
    for (std::size_t i = 0; i < b.size(); ++i) bs[i] = b[i] / rs[i];
    return bs;
}

void unscale_solution(const IluFactors& f, DenseVector& x) {
    if (!f.col_scale) return;
    const DenseVector& cs = *f.col_scale;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] /= cs[i];
}

SparseMatrix strict_upper_of(const SparseMatrix& U) {
    auto [l, d, u] = split_triangular(U);
    (void)l;
    (void)d;
    return std::move(u);
}

} // namespace

DenseVector richardson_upper_scaled(const IluFactors& factors, const DenseVector& b, index_t m) {
    if (!factors.row_scale)
        fail_invalid("richardson_upper_scaled: factors carry no row scaling");
    check_square_rhs(factors.U, b, "richardson_upper_scaled");
    if (m < 1) fail_invalid("richardson_upper_scaled: iteration count must be >= 1");

    const DenseVector bs = scale_rhs(factors, b);
    const SparseMatrix Us = strict_upper_of(factors.U);
    DenseVector x(b.size(), 0.0), t;
    for (index_t k = 0; k < m; ++k) {
        spmv_into(Us, x, t);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = bs[i] - t[i];
    }
    unscale_solution(factors, x);
    return x;
}

DenseVector solve_upper_scaled_direct(const IluFactors& factors, const DenseVector& b) {
    if (!factors.row_scale)
        fail_invalid("solve_upper_scaled_direct: factors carry no row scaling");
    const DenseVector bs = scale_rhs(factors, b);
    DenseVector x = solve_upper_direct(factors.U, bs);
    unscale_solution(factors, x);
    return x;
}

double neumann_tail_norm(const SparseMatrix& T_strict, index_t p, index_t probes,
                         std::uint64_t seed) {
    if (T_strict.nrows != T_strict.ncols)
        fail_invalid("neumann_tail_norm: matrix must be square");
    if (!has_shape(T_strict, TriShape::StrictLower) &&
        !has_shape(T_strict, TriShape::StrictUpper))
        fail_invalid("neumann_tail_norm: matrix must be strictly triangular");
    if (p < 0) fail_invalid("neumann_tail_norm: power must be >= 0");
    if (probes < 1) fail_invalid("neumann_tail_norm: need at least one probe");
    if (p >= T_strict.nrows) return 0.0; // nilpotent

    double best = 0.0;
    DenseVector v, t;
    for (index_t s = 0; s < probes; ++s) {
        v = random_unit(T_strict.nrows, seed + static_cast<std::uint64_t>(s));
        for (index_t k = 0; k < p; ++k) {
            spmv_into(T_strict, v, t);
            v.swap(t);
        }
        best = std::max(best, two_norm(v));
    }
    return best;
}

} // namespace iluamg
