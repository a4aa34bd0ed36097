#include "iluamg/ilu.hpp"
#include "iluamg/error.hpp"
#include "iluamg/trisolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace iluamg {

namespace {

double row_two_norm(const SparseMatrix& A, index_t i) {
    double s = 0.0;
    for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
         k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
        s += A.values[static_cast<std::size_t>(k)] * A.values[static_cast<std::size_t>(k)];
    return std::sqrt(s);
}

double patched_pivot(double estimate, double droptol, double rownorm, double anorm_f,
                     PivotPatch policy, index_t k) {
    if (policy == PivotPatch::error)
        fail_numeric("zero pivot at step " + std::to_string(k) +
                     " (no pivoting; rerun with pivot_patch=replace to substitute)");
    double mag = std::max(droptol * rownorm, 1e-16 * anorm_f);
    if (mag == 0.0) mag = std::numeric_limits<double>::min();
    return estimate < 0.0 ? -mag : mag;
}

struct FactorBuilder {
    std::vector<index_t> l_starts{0}, l_cols, u_starts{0}, u_cols;
    std::vector<double> l_vals, u_vals;

    void finish_row() {
        l_starts.push_back(static_cast<index_t>(l_cols.size()));
        u_starts.push_back(static_cast<index_t>(u_cols.size()));
    }

    IluFactors build(index_t n) {
        IluFactors f;
        f.L = SparseMatrix::from_csr(n, n, std::move(l_starts), std::move(l_cols),
                                     std::move(l_vals));
        f.U = SparseMatrix::from_csr(n, n, std::move(u_starts), std::move(u_cols),
                                     std::move(u_vals));
        f.nnz_L = f.L.nnz() + n; // implicit unit diagonal
        f.nnz_U = f.U.nnz();
        return f;
    }
};

} // namespace

IluFactors ilu0(const SparseMatrix& A, PivotPatch pivot_patch) {
    if (A.nrows != A.ncols) fail_invalid("ilu0: matrix must be square");
    const index_t n = A.nrows;
    const double anorm_f = frobenius_norm(A);

    // Working copy of A's values; factored in place over A's pattern (IKJ).
    std::vector<double> w(A.values);
    std::vector<index_t> diag_pos(static_cast<std::size_t>(n), -1);
    for (index_t i = 0; i < n; ++i) {
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
            if (A.col_indices[static_cast<std::size_t>(k)] == i)
                diag_pos[static_cast<std::size_t>(i)] = k;
        if (diag_pos[static_cast<std::size_t>(i)] < 0)
            fail_invalid("ilu0: diagonal entry (" + std::to_string(i) + "," +
                         std::to_string(i) + ") is structurally absent");
    }

    std::vector<index_t> pos(static_cast<std::size_t>(n), -1);
    for (index_t i = 0; i < n; ++i) {
        const index_t row_begin = A.row_starts[static_cast<std::size_t>(i)];
        const index_t row_end = A.row_starts[static_cast<std::size_t>(i) + 1];
        for (index_t k = row_begin; k < row_end; ++k)
            pos[static_cast<std::size_t>(A.col_indices[static_cast<std::size_t>(k)])] = k;

        for (index_t k = row_begin; k < row_end; ++k) {
            const index_t c = A.col_indices[static_cast<std::size_t>(k)];
            if (c >= i) break;
            const double pivot = w[static_cast<std::size_t>(diag_pos[static_cast<std::size_t>(c)])];
            const double m = w[static_cast<std::size_t>(k)] / pivot;
            w[static_cast<std::size_t>(k)] = m;
            for (index_t kk = diag_pos[static_cast<std::size_t>(c)] + 1;
                 kk < A.row_starts[static_cast<std::size_t>(c) + 1]; ++kk) {
                const index_t j = A.col_indices[static_cast<std::size_t>(kk)];
                const index_t p = pos[static_cast<std::size_t>(j)];
                if (p >= 0) w[static_cast<std::size_t>(p)] -= m * w[static_cast<std::size_t>(kk)];
            }
        }
        if (w[static_cast<std::size_t>(diag_pos[static_cast<std::size_t>(i)])] == 0.0)
            w[static_cast<std::size_t>(diag_pos[static_cast<std::size_t>(i)])] =
                patched_pivot(0.0, 0.0, row_two_norm(A, i), anorm_f, pivot_patch, i);

        for (index_t k = row_begin; k < row_end; ++k)
            pos[static_cast<std::size_t>(A.col_indices[static_cast<std::size_t>(k)])] = -1;
    }

    FactorBuilder fb;
    for (index_t i = 0; i < n; ++i) {
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            const index_t j = A.col_indices[static_cast<std::size_t>(k)];
            if (j < i) {
                fb.l_cols.push_back(j);
                fb.l_vals.push_back(w[static_cast<std::size_t>(k)]);
            } else {
                fb.u_cols.push_back(j);
                fb.u_vals.push_back(w[static_cast<std::size_t>(k)]);
            }
        }
        fb.finish_row();
    }
    return fb.build(n);
}

IluFactors ilut(const SparseMatrix& A, const IluParams& params) {
    if (A.nrows != A.ncols) fail_invalid("ilut: matrix must be square");
    if (!(params.droptol >= 0.0) || !std::isfinite(params.droptol))
        fail_invalid("ilut: droptol must be finite and >= 0");
    if (params.lfill < 0) fail_invalid("ilut: lfill must be >= 0");
    const index_t n = A.nrows;
    const double anorm_f = frobenius_norm(A);

    // Factored U rows, kept as flat CSR-in-progress for the elimination
    // updates; diagonal value per row tracked separately for fast pivots.
    std::vector<index_t> u_starts{0};
    std::vector<index_t> u_cols;
    std::vector<double> u_vals;
    std::vector<double> u_diag(static_cast<std::size_t>(n), 0.0);
    std::vector<index_t> u_diag_pos(static_cast<std::size_t>(n), -1);

    FactorBuilder fb;
    fb.u_starts.clear(); // built from u_starts at the end

    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    std::vector<char> in_row(static_cast<std::size_t>(n), 0);      // nonzero in working row
    std::vector<char> in_pattern(static_cast<std::size_t>(n), 0);  // original pattern of row i
    std::vector<index_t> upper_cols;

    for (index_t i = 0; i < n; ++i) {
        const double tau = params.droptol * row_two_norm(A, i);

        std::priority_queue<index_t, std::vector<index_t>, std::greater<index_t>> lower_heap;
        upper_cols.clear();
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            const index_t j = A.col_indices[static_cast<std::size_t>(k)];
            w[static_cast<std::size_t>(j)] = A.values[static_cast<std::size_t>(k)];
            in_row[static_cast<std::size_t>(j)] = 1;
            in_pattern[static_cast<std::size_t>(j)] = 1;
            if (j < i)
                lower_heap.push(j);
            else if (j > i)
                upper_cols.push_back(j);
        }

        std::vector<index_t> kept_lower;
        while (!lower_heap.empty()) {
            const index_t k = lower_heap.top();
            lower_heap.pop();
            if (!in_row[static_cast<std::size_t>(k)]) continue;
            const double m = w[static_cast<std::size_t>(k)] / u_diag[static_cast<std::size_t>(k)];
            if (std::abs(m) < tau) { // dual-threshold drop of the multiplier
                w[static_cast<std::size_t>(k)] = 0.0;
                in_row[static_cast<std::size_t>(k)] = 0;
                continue;
            }
            w[static_cast<std::size_t>(k)] = m;
            kept_lower.push_back(k);
            for (index_t kk = u_diag_pos[static_cast<std::size_t>(k)] + 1;
                 kk < u_starts[static_cast<std::size_t>(k) + 1]; ++kk) {
                const index_t j = u_cols[static_cast<std::size_t>(kk)];
                w[static_cast<std::size_t>(j)] -= m * u_vals[static_cast<std::size_t>(kk)];
                if (!in_row[static_cast<std::size_t>(j)]) {
                    in_row[static_cast<std::size_t>(j)] = 1;
                    if (j < i)
                        lower_heap.push(j);
                    else if (j > i)
                        upper_cols.push_back(j);
                }
            }
        }

        // Select the surviving entries: original-pattern entries pass on the
        // threshold alone, fill entries additionally compete for lfill slots.
        // Lower-part entries were already thresholded as multipliers during
        // elimination and their values are final, so only the fill cap
        // applies to them here.
        auto select_part = [&](const std::vector<index_t>& cols, bool lower,
                               std::vector<index_t>& out_cols) {
            std::vector<index_t> fill;
            for (index_t j : cols) {
                if (!in_row[static_cast<std::size_t>(j)]) continue;
                const double v = w[static_cast<std::size_t>(j)];
                if (!lower && std::abs(v) < tau) continue;
                if (in_pattern[static_cast<std::size_t>(j)])
                    out_cols.push_back(j);
                else
                    fill.push_back(j);
            }
            const auto cap = static_cast<std::size_t>(params.lfill);
            if (fill.size() > cap) {
                std::nth_element(fill.begin(), fill.begin() + static_cast<std::ptrdiff_t>(cap),
                                 fill.end(), [&](index_t a, index_t b) {
                                     const double va = std::abs(w[static_cast<std::size_t>(a)]);
                                     const double vb = std::abs(w[static_cast<std::size_t>(b)]);
                                     if (va != vb) return va > vb;
                                     return a < b;
                                 });
                fill.resize(cap);
            }
            out_cols.insert(out_cols.end(), fill.begin(), fill.end());
            std::sort(out_cols.begin(), out_cols.end());
        };

        std::vector<index_t> final_lower, final_upper_strict;
        select_part(kept_lower, true, final_lower);
        select_part(upper_cols, false, final_upper_strict);

        double dval = w[static_cast<std::size_t>(i)];
        if (dval == 0.0)
            dval = patched_pivot(0.0, params.droptol, row_two_norm(A, i), anorm_f,
                                 params.pivot_patch, i);

        for (index_t j : final_lower) {
            fb.l_cols.push_back(j);
            fb.l_vals.push_back(w[static_cast<std::size_t>(j)]);
        }
        fb.l_starts.push_back(static_cast<index_t>(fb.l_cols.size()));

        u_diag_pos[static_cast<std::size_t>(i)] = static_cast<index_t>(u_cols.size());
        u_diag[static_cast<std::size_t>(i)] = dval;
        u_cols.push_back(i);
        u_vals.push_back(dval);
        for (index_t j : final_upper_strict) {
            u_cols.push_back(j);
            u_vals.push_back(w[static_cast<std::size_t>(j)]);
        }
        u_starts.push_back(static_cast<index_t>(u_cols.size()));

        // reset workspace
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
            in_pattern[static_cast<std::size_t>(A.col_indices[static_cast<std::size_t>(k)])] = 0;
        for (index_t j : kept_lower) {
            w[static_cast<std::size_t>(j)] = 0.0;
            in_row[static_cast<std::size_t>(j)] = 0;
        }
        w[static_cast<std::size_t>(i)] = 0.0;
        in_row[static_cast<std::size_t>(i)] = 0;
        for (index_t j : upper_cols) {
            w[static_cast<std::size_t>(j)] = 0.0;
            in_row[static_cast<std::size_t>(j)] = 0;
        }
    }

    fb.u_starts = std::move(u_starts);
    fb.u_cols = std::move(u_cols);
    fb.u_vals = std::move(u_vals);
    return fb.build(n);
}

IluFactors ilu_factorize(const SparseMatrix& A, const IluParams& params) {
    return params.variant == IluVariant::ilu0 ? ilu0(A, params.pivot_patch) : ilut(A, params);
}

IluFactors row_scale(const IluFactors& f) {
    if (f.row_scale || f.col_scale) fail_invalid("row_scale: factors are already scaled");
    DenseVector d = diag(f.U);
    for (index_t i = 0; i < static_cast<index_t>(d.size()); ++i)
        if (d[static_cast<std::size_t>(i)] == 0.0)
            fail_numeric("row_scale: zero diagonal entry in U at row " + std::to_string(i));

    IluFactors out;
    out.L = f.L;
    out.U = f.U;
    out.nnz_L = f.nnz_L;
    out.nnz_U = f.nnz_U;
    for (index_t i = 0; i < out.U.nrows; ++i) {
        const double inv = 1.0 / d[static_cast<std::size_t>(i)];
        for (index_t k = out.U.row_starts[static_cast<std::size_t>(i)];
             k < out.U.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            if (out.U.col_indices[static_cast<std::size_t>(k)] == i)
                out.U.values[static_cast<std::size_t>(k)] = 1.0; // exact unit diagonal
            else
                out.U.values[static_cast<std::size_t>(k)] *= inv;
        }
    }
    out.row_scale = std::move(d);
    return out;
}

IluFactors row_col_scale(const IluFactors& f) {
    if (f.row_scale || f.col_scale) fail_invalid("row_col_scale: factors are already scaled");
    DenseVector d = diag(f.U);
    const auto n = d.size();
    DenseVector dr(n), dc(n);      // applied scalings
    DenseVector rs(n), cs(n);      // stored inverses: U_orig = diag(rs) U diag(cs)
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] == 0.0)
            fail_numeric("row_col_scale: zero diagonal entry in U at row " + std::to_string(i));
        const double root = std::sqrt(std::abs(d[i]));
        const double sign = d[i] < 0.0 ? -1.0 : 1.0;
        dc[i] = 1.0 / root;
        dr[i] = sign / root;
        cs[i] = root;
        rs[i] = sign * root;
    }

    IluFactors out;
    out.L = f.L;
    out.U = f.U;
    out.nnz_L = f.nnz_L;
    out.nnz_U = f.nnz_U;
    for (index_t i = 0; i < out.U.nrows; ++i) {
        for (index_t k = out.U.row_starts[static_cast<std::size_t>(i)];
             k < out.U.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            const index_t j = out.U.col_indices[static_cast<std::size_t>(k)];
            if (j == i)
                out.U.values[static_cast<std::size_t>(k)] = 1.0;
            else
                out.U.values[static_cast<std::size_t>(k)] *=
                    dr[static_cast<std::size_t>(i)] * dc[static_cast<std::size_t>(j)];
        }
    }
    out.row_scale = std::move(rs);
    out.col_scale = std::move(cs);
    return out;
}

SparseMatrix unscaled_upper(const IluFactors& f) {
    SparseMatrix U = f.U;
    if (!f.row_scale && !f.col_scale) return U;
    for (index_t i = 0; i < U.nrows; ++i) {
        for (index_t k = U.row_starts[static_cast<std::size_t>(i)];
             k < U.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            const index_t j = U.col_indices[static_cast<std::size_t>(k)];
            double v = U.values[static_cast<std::size_t>(k)];
            if (f.row_scale) v *= (*f.row_scale)[static_cast<std::size_t>(i)];
            if (f.col_scale) v *= (*f.col_scale)[static_cast<std::size_t>(j)];
            U.values[static_cast<std::size_t>(k)] = v;
        }
    }
    return U;
}

double departure_from_normality(const SparseMatrix& T, TriShape shape) {
    require_shape(T, shape, "departure_from_normality");
    // For triangular T the eigenvalues are the diagonal entries, so the
    // radicand |T|_F^2 - sum_i t_ii^2 is exactly the off-diagonal square sum;
    // accumulating it directly avoids the cancellation of the subtraction.
    double offdiag2 = 0.0;
    for (index_t i = 0; i < T.nrows; ++i) {
        for (index_t k = T.row_starts[static_cast<std::size_t>(i)];
             k < T.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            if (T.col_indices[static_cast<std::size_t>(k)] == i) continue;
            const double v = T.values[static_cast<std::size_t>(k)];
            offdiag2 += v * v;
        }
    }
    return std::sqrt(offdiag2);
}

double condition_estimate(const SparseMatrix& T, TriShape shape) {
    if (T.nrows != T.ncols) fail_invalid("condition_estimate: matrix must be square");
    if (shape == TriShape::StrictLower || shape == TriShape::StrictUpper)
        fail_numeric("condition_estimate: strictly triangular matrices are singular");
    require_shape(T, shape, "condition_estimate");
    const index_t n = T.nrows;
    if (n == 0) return 1.0;

    if (shape != TriShape::UnitLower) {
        DenseVector d = diag(T);
        for (index_t i = 0; i < n; ++i)
            if (d[static_cast<std::size_t>(i)] == 0.0)
                fail_numeric("condition_estimate: singular diagonal at row " + std::to_string(i));
    }

    const SparseMatrix Tt = transpose(T);
    auto solve_fwd = [&](const DenseVector& b) {
        switch (shape) {
        case TriShape::UnitLower: return solve_lower_direct(T, b);
        case TriShape::Lower: return solve_lower_explicit(T, b);
        default: return solve_upper_direct(T, b);
        }
    };
    auto solve_adj = [&](const DenseVector& b) {
        switch (shape) {
        case TriShape::UnitLower: return solve_upper_unit(Tt, b);
        case TriShape::Lower: return solve_upper_direct(Tt, b);
        default: return solve_lower_explicit(Tt, b);
        }
    };

    // Hager/Higham 1-norm estimate of |T^-1|_1.
    DenseVector x(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
    double est = 0.0;
    index_t last_j = -1;
    for (int iter = 0; iter < 8; ++iter) {
        DenseVector y = solve_fwd(x);
        double est_new = 0.0;
        for (double v : y) est_new += std::abs(v);
        if (iter > 0 && est_new <= est) break;
        est = est_new;
        DenseVector xi(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) xi[i] = y[i] < 0.0 ? -1.0 : 1.0;
        DenseVector z = solve_adj(xi);
        index_t j = 0;
        double zmax = -1.0;
        double ztx = 0.0;
        for (index_t i = 0; i < n; ++i) {
            ztx += z[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
            const double a = std::abs(z[static_cast<std::size_t>(i)]);
            if (a > zmax) {
                zmax = a;
                j = i;
            }
        }
        if (zmax <= ztx || j == last_j) break;
        last_j = j;
        std::fill(x.begin(), x.end(), 0.0);
        x[static_cast<std::size_t>(j)] = 1.0;
    }

    double t_one = 0.0;
    {
        std::vector<double> colsum(static_cast<std::size_t>(n), 0.0);
        for (index_t i = 0; i < n; ++i)
            for (index_t k = T.row_starts[static_cast<std::size_t>(i)];
                 k < T.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
                colsum[static_cast<std::size_t>(T.col_indices[static_cast<std::size_t>(k)])] +=
                    std::abs(T.values[static_cast<std::size_t>(k)]);
        if (shape == TriShape::UnitLower)
            for (double& c : colsum) c += 1.0;
        for (double c : colsum) t_one = std::max(t_one, c);
    }
    return t_one * est;
}

StripingReport striping_report(const IluFactors& f, double threshold) {
    const index_t n = f.U.ncols;
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(n));
    auto add = [&](const SparseMatrix& M) {
        for (index_t k = 0; k < M.nnz(); ++k)
            cols[static_cast<std::size_t>(M.col_indices[static_cast<std::size_t>(k)])].push_back(
                std::abs(M.values[static_cast<std::size_t>(k)]));
    };
    add(f.L);
    add(f.U);
    for (index_t i = 0; i < f.L.nrows; ++i)
        cols[static_cast<std::size_t>(i)].push_back(1.0); // implicit unit diagonal of L

    StripingReport rep;
    rep.threshold = threshold;
    for (index_t j = 0; j < n; ++j) {
        auto& v = cols[static_cast<std::size_t>(j)];
        if (v.empty()) continue;
        std::sort(v.begin(), v.end());
        StripingColumn c;
        c.col = j;
        c.max_abs = v.back();
        c.median_abs = v[(v.size() - 1) / 2]; // lower median
        c.ratio = c.median_abs > 0.0
                      ? c.max_abs / c.median_abs
                      : (c.max_abs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (c.ratio > threshold) rep.flagged.push_back(j);
        rep.columns.push_back(c);
    }
    return rep;
}

} // namespace iluamg
