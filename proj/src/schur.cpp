#include "iluamg/schur.hpp"
#include "iluamg/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iluamg {

IluFactors apply_scaling(IluFactors f, ScalingKind scaling) {
    switch (scaling) {
    case ScalingKind::none: return f;
    case ScalingKind::row: return row_scale(f);
    case ScalingKind::row_col: return row_col_scale(f);
    }
    return f;
}

SchurPartition partition(const SparseMatrix& A, index_t p) {
    if (A.nrows != A.ncols) fail_invalid("partition: matrix must be square");
    if (p < 1 || p > A.nrows)
        fail_invalid("partition: block count " + std::to_string(p) + " out of range [1," +
                     std::to_string(A.nrows) + "]");
    const index_t n = A.nrows;

    SchurPartition part;
    part.p = p;
    const index_t base = n / p;
    for (index_t b = 0; b < p; ++b) {
        const index_t begin = b * base;
        const index_t end = (b == p - 1) ? n : begin + base; // last block absorbs remainder
        part.block_ranges.emplace_back(begin, end);
    }
    std::vector<index_t> block_of(static_cast<std::size_t>(n));
    for (index_t b = 0; b < p; ++b)
        for (index_t i = part.block_ranges[static_cast<std::size_t>(b)].first;
             i < part.block_ranges[static_cast<std::size_t>(b)].second; ++i)
            block_of[static_cast<std::size_t>(i)] = b;

    // A row is interface iff it couples across a cut, in either direction.
    std::vector<char> is_interface(static_cast<std::size_t>(n), 0);
    for (index_t i = 0; i < n; ++i) {
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            const index_t j = A.col_indices[static_cast<std::size_t>(k)];
            if (block_of[static_cast<std::size_t>(i)] != block_of[static_cast<std::size_t>(j)]) {
                is_interface[static_cast<std::size_t>(i)] = 1;
                is_interface[static_cast<std::size_t>(j)] = 1;
            }
        }
    }

    part.perm.assign(static_cast<std::size_t>(n), -1);
    for (index_t i = 0; i < n; ++i)
        if (!is_interface[static_cast<std::size_t>(i)]) part.interior_idx.push_back(i);
    for (index_t i = 0; i < n; ++i)
        if (is_interface[static_cast<std::size_t>(i)]) part.interface_idx.push_back(i);
    const auto ni = static_cast<index_t>(part.interior_idx.size());
    for (index_t k = 0; k < ni; ++k)
        part.perm[static_cast<std::size_t>(part.interior_idx[static_cast<std::size_t>(k)])] = k;
    for (index_t k = 0; k < static_cast<index_t>(part.interface_idx.size()); ++k)
        part.perm[static_cast<std::size_t>(part.interface_idx[static_cast<std::size_t>(k)])] =
            ni + k;

    // Assemble the permuted blocks.
    std::vector<std::tuple<index_t, index_t, double>> tb, te, tf, tc;
    for (index_t i = 0; i < n; ++i) {
        const index_t pi = part.perm[static_cast<std::size_t>(i)];
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            const index_t j = A.col_indices[static_cast<std::size_t>(k)];
            const index_t pj = part.perm[static_cast<std::size_t>(j)];
            const double v = A.values[static_cast<std::size_t>(k)];
            const bool ri = pi < ni, cj = pj < ni;
            if (ri && cj)
                tb.emplace_back(pi, pj, v);
            else if (ri && !cj)
                te.emplace_back(pi, pj - ni, v);
            else if (!ri && cj)
                tf.emplace_back(pi - ni, pj, v);
            else
                tc.emplace_back(pi - ni, pj - ni, v);
        }
    }
    const index_t nf = static_cast<index_t>(part.interface_idx.size());
    part.B = SparseMatrix::from_triplets(ni, ni, std::move(tb), /*keep_zeros=*/true);
    part.E = SparseMatrix::from_triplets(ni, nf, std::move(te), true);
    part.F = SparseMatrix::from_triplets(nf, ni, std::move(tf), true);
    part.C = SparseMatrix::from_triplets(nf, nf, std::move(tc), true);

    // Interior positions of one block form a contiguous run of the interior
    // ordering, since both are ascending in the global numbering.
    index_t cursor = 0;
    for (index_t b = 0; b < p; ++b) {
        SchurBlock blk;
        blk.begin = cursor;
        while (cursor < ni &&
               block_of[static_cast<std::size_t>(
                   part.interior_idx[static_cast<std::size_t>(cursor)])] == b)
            ++cursor;
        blk.end = cursor;
        part.blocks.push_back(std::move(blk));
    }
    return part;
}

namespace {

SparseMatrix extract_block(const SparseMatrix& B, index_t begin, index_t end) {
    std::vector<std::tuple<index_t, index_t, double>> trip;
    for (index_t i = begin; i < end; ++i) {
        for (index_t k = B.row_starts[static_cast<std::size_t>(i)];
             k < B.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            const index_t j = B.col_indices[static_cast<std::size_t>(k)];
            if (j >= begin && j < end)
                trip.emplace_back(i - begin, j - begin, B.values[static_cast<std::size_t>(k)]);
        }
    }
    return SparseMatrix::from_triplets(end - begin, end - begin, std::move(trip), true);
}

} // namespace

void factorize_blocks(SchurPartition& part, const IluParams& ilu, ScalingKind scaling,
                      const TriSolveConfig& trisolve) {
    if (trisolve.mode == TriSolveMode::richardson && scaling == ScalingKind::none)
        fail_invalid("factorize_blocks: Richardson block solves require row or row/col scaling");
    for (auto& blk : part.blocks) {
        if (blk.end == blk.begin) continue;
        SparseMatrix Bb = extract_block(part.B, blk.begin, blk.end);
        blk.factors = apply_scaling(ilu_factorize(Bb, ilu), scaling);
    }
    part.trisolve = trisolve;
    part.factorized = true;
}

DenseVector block_solve(const SchurPartition& part, const DenseVector& f) {
    if (!part.factorized) fail_invalid("block_solve: partition has no block factors");
    DenseVector x(f.size(), 0.0);
    DenseVector fb, y, z;
    for (const auto& blk : part.blocks) {
        const auto m = static_cast<std::size_t>(blk.end - blk.begin);
        if (m == 0) continue;
        fb.assign(f.begin() + blk.begin, f.begin() + blk.end);
        if (part.trisolve.mode == TriSolveMode::direct) {
            y = solve_lower_direct(blk.factors.L, fb);
            z = blk.factors.row_scale ? solve_upper_scaled_direct(blk.factors, y)
                                      : solve_upper_direct(blk.factors.U, y);
        } else {
            y = richardson_lower(blk.factors.L, fb, part.trisolve.m_lower);
            z = richardson_upper_scaled(blk.factors, y, part.trisolve.m_upper);
        }
        std::copy(z.begin(), z.end(), x.begin() + blk.begin);
    }
    return x;
}

void schur_smooth(const SparseMatrix& A, const SchurPartition& part, const DenseVector& b,
                  DenseVector& x) {
    if (!part.factorized) fail_invalid("schur_smooth: partition has no block factors");
    if (A.nrows != static_cast<index_t>(part.perm.size()))
        fail_invalid("schur_smooth: partition does not match the matrix");

    const DenseVector r = residual(A, x, b);
    const auto ni = static_cast<std::size_t>(part.interior_idx.size());
    const auto nf = static_cast<std::size_t>(part.interface_idx.size());
    DenseVector f(ni), g(nf);
    for (std::size_t k = 0; k < ni; ++k)
        f[k] = r[static_cast<std::size_t>(part.interior_idx[k])];
    for (std::size_t k = 0; k < nf; ++k)
        g[k] = r[static_cast<std::size_t>(part.interface_idx[k])];

    DenseVector y(nf, 0.0);
    if (nf > 0) {
        // gt = g - F B^-1 f
        DenseVector gt = g;
        {
            const DenseVector t = spmv(part.F, block_solve(part, f));
            for (std::size_t k = 0; k < nf; ++k) gt[k] -= t[k];
        }
        // One GMRES iteration from y = 0 on S y = gt, S applied matrix-free.
        const double beta = two_norm(gt);
        if (beta > 0.0) {
            DenseVector v1(nf);
            for (std::size_t k = 0; k < nf; ++k) v1[k] = gt[k] / beta;
            DenseVector w = spmv(part.C, v1);
            {
                const DenseVector t = spmv(part.F, block_solve(part, spmv(part.E, v1)));
                for (std::size_t k = 0; k < nf; ++k) w[k] -= t[k];
            }
            double h11 = 0.0;
            for (std::size_t k = 0; k < nf; ++k) h11 += v1[k] * w[k];
            double h21sq = 0.0;
            for (std::size_t k = 0; k < nf; ++k) {
                const double d = w[k] - h11 * v1[k];
                h21sq += d * d;
            }
            const double denom = h11 * h11 + h21sq;
            // Breakdown (S gt = 0): keep y = 0.
            if (denom > 0.0) {
                const double alpha = beta * h11 / denom;
                for (std::size_t k = 0; k < nf; ++k) y[k] = alpha * v1[k];
            }
        }
    }

    // Back-substitution for the interiors: x_I = B^-1 (f - E y).
    DenseVector fi = f;
    if (nf > 0) {
        const DenseVector t = spmv(part.E, y);
        for (std::size_t k = 0; k < ni; ++k) fi[k] -= t[k];
    }
    const DenseVector xi = block_solve(part, fi);

    for (std::size_t k = 0; k < ni; ++k)
        x[static_cast<std::size_t>(part.interior_idx[k])] += xi[k];
    for (std::size_t k = 0; k < nf; ++k)
        x[static_cast<std::size_t>(part.interface_idx[k])] += y[k];
}

} // namespace iluamg
