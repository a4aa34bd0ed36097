#include "iluamg/amg.hpp"
#include "iluamg/error.hpp"
#include "iluamg/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iluamg {

double Hierarchy::operator_complexity() const {
    if (levels.empty() || levels.front().A.nnz() == 0) return 0.0;
    double total = 0.0;
    for (const auto& lev : levels) total += static_cast<double>(lev.A.nnz());
    return total / static_cast<double>(levels.front().A.nnz());
}

SparseMatrix strength(const SparseMatrix& A, double theta) {
    if (A.nrows != A.ncols) fail_invalid("strength: matrix must be square");
    if (!(theta > 0.0 && theta <= 1.0))
        fail_invalid("strength: theta must lie in (0, 1]");

    SparseMatrix S;
    S.nrows = S.ncols = A.nrows;
    S.row_starts.assign(static_cast<std::size_t>(A.nrows) + 1, 0);
    for (index_t i = 0; i < A.nrows; ++i) {
        double m = 0.0;
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
            if (A.col_indices[static_cast<std::size_t>(k)] != i)
                m = std::max(m, std::abs(A.values[static_cast<std::size_t>(k)]));
        if (m == 0.0) {
            S.row_starts[static_cast<std::size_t>(i) + 1] =
                S.row_starts[static_cast<std::size_t>(i)];
            continue;
        }
        const double cut = theta * m;
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            const index_t j = A.col_indices[static_cast<std::size_t>(k)];
            if (j != i && std::abs(A.values[static_cast<std::size_t>(k)]) >= cut) {
                S.col_indices.push_back(j);
                S.values.push_back(1.0);
            }
        }
        S.row_starts[static_cast<std::size_t>(i) + 1] =
            static_cast<index_t>(S.col_indices.size());
    }
    return S;
}

namespace {

enum : char { kUnassigned = 0, kCoarse = 1, kFine = 2 };

CfSplit finalize_split(const SparseMatrix& S, std::vector<char>& state) {
    // Repair pass: an F-point with no strong C-neighbor becomes C itself.
    const index_t n = S.nrows;
    for (index_t i = 0; i < n; ++i) {
        if (state[static_cast<std::size_t>(i)] != kFine) continue;
        bool has_c = false;
        for (index_t k = S.row_starts[static_cast<std::size_t>(i)];
             k < S.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
            if (state[static_cast<std::size_t>(
                    S.col_indices[static_cast<std::size_t>(k)])] == kCoarse) {
                has_c = true;
                break;
            }
        if (!has_c) state[static_cast<std::size_t>(i)] = kCoarse;
    }

    CfSplit split;
    split.is_coarse.resize(static_cast<std::size_t>(n));
    split.coarse_index.assign(static_cast<std::size_t>(n), -1);
    for (index_t i = 0; i < n; ++i) {
        split.is_coarse[static_cast<std::size_t>(i)] =
            state[static_cast<std::size_t>(i)] == kCoarse;
        if (split.is_coarse[static_cast<std::size_t>(i)])
            split.coarse_index[static_cast<std::size_t>(i)] = split.n_coarse++;
    }
    return split;
}

} // namespace

CfSplit coarsen_rs_greedy(const SparseMatrix& S) {
    const index_t n = S.nrows;
    const SparseMatrix St = transpose(S);
    std::vector<char> state(static_cast<std::size_t>(n), kUnassigned);
    for (index_t i = 0; i < n; ++i) {
        if (state[static_cast<std::size_t>(i)] != kUnassigned) continue;
        state[static_cast<std::size_t>(i)] = kCoarse;
        for (index_t k = St.row_starts[static_cast<std::size_t>(i)];
             k < St.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            const index_t j = St.col_indices[static_cast<std::size_t>(k)];
            if (state[static_cast<std::size_t>(j)] == kUnassigned)
                state[static_cast<std::size_t>(j)] = kFine;
        }
    }
    return finalize_split(S, state);
}

CfSplit coarsen_pmis(const SparseMatrix& S, std::uint64_t seed) {
    const index_t n = S.nrows;
    const SparseMatrix St = transpose(S);
    std::vector<double> weight(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i)
        weight[static_cast<std::size_t>(i)] =
            static_cast<double>(St.row_starts[static_cast<std::size_t>(i) + 1] -
                                St.row_starts[static_cast<std::size_t>(i)]) +
            hash_unit(seed, static_cast<std::uint64_t>(i));

    std::vector<char> state(static_cast<std::size_t>(n), kUnassigned);
    index_t unassigned = n;
    std::vector<index_t> new_coarse;
    while (unassigned > 0) {
        new_coarse.clear();
        for (index_t i = 0; i < n; ++i) {
            if (state[static_cast<std::size_t>(i)] != kUnassigned) continue;
            bool is_max = true;
            auto beats = [&](const SparseMatrix& G) {
                for (index_t k = G.row_starts[static_cast<std::size_t>(i)];
                     is_max && k < G.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
                    const index_t j = G.col_indices[static_cast<std::size_t>(k)];
                    if (j != i && state[static_cast<std::size_t>(j)] == kUnassigned &&
                        weight[static_cast<std::size_t>(j)] >= weight[static_cast<std::size_t>(i)])
                        is_max = false;
                }
            };
            beats(S);
            beats(St);
            if (is_max) new_coarse.push_back(i);
        }
        if (new_coarse.empty()) {
            // Jitter ties are measure-zero; keep a deterministic guard anyway.
            for (index_t i = 0; i < n; ++i)
                if (state[static_cast<std::size_t>(i)] == kUnassigned) {
                    new_coarse.push_back(i);
                    break;
                }
        }
        for (index_t i : new_coarse) {
            state[static_cast<std::size_t>(i)] = kCoarse;
            --unassigned;
        }
        for (index_t i : new_coarse) {
            for (index_t k = St.row_starts[static_cast<std::size_t>(i)];
                 k < St.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
                const index_t j = St.col_indices[static_cast<std::size_t>(k)];
                if (state[static_cast<std::size_t>(j)] == kUnassigned) {
                    state[static_cast<std::size_t>(j)] = kFine;
                    --unassigned;
                }
            }
        }
    }
    return finalize_split(S, state);
}

namespace {

// Per-row classification shared by both interpolations.
struct RowSplit {
    double a_ii = 0.0;
    double beta = 0.0;        // strong F + weak C
    double weak_sum = 0.0;    // all off-diagonal non-strong neighbors
    std::vector<std::pair<index_t, double>> strong_c; // (global col, a_ij)
};

RowSplit classify_row(const SparseMatrix& A, const SparseMatrix& S, const CfSplit& split,
                      index_t i, std::vector<char>& strong_mark) {
    for (index_t k = S.row_starts[static_cast<std::size_t>(i)];
         k < S.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
        strong_mark[static_cast<std::size_t>(S.col_indices[static_cast<std::size_t>(k)])] = 1;

    RowSplit rs;
    for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
         k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
        const index_t j = A.col_indices[static_cast<std::size_t>(k)];
        const double v = A.values[static_cast<std::size_t>(k)];
        if (j == i) {
            rs.a_ii = v;
        } else if (strong_mark[static_cast<std::size_t>(j)]) {
            if (split.is_coarse[static_cast<std::size_t>(j)])
                rs.strong_c.emplace_back(j, v);
            else
                rs.beta += v; // strong F-neighbor
        } else {
            rs.weak_sum += v;
            if (split.is_coarse[static_cast<std::size_t>(j)]) rs.beta += v; // weak C-neighbor
        }
    }

    for (index_t k = S.row_starts[static_cast<std::size_t>(i)];
         k < S.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
        strong_mark[static_cast<std::size_t>(S.col_indices[static_cast<std::size_t>(k)])] = 0;
    return rs;
}

std::vector<std::pair<index_t, double>> direct_row_weights(const SparseMatrix& A,
                                                           const SparseMatrix& S,
                                                           const CfSplit& split, index_t i,
                                                           std::vector<char>& strong_mark) {
    RowSplit rs = classify_row(A, S, split, i, strong_mark);
    if (rs.strong_c.empty())
        fail_invalid("interp_direct: F-point " + std::to_string(i) +
                     " has no strong C-neighbor (coarsening repair failed)");
    const double denom = rs.a_ii + rs.weak_sum;
    if (denom == 0.0)
        fail_numeric("interp_direct: zero denominator at row " + std::to_string(i));
    const double shift = rs.beta / static_cast<double>(rs.strong_c.size());
    std::vector<std::pair<index_t, double>> w;
    w.reserve(rs.strong_c.size());
    for (auto [j, aij] : rs.strong_c) w.emplace_back(j, -(aij + shift) / denom);
    return w;
}

} // namespace

SparseMatrix interp_direct(const SparseMatrix& A, const CfSplit& split, const SparseMatrix& S) {
    const index_t n = A.nrows;
    std::vector<char> strong_mark(static_cast<std::size_t>(n), 0);
    std::vector<std::tuple<index_t, index_t, double>> trip;
    for (index_t i = 0; i < n; ++i) {
        if (split.is_coarse[static_cast<std::size_t>(i)]) {
            trip.emplace_back(i, split.coarse_index[static_cast<std::size_t>(i)], 1.0);
            continue;
        }
        for (auto [j, wij] : direct_row_weights(A, S, split, i, strong_mark))
            trip.emplace_back(i, split.coarse_index[static_cast<std::size_t>(j)], wij);
    }
    return SparseMatrix::from_triplets(n, split.n_coarse, std::move(trip));
}

SparseMatrix interp_mm_ext(const SparseMatrix& A, const CfSplit& split, const SparseMatrix& S,
                           index_t* fallback_rows) {
    const index_t n = A.nrows;
    const index_t nc = split.n_coarse;
    const index_t nf = n - nc;

    std::vector<index_t> f_local(static_cast<std::size_t>(n), -1);
    std::vector<index_t> f_global;
    f_global.reserve(static_cast<std::size_t>(nf));
    for (index_t i = 0; i < n; ++i)
        if (!split.is_coarse[static_cast<std::size_t>(i)]) {
            f_local[static_cast<std::size_t>(i)] = static_cast<index_t>(f_global.size());
            f_global.push_back(i);
        }

    // Assemble the F-row sub-matrices of the strong part, plus the diagonal
    // scalings D_b (strong F->C row sums) and D_g (weak row sums).
    std::vector<char> strong_mark(static_cast<std::size_t>(n), 0);
    std::vector<std::tuple<index_t, index_t, double>> t_sff, t_sfc;
    DenseVector d_beta(static_cast<std::size_t>(nf), 0.0);
    DenseVector d_gamma(static_cast<std::size_t>(nf), 0.0);
    DenseVector d_ff(static_cast<std::size_t>(nf), 0.0);
    for (index_t fi = 0; fi < nf; ++fi) {
        const index_t i = f_global[static_cast<std::size_t>(fi)];
        for (index_t k = S.row_starts[static_cast<std::size_t>(i)];
             k < S.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
            strong_mark[static_cast<std::size_t>(S.col_indices[static_cast<std::size_t>(k)])] = 1;
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            const index_t j = A.col_indices[static_cast<std::size_t>(k)];
            const double v = A.values[static_cast<std::size_t>(k)];
            if (j == i) {
                d_ff[static_cast<std::size_t>(fi)] = v;
            } else if (strong_mark[static_cast<std::size_t>(j)]) {
                if (split.is_coarse[static_cast<std::size_t>(j)]) {
                    t_sfc.emplace_back(fi, split.coarse_index[static_cast<std::size_t>(j)], v);
                    d_beta[static_cast<std::size_t>(fi)] += v;
                } else {
                    t_sff.emplace_back(fi, f_local[static_cast<std::size_t>(j)], v);
                }
            } else {
                d_gamma[static_cast<std::size_t>(fi)] += v; // weak, F or C column alike
            }
        }
        for (index_t k = S.row_starts[static_cast<std::size_t>(i)];
             k < S.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
            strong_mark[static_cast<std::size_t>(S.col_indices[static_cast<std::size_t>(k)])] = 0;
    }

    SparseMatrix Asff = SparseMatrix::from_triplets(nf, nf, std::move(t_sff));
    SparseMatrix Asfc = SparseMatrix::from_triplets(nf, nc, std::move(t_sfc));

    index_t fallbacks = 0;
    std::vector<char> is_fallback(static_cast<std::size_t>(nf), 0);
    for (index_t fi = 0; fi < nf; ++fi)
        if (d_beta[static_cast<std::size_t>(fi)] == 0.0) {
            is_fallback[static_cast<std::size_t>(fi)] = 1;
            ++fallbacks;
        }

    // M1 = (D_FF + D_g)^-1 (A^s_FF + D_b): add D_b on the diagonal, then row-scale.
    std::vector<std::tuple<index_t, index_t, double>> t_m1;
    for (index_t fi = 0; fi < nf; ++fi) {
        const double denom = d_ff[static_cast<std::size_t>(fi)] +
                             d_gamma[static_cast<std::size_t>(fi)];
        if (denom == 0.0)
            fail_numeric("interp_mm_ext: singular D_FF + D_gamma at F-row " +
                         std::to_string(f_global[static_cast<std::size_t>(fi)]));
        const double inv = 1.0 / denom;
        t_m1.emplace_back(fi, fi, d_beta[static_cast<std::size_t>(fi)] * inv);
        for (index_t k = Asff.row_starts[static_cast<std::size_t>(fi)];
             k < Asff.row_starts[static_cast<std::size_t>(fi) + 1]; ++k)
            t_m1.emplace_back(fi, Asff.col_indices[static_cast<std::size_t>(k)],
                              Asff.values[static_cast<std::size_t>(k)] * inv);
    }
    SparseMatrix M1 = SparseMatrix::from_triplets(nf, nf, std::move(t_m1));

    // M2 = D_b^-1 A^s_FC; fallback rows are zeroed here and rebuilt below.
    SparseMatrix M2 = Asfc;
    for (index_t fi = 0; fi < nf; ++fi) {
        const double inv = is_fallback[static_cast<std::size_t>(fi)]
                               ? 0.0
                               : 1.0 / d_beta[static_cast<std::size_t>(fi)];
        for (index_t k = M2.row_starts[static_cast<std::size_t>(fi)];
             k < M2.row_starts[static_cast<std::size_t>(fi) + 1]; ++k)
            M2.values[static_cast<std::size_t>(k)] *= inv;
    }

    SparseMatrix W = matmul(M1, M2);
    for (double& v : W.values) v = -v;

    std::vector<std::tuple<index_t, index_t, double>> trip;
    std::vector<char> strong_mark2(static_cast<std::size_t>(n), 0);
    for (index_t i = 0; i < n; ++i) {
        if (split.is_coarse[static_cast<std::size_t>(i)]) {
            trip.emplace_back(i, split.coarse_index[static_cast<std::size_t>(i)], 1.0);
            continue;
        }
        const index_t fi = f_local[static_cast<std::size_t>(i)];
        if (is_fallback[static_cast<std::size_t>(fi)]) {
            for (auto [j, wij] : direct_row_weights(A, S, split, i, strong_mark2))
                trip.emplace_back(i, split.coarse_index[static_cast<std::size_t>(j)], wij);
            continue;
        }
        for (index_t k = W.row_starts[static_cast<std::size_t>(fi)];
             k < W.row_starts[static_cast<std::size_t>(fi) + 1]; ++k)
            trip.emplace_back(i, W.col_indices[static_cast<std::size_t>(k)],
                              W.values[static_cast<std::size_t>(k)]);
    }
    if (fallback_rows) *fallback_rows = fallbacks;
    return SparseMatrix::from_triplets(n, nc, std::move(trip));
}

Hierarchy setup(const SparseMatrix& A, const AmgParams& params) {
    if (A.nrows != A.ncols) fail_invalid("setup: matrix must be square");
    if (!(params.theta > 0.0 && params.theta <= 1.0))
        fail_invalid("setup: theta must lie in (0, 1]");
    if (params.coarse_size < 1) fail_invalid("setup: coarse_size must be >= 1");
    if (params.max_levels < 1) fail_invalid("setup: max_levels must be >= 1");
    if (params.cycles_nu < 1) fail_invalid("setup: cycles_nu must be >= 1");

    Hierarchy hier;
    hier.params = params;
    SparseMatrix Acur = A;
    while (true) {
        Level lev;
        lev.A = std::move(Acur);
        hier.levels.push_back(std::move(lev));
        Level& cur = hier.levels.back();
        const index_t k = static_cast<index_t>(hier.levels.size()) - 1;
        if (cur.A.nrows <= params.coarse_size || k + 1 >= params.max_levels) break;

        const SparseMatrix S = strength(cur.A, params.theta);
        CfSplit split = params.coarsening == Coarsening::rs_greedy
                            ? coarsen_rs_greedy(S)
                            : coarsen_pmis(S, params.pmis_seed);
        // Stall guard: stop coarsening when the level shrinks by less than 5%.
        if (static_cast<double>(split.n_coarse) > 0.95 * static_cast<double>(cur.A.nrows))
            break;

        SparseMatrix P = params.interpolation == Interpolation::direct
                             ? interp_direct(cur.A, split, S)
                             : interp_mm_ext(cur.A, split, S, &cur.mm_ext_fallback_rows);
        SparseMatrix R = transpose(P);
        Acur = matmul(R, matmul(cur.A, P));
        cur.P = std::move(P);
        cur.R = std::move(R);
        cur.split = std::move(split);
    }

    hier.coarse_lu = DenseLu(hier.levels.back().A);
    for (index_t k = 0; k + 1 < hier.num_levels(); ++k)
        hier.levels[static_cast<std::size_t>(k)].smoother = build_smoother_state(
            hier.levels[static_cast<std::size_t>(k)].A, params.plan.for_level(k));
    return hier;
}

namespace {

void cycle_level(const Hierarchy& hier, index_t k, const DenseVector& b, DenseVector& x) {
    const Level& lev = hier.levels[static_cast<std::size_t>(k)];
    if (k + 1 == hier.num_levels()) {
        x = hier.coarse_lu.solve(b);
        return;
    }
    smooth(lev.A, lev.smoother, b, x); // pre-smoothing
    const DenseVector r = residual(lev.A, x, b);
    const DenseVector rc = spmv(lev.R, r);
    DenseVector v(static_cast<std::size_t>(lev.P.ncols), 0.0);
    for (index_t i = 0; i < hier.params.cycles_nu; ++i) cycle_level(hier, k + 1, rc, v);
    const DenseVector corr = spmv(lev.P, v);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += corr[i];
    smooth(lev.A, lev.smoother, b, x); // post-smoothing
}

} // namespace

void vcycle(const Hierarchy& hier, const DenseVector& b, DenseVector& x) {
    if (hier.levels.empty()) fail_invalid("vcycle: empty hierarchy");
    if (static_cast<index_t>(b.size()) != hier.levels.front().A.nrows ||
        x.size() != b.size())
        fail_invalid("vcycle: vector length mismatch");
    cycle_level(hier, 0, b, x);
}

FlopsModel flops_model(const std::vector<LevelCost>& levels, index_t coarse_size,
                       index_t fine_nnz) {
    FlopsModel fm;
    for (const auto& lc : levels)
        fm.smoothing += static_cast<std::int64_t>(lc.nnz) * (lc.ilu_smoothed ? 80 : 8);
    fm.coarse_solve = static_cast<std::int64_t>(coarse_size) * coarse_size * coarse_size;
    fm.krylov_spmv = 2 * static_cast<std::int64_t>(fine_nnz);
    return fm;
}

FlopsModel flops_model(const Hierarchy& hier) {
    std::vector<LevelCost> levels;
    for (index_t k = 0; k + 1 < hier.num_levels(); ++k) {
        const Level& lev = hier.levels[static_cast<std::size_t>(k)];
        const SmootherKind kind = hier.params.plan.for_level(k).kind;
        levels.push_back({lev.A.nnz(), kind == SmootherKind::ilu ||
                                           kind == SmootherKind::schur_ilut});
    }
    return flops_model(levels, hier.levels.back().A.nrows,
                       hier.levels.front().A.nnz());
}

} // namespace iluamg
