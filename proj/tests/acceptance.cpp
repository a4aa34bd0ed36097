// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// here. Exits nonzero iff any criterion fails. Criterion 1 needs the
// SuiteSparse matrices fetched by tools/fetch_suitesparse.sh and is skipped
// with a message when they are absent.

#include "iluamg/amg.hpp"
#include "iluamg/dense.hpp"
#include "iluamg/ilu.hpp"
#include "iluamg/krylov.hpp"
#include "iluamg/matrix_market.hpp"
#include "iluamg/problems.hpp"
#include "iluamg/rng.hpp"
#include "iluamg/schur.hpp"
#include "iluamg/smoother.hpp"
#include "iluamg/trisolve.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace iluamg;

namespace {

int g_failures = 0;

struct Outcome {
    enum Kind { pass, fail, skip } kind = pass;
    std::string detail;
};

void report(const std::string& id, const std::string& summary,
            const std::function<Outcome()>& body) {
    Outcome oc;
    try {
        oc = body();
    } catch (const std::exception& e) {
        oc.kind = Outcome::fail;
        oc.detail = std::string("exception: ") + e.what();
    }
    const char* tag = oc.kind == Outcome::pass ? "PASS" : (oc.kind == Outcome::fail ? "FAIL" : "SKIP");
    if (oc.kind == Outcome::fail) ++g_failures;
    std::cout << tag << "  " << id << "  " << summary;
    if (!oc.detail.empty()) std::cout << " -- " << oc.detail;
    std::cout << "\n" << std::flush;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

bool within_rel(double got, double want, double tol) {
    return std::abs(got - want) <= tol * std::abs(want);
}

// ---- shared solver harness ----------------------------------------------

std::vector<SolveReport> g_collected; // inspected by criterion 7

SmootherConfig gs_smoother() {
    SmootherConfig s;
    s.kind = SmootherKind::gauss_seidel;
    s.sweeps = 2;
    return s;
}

AmgParams amg_with(const SmootherConfig& finest, const SmootherConfig& fallback) {
    AmgParams p;
    p.theta = 0.25;
    p.coarse_size = 16;
    p.plan.finest = finest;
    p.plan.finest_levels = 1;
    p.plan.fallback = fallback;
    return p;
}

SolveReport run_gmres_amg(const SparseMatrix& A, const AmgParams& params, double tol,
                          KrylovMethod method = KrylovMethod::gmres) {
    const Hierarchy hier = setup(A, params);
    LinearOperator precond = [&hier](const DenseVector& r, DenseVector& z) {
        z.assign(r.size(), 0.0);
        vcycle(hier, r, z);
    };
    const DenseVector ones(static_cast<std::size_t>(A.ncols), 1.0);
    const DenseVector b = spmv(A, ones);
    KrylovParams kp;
    kp.tol = tol;
    kp.max_iters = 100;
    kp.method = method;
    auto [x, rep] = krylov_solve(A, b, DenseVector(b.size(), 0.0), precond, kp);
    g_collected.push_back(rep);
    return rep;
}

// ---- criterion 1 ---------------------------------------------------------

Outcome criterion1() {
    const char* env = std::getenv("ILUAMG_DATA_DIR");
    const std::string dir = env ? env : "data";
    struct Ref {
        const char* file;
        double dep_l, dep_u, dep_u_row;
    };
    const Ref refs[] = {
        {"af_0_0_k101.mtx", 326.95, 1.84e8, 326.95},
        {"offshore.mtx", 231.86, 7.05e15, 231.86},
    };
    std::string detail;
    for (const Ref& ref : refs) {
        const std::string path = dir + "/" + ref.file;
        if (!std::ifstream(path)) {
            return {Outcome::skip, "matrix " + path +
                                       " not present; run tools/fetch_suitesparse.sh"};
        }
        const SparseMatrix A = mm_read(path);
        const IluFactors f = ilu0(A);
        const double dep_l = departure_from_normality(f.L, TriShape::StrictLower);
        const double dep_u = departure_from_normality(f.U, TriShape::Upper);
        const IluFactors frow = row_scale(f);
        const double dep_u_row = departure_from_normality(frow.U, TriShape::Upper);
        const IluFactors frc = row_col_scale(f);
        const double dep_u_rc = departure_from_normality(frc.U, TriShape::Upper);

        if (!within_rel(dep_l, ref.dep_l, 0.01) || !within_rel(dep_u, ref.dep_u, 0.01) ||
            !within_rel(dep_u_row, ref.dep_u_row, 0.01)) {
            return {Outcome::fail,
                    std::string(ref.file) + ": dep(L)=" + fmt(dep_l) + " want " +
                        fmt(ref.dep_l) + ", dep(U)=" + fmt(dep_u) + " want " +
                        fmt(ref.dep_u) + ", dep(D^-1 U)=" + fmt(dep_u_row) + " want " +
                        fmt(ref.dep_u_row)};
        }
        // Row/col checked qualitatively only (the printed convention is
        // unstated); both reference rows show a reduction vs row scaling.
        if (dep_u_rc > dep_u_row * 1.05)
            return {Outcome::fail, std::string(ref.file) + ": dep(Dr U Dc)=" + fmt(dep_u_rc) +
                                       " exceeds dep(D^-1 U)=" + fmt(dep_u_row)};
        detail += std::string(ref.file) + " dep(L)=" + fmt(dep_l) + " dep(U)=" + fmt(dep_u) +
                  " dep(D^-1U)=" + fmt(dep_u_row) + "; ";
    }
    return {Outcome::pass, detail};
}

// ---- criterion 2 ---------------------------------------------------------

Outcome criterion2() {
    std::string detail;
    for (index_t n : {32, 64}) {
        const SparseMatrix A = poisson2d(n, n);

        const SolveReport gs = run_gmres_amg(A, amg_with(gs_smoother(), gs_smoother()), 1e-8);

        SmootherConfig ilu;
        ilu.kind = SmootherKind::ilu;
        ilu.sweeps = 2;
        ilu.ilu_params.variant = IluVariant::ilu0;
        ilu.scaling = ScalingKind::row;
        ilu.trisolve.mode = TriSolveMode::richardson;
        ilu.trisolve.m_lower = 10;
        ilu.trisolve.m_upper = 10;
        const SolveReport it = run_gmres_amg(A, amg_with(ilu, gs_smoother()), 1e-8);

        if (!gs.converged || !it.converged)
            return {Outcome::fail, "a run failed to converge on poisson2d(" +
                                       std::to_string(n) + ")"};
        if (it.iterations > gs.iterations + 1)
            return {Outcome::fail, "poisson2d(" + std::to_string(n) + "): ILU(0)-iterative " +
                                       std::to_string(it.iterations) + " iters vs GS " +
                                       std::to_string(gs.iterations)};
        detail += "poisson2d(" + std::to_string(n) + "): ilu " +
                  std::to_string(it.iterations) + " <= gs " + std::to_string(gs.iterations) +
                  " + 1; ";
    }
    return {Outcome::pass, detail};
}

// ---- criterion 3 ---------------------------------------------------------

DenseVector neumann_partial_sum(const SparseMatrix& T, const DenseVector& b, index_t m) {
    DenseVector acc = b, term = b, t;
    for (index_t i = 1; i < m; ++i) {
        spmv_into(T, term, t);
        for (std::size_t j = 0; j < term.size(); ++j) term[j] = -t[j];
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += term[j];
    }
    return acc;
}

SparseMatrix random_strict(index_t n, bool upper, double per_row, double scale,
                           std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::tuple<index_t, index_t, double>> trip;
    for (index_t i = 0; i < n; ++i) {
        const index_t lo = upper ? i + 1 : 0;
        const index_t hi = upper ? n : i;
        if (hi <= lo) continue;
        const double p = std::min(1.0, per_row / static_cast<double>(hi - lo));
        for (index_t j = lo; j < hi; ++j)
            if (coin(gen) < p) trip.emplace_back(i, j, scale * val(gen));
    }
    return SparseMatrix::from_triplets(n, n, std::move(trip));
}

index_t nilpotency_index(const SparseMatrix& T, bool upper) {
    const index_t n = T.nrows;
    std::vector<index_t> depth(static_cast<std::size_t>(n), 1);
    auto relax = [&](index_t i) {
        for (index_t k = T.row_starts[static_cast<std::size_t>(i)];
             k < T.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
            depth[static_cast<std::size_t>(i)] =
                std::max(depth[static_cast<std::size_t>(i)],
                         depth[static_cast<std::size_t>(
                             T.col_indices[static_cast<std::size_t>(k)])] +
                             1);
    };
    if (upper)
        for (index_t i = n; i-- > 0;) relax(i);
    else
        for (index_t i = 0; i < n; ++i) relax(i);
    index_t best = 1;
    for (index_t v : depth) best = std::max(best, v);
    return best;
}

double rel_err(const DenseVector& a, const DenseVector& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

Outcome criterion3() {
    index_t max_index_seen = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const index_t n = 20 + static_cast<index_t>((seed * 37) % 181); // <= 200
        const bool upper = seed % 2 == 0;
        const double scale = seed % 3 == 0 ? 1.0 : 0.35;
        const SparseMatrix T = random_strict(n, upper, 2.5, scale, seed);
        const DenseVector b = random_uniform(n, seed + 1000);
        const index_t idx = nilpotency_index(T, upper);
        max_index_seen = std::max(max_index_seen, idx);

        IluFactors f; // unit-diagonal factors wrapping T for the upper path
        if (upper) {
            std::vector<std::tuple<index_t, index_t, double>> trip;
            for (index_t i = 0; i < n; ++i) trip.emplace_back(i, i, 1.0);
            for (index_t i = 0; i < n; ++i)
                for (index_t k = T.row_starts[static_cast<std::size_t>(i)];
                     k < T.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
                    trip.emplace_back(i, T.col_indices[static_cast<std::size_t>(k)],
                                      T.values[static_cast<std::size_t>(k)]);
            f.U = SparseMatrix::from_triplets(n, n, std::move(trip));
            f.L = SparseMatrix::from_triplets(n, n, {});
            f.row_scale = DenseVector(static_cast<std::size_t>(n), 1.0);
        }
        auto iterate = [&](index_t m) {
            return upper ? richardson_upper_scaled(f, b, m) : richardson_lower(T, b, m);
        };

        for (index_t k : {index_t{1}, index_t{2}, std::min<index_t>(idx, 6), idx}) {
            if (k < 1) continue;
            const DenseVector rich = iterate(k);
            const DenseVector neum = neumann_partial_sum(T, b, k);
            if (rel_err(rich, neum) >= 1e-13)
                return {Outcome::fail, "seed " + std::to_string(seed) + ": Richardson vs "
                                       "Neumann mismatch at k=" + std::to_string(k)};
        }
        const DenseVector direct =
            upper ? solve_upper_scaled_direct(f, b) : solve_lower_direct(T, b);
        if (rel_err(iterate(idx), direct) >= 1e-10)
            return {Outcome::fail,
                    "seed " + std::to_string(seed) + ": direct-solve mismatch at the "
                    "nilpotency index " + std::to_string(idx)};
    }
    return {Outcome::pass, "100 instances, max nilpotency index " +
                               std::to_string(max_index_seen)};
}

// ---- criterion 4 ---------------------------------------------------------

Outcome criterion4() {
    const FlopsModel ilu_plan = flops_model({{291068, true}}, 5, 291068);
    const FlopsModel poly_plan = flops_model({{291068, false}}, 5, 291068);
    if (ilu_plan.smoothing != 23285440)
        return {Outcome::fail, "ILU plan gave " + std::to_string(ilu_plan.smoothing)};
    if (poly_plan.smoothing != 2328544)
        return {Outcome::fail, "polynomial plan gave " + std::to_string(poly_plan.smoothing)};
    if (ilu_plan.krylov_spmv != 582136)
        return {Outcome::fail, "Krylov SpMV cost gave " + std::to_string(ilu_plan.krylov_spmv)};
    return {Outcome::pass, "23285440 / 2328544 / 582136 exactly"};
}

// ---- criterion 5 ---------------------------------------------------------

double galerkin_mismatch(const Hierarchy& hier) {
    double worst = 0.0;
    for (index_t k = 0; k + 1 < hier.num_levels(); ++k) {
        const Level& lev = hier.levels[static_cast<std::size_t>(k)];
        const SparseMatrix want = matmul(matmul(transpose(lev.P), lev.A), lev.P);
        const SparseMatrix& got = hier.levels[static_cast<std::size_t>(k + 1)].A;
        double scale = 0.0;
        for (double v : got.values) scale = std::max(scale, std::abs(v));
        // walk the union of the two patterns row by row
        for (index_t i = 0; i < got.nrows; ++i) {
            index_t ka = got.row_starts[static_cast<std::size_t>(i)];
            index_t kb = want.row_starts[static_cast<std::size_t>(i)];
            const index_t ea = got.row_starts[static_cast<std::size_t>(i) + 1];
            const index_t eb = want.row_starts[static_cast<std::size_t>(i) + 1];
            while (ka < ea || kb < eb) {
                const index_t ja = ka < ea ? got.col_indices[static_cast<std::size_t>(ka)]
                                           : got.ncols;
                const index_t jb = kb < eb ? want.col_indices[static_cast<std::size_t>(kb)]
                                           : want.ncols;
                double va = 0.0, vb = 0.0;
                if (ja <= jb) va = got.values[static_cast<std::size_t>(ka++)];
                if (jb <= ja) vb = want.values[static_cast<std::size_t>(kb++)];
                worst = std::max(worst, std::abs(va - vb) / scale);
            }
        }
    }
    return worst;
}

Outcome criterion5() {
    // Galerkin identity across representative hierarchies
    std::vector<Hierarchy> hiers;
    hiers.push_back(setup(poisson2d(32, 32), amg_with(gs_smoother(), gs_smoother())));
    {
        AmgParams p = amg_with(gs_smoother(), gs_smoother());
        p.interpolation = Interpolation::mm_ext;
        p.coarsening = Coarsening::pmis;
        hiers.push_back(setup(anisotropic2d(24, 24, 0.1), p));
    }
    for (const Hierarchy& hier : hiers) {
        const double mis = galerkin_mismatch(hier);
        if (mis >= 1e-12)
            return {Outcome::fail, "Galerkin mismatch " + fmt(mis)};
    }

    // V-cycle fixed point
    const SparseMatrix A = poisson2d(32, 32);
    const Hierarchy& hier = hiers.front();
    DenseVector xstar = random_uniform(A.nrows, 77);
    const DenseVector b = spmv(A, xstar);
    DenseVector x = xstar;
    vcycle(hier, b, x);
    if (rel_err(x, xstar) >= 1e-12)
        return {Outcome::fail, "V-cycle moved the exact solution by " + fmt(rel_err(x, xstar))};

    // per-cycle residual reduction factor <= 0.2
    DenseVector y(b.size(), 0.0);
    double prev = two_norm(b);
    double worst_factor = 0.0;
    for (int cycle = 0; cycle < 5; ++cycle) {
        vcycle(hier, b, y);
        const double cur = two_norm(residual(A, y, b));
        worst_factor = std::max(worst_factor, cur / prev);
        prev = cur;
        if (prev == 0.0) break;
    }
    if (worst_factor > 0.2)
        return {Outcome::fail, "residual reduction factor " + fmt(worst_factor) + " > 0.2"};
    return {Outcome::pass, "worst cycle factor " + fmt(worst_factor)};
}

// ---- criterion 6 ---------------------------------------------------------

Outcome criterion6() {
    const SparseMatrix A = poisson2d(24, 24);
    index_t iter_min = -1, iter_max = -1;
    std::string detail = "iterations:";
    for (index_t p : {1, 2, 4, 8}) {
        SmootherConfig schur;
        schur.kind = SmootherKind::schur_ilut;
        schur.sweeps = 2;
        schur.ilu_params.variant = IluVariant::ilut;
        schur.ilu_params.droptol = 1e-3;
        schur.ilu_params.lfill = 5;
        schur.scaling = ScalingKind::row;
        schur.trisolve.mode = TriSolveMode::richardson;
        schur.trisolve.m_lower = 10;
        schur.trisolve.m_upper = 10;
        schur.schur_blocks = p;
        // Flexible GMRES: the one-iteration inner GMRES makes the Schur
        // smoother nonstationary (matches the schur-solve driver).
        const SolveReport rep =
            run_gmres_amg(A, amg_with(schur, gs_smoother()), 1e-8, KrylovMethod::fgmres);
        if (!rep.converged)
            return {Outcome::fail, "p=" + std::to_string(p) + " failed to converge"};
        if (iter_min < 0 || rep.iterations < iter_min) iter_min = rep.iterations;
        if (iter_max < 0 || rep.iterations > iter_max) iter_max = rep.iterations;
        detail += " " + std::to_string(rep.iterations);
    }
    if (iter_max - iter_min > 3)
        return {Outcome::fail, detail + " (spread " + std::to_string(iter_max - iter_min) +
                                   " > 3)"};
    return {Outcome::pass, detail + " (spread " + std::to_string(iter_max - iter_min) + ")"};
}

// ---- criterion 7 ---------------------------------------------------------

Outcome criterion7() {
    if (g_collected.empty()) return {Outcome::fail, "no solver runs were collected"};
    index_t entries = 0;
    for (const SolveReport& rep : g_collected) {
        const double bden = rep.bnorm > 0.0 ? rep.bnorm : 1.0;
        for (const HistoryEntry& e : rep.history) {
            ++entries;
            if (e.nrbe > e.true_resnorm / bden * (1.0 + 1e-12))
                return {Outcome::fail, "NRBE " + fmt(e.nrbe) + " exceeds relres " +
                                           fmt(e.true_resnorm / bden) + " at iter " +
                                           std::to_string(e.iter)};
        }
        if (rep.false_convergence)
            return {Outcome::fail, "false convergence flagged on a well-conditioned run"};
    }
    return {Outcome::pass, std::to_string(g_collected.size()) + " runs, " +
                               std::to_string(entries) + " iterates checked"};
}

// ---- criterion 8 ---------------------------------------------------------

// Small dense helpers, independent of the sparse paths under test.
struct Dense {
    index_t n = 0;
    std::vector<double> a; // row-major

    double& at(index_t i, index_t j) {
        return a[static_cast<std::size_t>(i * n + j)];
    }
    double at(index_t i, index_t j) const {
        return a[static_cast<std::size_t>(i * n + j)];
    }
};

Dense to_dense(const SparseMatrix& A) {
    Dense d;
    d.n = A.nrows;
    d.a.assign(static_cast<std::size_t>(A.nrows * A.ncols), 0.0);
    for (index_t i = 0; i < A.nrows; ++i)
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
            d.at(i, A.col_indices[static_cast<std::size_t>(k)]) =
                A.values[static_cast<std::size_t>(k)];
    return d;
}

// Dense LU without pivoting: L (unit diagonal, in place below) and U above.
void dense_lu_nopivot(Dense& d) {
    for (index_t k = 0; k < d.n; ++k)
        for (index_t i = k + 1; i < d.n; ++i) {
            const double m = d.at(i, k) / d.at(k, k);
            d.at(i, k) = m;
            for (index_t j = k + 1; j < d.n; ++j) d.at(i, j) -= m * d.at(k, j);
        }
}

SparseMatrix dense_spd(index_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> B(static_cast<std::size_t>(n * n));
    for (double& v : B) v = val(gen);
    std::vector<std::tuple<index_t, index_t, double>> trip;
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) {
            double s = i == j ? static_cast<double>(n) : 0.0;
            for (index_t k = 0; k < n; ++k)
                s += B[static_cast<std::size_t>(k * n + i)] *
                     B[static_cast<std::size_t>(k * n + j)];
            trip.emplace_back(i, j, s);
        }
    return SparseMatrix::from_triplets(n, n, std::move(trip));
}

Outcome criterion8() {
    // (a) ILU(0) on a full pattern equals dense no-pivot LU
    {
        const SparseMatrix A = dense_spd(12, 2024);
        Dense d = to_dense(A);
        dense_lu_nopivot(d);
        const IluFactors f = ilu0(A);
        double scale = 0.0;
        for (const double v : d.a) scale = std::max(scale, std::abs(v));
        for (index_t i = 0; i < 12; ++i)
            for (index_t j = 0; j < 12; ++j) {
                const double want = i > j ? d.at(i, j) : 0.0;
                if (std::abs(f.L.at(i, j) - want) > 1e-10 * scale)
                    return {Outcome::fail, "ILU(0) L mismatch vs dense no-pivot LU"};
                const double wantu = i <= j ? d.at(i, j) : 0.0;
                if (std::abs(f.U.at(i, j) - wantu) > 1e-10 * scale)
                    return {Outcome::fail, "ILU(0) U mismatch vs dense no-pivot LU"};
            }
    }
    // (b) ILUT with droptol 0 and full fill likewise
    {
        const SparseMatrix A = dense_spd(15, 4096);
        Dense d = to_dense(A);
        dense_lu_nopivot(d);
        IluParams p;
        p.variant = IluVariant::ilut;
        p.droptol = 0.0;
        p.lfill = 15;
        const IluFactors f = ilut(A, p);
        double scale = 0.0;
        for (const double v : d.a) scale = std::max(scale, std::abs(v));
        for (index_t i = 0; i < 15; ++i)
            for (index_t j = 0; j < 15; ++j) {
                if (i > j && std::abs(f.L.at(i, j) - d.at(i, j)) > 1e-10 * scale)
                    return {Outcome::fail, "ILUT L mismatch vs dense no-pivot LU"};
                if (i <= j && std::abs(f.U.at(i, j) - d.at(i, j)) > 1e-10 * scale)
                    return {Outcome::fail, "ILUT U mismatch vs dense no-pivot LU"};
            }
    }
    // (c) one-iteration interface GMRES equals the closed-form minimizer
    //     y = (gt . S gt / |S gt|^2) gt, with exact block solves.
    {
        const index_t n = 30;
        std::mt19937_64 gen(7);
        std::uniform_real_distribution<double> val(-1.0, 1.0);
        std::vector<std::tuple<index_t, index_t, double>> trip;
        for (index_t i = 0; i < n; ++i) {
            double rowsum = 0.0;
            for (index_t j = 0; j < n; ++j) {
                if (i == j) continue;
                if ((hash_mix(static_cast<std::uint64_t>(i * n + j)) % 100) < 12) {
                    const double v = val(gen);
                    trip.emplace_back(i, j, v);
                    rowsum += std::abs(v);
                }
            }
            trip.emplace_back(i, i, 2.0 * rowsum + 1.0);
        }
        const SparseMatrix A = SparseMatrix::from_triplets(n, n, std::move(trip));
        SchurPartition part = partition(A, 3);
        TriSolveConfig ts;
        ts.mode = TriSolveMode::direct;
        IluParams ip;
        ip.variant = IluVariant::ilut;
        ip.droptol = 0.0;
        ip.lfill = n; // exact block factors
        factorize_blocks(part, ip, ScalingKind::none, ts);

        const DenseVector b = random_uniform(n, 31);
        const DenseVector x0 = random_uniform(n, 32);
        DenseVector x = x0;
        schur_smooth(A, part, b, x);

        // dense closed form through a pivoted dense solve of B
        const DenseVector r = residual(A, x0, b);
        const auto ni = part.interior_idx.size();
        const auto nf = part.interface_idx.size();
        DenseVector f(ni), g(nf);
        for (std::size_t k = 0; k < ni; ++k) f[k] = r[part.interior_idx[k]];
        for (std::size_t k = 0; k < nf; ++k) g[k] = r[part.interface_idx[k]];
        const DenseLu Blu(part.B);
        DenseVector gt = g;
        {
            const DenseVector t = spmv(part.F, Blu.solve(f));
            for (std::size_t k = 0; k < nf; ++k) gt[k] -= t[k];
        }
        auto apply_S = [&](const DenseVector& v) {
            DenseVector out = spmv(part.C, v);
            const DenseVector t = spmv(part.F, Blu.solve(spmv(part.E, v)));
            for (std::size_t k = 0; k < nf; ++k) out[k] -= t[k];
            return out;
        };
        const DenseVector s = apply_S(gt);
        double sg = 0.0, ss = 0.0;
        for (std::size_t k = 0; k < nf; ++k) {
            sg += s[k] * gt[k];
            ss += s[k] * s[k];
        }
        const double alpha = sg / ss;
        DenseVector y_want(nf);
        for (std::size_t k = 0; k < nf; ++k) y_want[k] = alpha * gt[k];
        DenseVector y_got(nf);
        for (std::size_t k = 0; k < nf; ++k)
            y_got[k] = x[part.interface_idx[k]] - x0[part.interface_idx[k]];
        if (rel_err(y_got, y_want) >= 1e-12)
            return {Outcome::fail,
                    "interface GMRES step deviates from the closed form by " +
                        fmt(rel_err(y_got, y_want))};
    }
    return {Outcome::pass, ""};
}

} // namespace

int main() {
    report("C1", "Table-1 departures from normality within 1% (SuiteSparse)", criterion1);
    report("C2", "ILU(0)-iterative smoother beats or matches Gauss-Seidel iterations",
           criterion2);
    report("C3", "Richardson iterates equal Neumann partial sums and the direct solve",
           criterion3);
    report("C4", "flops model returns the reference counts exactly", criterion4);
    report("C5", "Galerkin identity, V-cycle fixed point, residual reduction <= 0.2",
           criterion5);
    report("C6", "Schur smoother iteration count varies by <= 3 across p in {1,2,4,8}",
           criterion6);
    report("C7", "NRBE <= relative residual on every iterate; no false convergence",
           criterion7);
    report("C8", "factorizations and the interface GMRES match their dense oracles",
           criterion8);
    if (g_failures > 0)
        std::cout << g_failures << " criterion(s) failed\n";
    else
        std::cout << "all criteria passed (or skipped for missing data)\n";
    return g_failures;
}
