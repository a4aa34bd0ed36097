#include "iluamg/driver.hpp"
#include "iluamg/error.hpp"
#include "iluamg/ilu.hpp"
#include "iluamg/rng.hpp"
#include "iluamg/trisolve.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace iluamg {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

} // namespace

std::string format_num(double v) { return fmt("%.16e", v); }

std::string ReportTable::csv() const {
    std::ostringstream out;
    for (std::size_t c = 0; c < columns.size(); ++c)
        out << columns[c] << (c + 1 < columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << row[c] << (c + 1 < row.size() ? "," : "");
        out << "\n";
    }
    return out.str();
}

void Report::add(const std::string& key, const std::string& value) {
    scalars.emplace_back(key, value);
}
void Report::add(const std::string& key, double value) { add(key, format_num(value)); }
void Report::add(const std::string& key, index_t value) { add(key, std::to_string(value)); }
void Report::add(const std::string& key, bool value) {
    add(key, std::string(value ? "true" : "false"));
}

const std::string* Report::find(const std::string& key) const {
    for (const auto& [k, v] : scalars)
        if (k == key) return &v;
    return nullptr;
}

const ReportTable* Report::table(const std::string& name) const {
    for (const auto& t : tables)
        if (t.name == name) return &t;
    return nullptr;
}

std::string Report::text() const {
    std::ostringstream out;
    for (const auto& [k, v] : scalars) out << k << " = " << v << "\n";
    return out.str();
}

std::string Report::json() const {
    // Scalars only; numbers stay strings to keep emission trivial and exact.
    std::ostringstream out;
    out << "{";
    bool first = true;
    auto escape = [](const std::string& s) {
        std::string r;
        for (char c : s) {
            if (c == '"' || c == '\\') r += '\\';
            r += c;
        }
        return r;
    };
    for (const auto& [k, v] : scalars) {
        if (!first) out << ",";
        first = false;
        out << "\"" << escape(k) << "\":\"" << escape(v) << "\"";
    }
    out << "}";
    return out.str();
}

Report run_analyze(const SparseMatrix& A, const SolverConfig& cfg,
                   const std::string& matrix_label) {
    const auto t0 = std::chrono::steady_clock::now();
    const IluParams params = ilu_params_from(cfg);

    const IluFactors f = ilu_factorize(A, params);
    const double factor_seconds = seconds_since(t0);

    const double dep_l = departure_from_normality(f.L, TriShape::StrictLower);
    const double dep_u = departure_from_normality(f.U, TriShape::Upper);
    const IluFactors f_row = row_scale(f);
    const double dep_u_row = departure_from_normality(f_row.U, TriShape::Upper);
    const IluFactors f_rowcol = row_col_scale(f);
    const double dep_u_rowcol = departure_from_normality(f_rowcol.U, TriShape::Upper);

    const ScalingKind diag_target = scaling_from(cfg);
    const IluFactors& diag_f = diag_target == ScalingKind::none
                                   ? f
                                   : (diag_target == ScalingKind::row ? f_row : f_rowcol);
    const double cond_l = condition_estimate(f.L, TriShape::UnitLower);
    const double cond_u = condition_estimate(diag_f.U, TriShape::Upper);
    const StripingReport striping = striping_report(diag_f, cfg.get_double("striping.threshold"));

    const char* variant = params.variant == IluVariant::ilu0 ? "ilu0" : "ilut";
    Report rep;
    rep.add("matrix", matrix_label);
    rep.add("n", A.nrows);
    rep.add("nnz", A.nnz());
    rep.add("variant", std::string(variant));
    rep.add("droptol", params.droptol);
    rep.add("lfill", params.lfill);
    rep.add("nnz_L", f.nnz_L);
    rep.add("nnz_U", f.nnz_U);
    rep.add("dep_L", dep_l);
    rep.add("dep_U", dep_u);
    rep.add("dep_U_row", dep_u_row);
    rep.add("dep_U_rowcol", dep_u_rowcol);
    rep.add("cond_L", cond_l);
    rep.add("cond_U", cond_u);
    rep.add("cond_scaling", std::string(diag_target == ScalingKind::none
                                            ? "none"
                                            : (diag_target == ScalingKind::row ? "row"
                                                                               : "row_col")));
    rep.add("striping_threshold", striping.threshold);
    rep.add("striping_flagged", static_cast<index_t>(striping.flagged.size()));
    rep.add("factor_seconds", factor_seconds);

    ReportTable machine;
    machine.name = "analyze";
    machine.columns = {"matrix", "variant", "droptol", "lfill",   "nnzL",    "nnzU",
                       "depL",   "depU",    "depUrow", "depUrowcol", "cond_est"};
    machine.rows.push_back({matrix_label, variant, format_num(params.droptol),
                            std::to_string(params.lfill), std::to_string(f.nnz_L),
                            std::to_string(f.nnz_U), format_num(dep_l), format_num(dep_u),
                            format_num(dep_u_row), format_num(dep_u_rowcol),
                            format_num(cond_u)});
    rep.tables.push_back(std::move(machine));

    if (!striping.flagged.empty()) {
        ReportTable flags;
        flags.name = "striping";
        flags.columns = {"col", "max_abs", "median_abs", "ratio"};
        for (const auto& c : striping.columns) {
            if (c.ratio <= striping.threshold) continue;
            flags.rows.push_back({std::to_string(c.col), format_num(c.max_abs),
                                  format_num(c.median_abs), format_num(c.ratio)});
            if (flags.rows.size() >= 200) break; // keep reports bounded
        }
        rep.tables.push_back(std::move(flags));
    }
    return rep;
}

namespace {

struct SolveOutcome {
    DenseVector x;
    SolveReport krylov;
    Hierarchy hier;
    double setup_seconds = 0.0;
    double solve_seconds = 0.0;
};

SolveOutcome solve_with(const SparseMatrix& A, const AmgParams& amg_params,
                        const KrylovParams& krylov_params, const DenseVector& b) {
    SolveOutcome out;
    const auto t0 = std::chrono::steady_clock::now();
    out.hier = setup(A, amg_params);
    out.setup_seconds = seconds_since(t0);

    LinearOperator precond = [&hier = out.hier](const DenseVector& r, DenseVector& z) {
        z.assign(r.size(), 0.0);
        vcycle(hier, r, z);
    };
    const DenseVector x0(b.size(), 0.0);
    const auto t1 = std::chrono::steady_clock::now();
    auto [x, rep] = krylov_solve(A, b, x0, precond, krylov_params);
    out.solve_seconds = seconds_since(t1);
    out.x = std::move(x);
    out.krylov = std::move(rep);
    return out;
}

void append_solve_scalars(Report& rep, const SolveOutcome& oc, const KrylovParams& kp) {
    rep.add("method", std::string(kp.method == KrylovMethod::gmres ? "gmres" : "fgmres"));
    rep.add("criterion",
            std::string(kp.criterion == StopCriterion::relres ? "relres" : "nrbe"));
    rep.add("tol", kp.tol);
    rep.add("iterations", oc.krylov.iterations);
    rep.add("converged", oc.krylov.converged);
    rep.add("false_convergence", oc.krylov.false_convergence);
    rep.add("final_relres", oc.krylov.final_relres);
    rep.add("final_nrbe", oc.krylov.final_nrbe);
    rep.add("anorm_estimate", oc.krylov.anorm_estimate);
    rep.add("levels", oc.hier.num_levels());
    rep.add("operator_complexity", oc.hier.operator_complexity());
    const FlopsModel fm = flops_model(oc.hier);
    rep.add("flops_smoothing", static_cast<index_t>(fm.smoothing));
    rep.add("flops_coarse_solve", static_cast<index_t>(fm.coarse_solve));
    rep.add("flops_krylov_spmv", static_cast<index_t>(fm.krylov_spmv));
    rep.add("setup_seconds", oc.setup_seconds);
    rep.add("solve_seconds", oc.solve_seconds);
}

void append_history_table(Report& rep, const SolveOutcome& oc) {
    const double bden = oc.krylov.bnorm > 0.0 ? oc.krylov.bnorm : 1.0;
    ReportTable hist;
    hist.name = "history";
    hist.columns = {"iter", "arnoldi_rel", "true_rel", "nrbe"};
    for (const auto& e : oc.krylov.history)
        hist.rows.push_back({std::to_string(e.iter), format_num(e.arnoldi_resnorm / bden),
                             format_num(e.true_resnorm / bden), format_num(e.nrbe)});
    rep.tables.push_back(std::move(hist));

    ReportTable levels;
    levels.name = "hierarchy";
    levels.columns = {"level", "n", "nnz"};
    for (index_t k = 0; k < oc.hier.num_levels(); ++k)
        levels.rows.push_back(
            {std::to_string(k),
             std::to_string(oc.hier.levels[static_cast<std::size_t>(k)].A.nrows),
             std::to_string(oc.hier.levels[static_cast<std::size_t>(k)].A.nnz())});
    rep.tables.push_back(std::move(levels));
}

} // namespace

Report run_solve(const SparseMatrix& A, const SolverConfig& cfg,
                 const std::string& matrix_label) {
    const AmgParams amg_params = amg_params_from(cfg);
    const KrylovParams krylov_params = krylov_params_from(cfg);
    const DenseVector b = make_rhs(cfg, A);

    const SolveOutcome oc = solve_with(A, amg_params, krylov_params, b);

    Report rep;
    rep.status = oc.krylov.converged ? 0 : 1;
    rep.add("matrix", matrix_label);
    rep.add("n", A.nrows);
    rep.add("nnz", A.nnz());
    append_solve_scalars(rep, oc, krylov_params);
    if (cfg.get("rhs") == "ones-times-A") {
        double err = 0.0;
        for (double v : oc.x) err = std::max(err, std::abs(v - 1.0));
        rep.add("ones_solution_inf_err", err);
    }
    append_history_table(rep, oc);
    return rep;
}

Report run_bench_trisolve(const SparseMatrix& A, const SolverConfig& cfg,
                          const std::string& matrix_label) {
    const IluParams params = ilu_params_from(cfg);
    ScalingKind scaling = scaling_from(cfg);
    if (scaling == ScalingKind::none) scaling = ScalingKind::row; // U iteration needs scaling
    const index_t m_max = cfg.get_index("bench.m_max");
    const auto seed = static_cast<std::uint64_t>(cfg.get_index("bench.seed"));
    const index_t probes = cfg.get_index("bench.probes");
    if (m_max < 1) fail_invalid("bench-trisolve: bench.m_max must be >= 1");

    const IluFactors f = apply_scaling(ilu_factorize(A, params), scaling);
    const DenseVector b = random_uniform(A.nrows, seed);
    const DenseVector yl = solve_lower_direct(f.L, b);
    const DenseVector yu = solve_upper_scaled_direct(f, b);
    const double nl = two_norm(yl), nu = two_norm(yu);

    auto strict_upper = [&] {
        auto [l, d, u] = split_triangular(f.U);
        (void)l;
        (void)d;
        return std::move(u);
    }();

    ReportTable bench;
    bench.name = "bench";
    bench.columns = {"factor", "m", "err_direct_rel", "tail_norm_estimate"};
    auto rel_err = [](const DenseVector& a, const DenseVector& ref, double refn) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - ref[i];
            s += d * d;
        }
        return refn > 0.0 ? std::sqrt(s) / refn : std::sqrt(s);
    };
    for (index_t m = 1; m <= m_max; ++m) {
        const DenseVector zl = richardson_lower(f.L, b, m);
        bench.rows.push_back({"L", std::to_string(m), format_num(rel_err(zl, yl, nl)),
                              format_num(neumann_tail_norm(f.L, m, probes, seed))});
    }
    for (index_t m = 1; m <= m_max; ++m) {
        const DenseVector zu = richardson_upper_scaled(f, b, m);
        bench.rows.push_back({"U", std::to_string(m), format_num(rel_err(zu, yu, nu)),
                              format_num(neumann_tail_norm(strict_upper, m, probes, seed))});
    }

    Report rep;
    rep.add("matrix", matrix_label);
    rep.add("n", A.nrows);
    rep.add("variant",
            std::string(params.variant == IluVariant::ilu0 ? "ilu0" : "ilut"));
    rep.add("scaling", std::string(scaling == ScalingKind::row ? "row" : "row_col"));
    rep.add("m_max", m_max);
    rep.tables.push_back(std::move(bench));
    return rep;
}

Report run_schur_solve(const SparseMatrix& A, const SolverConfig& cfg,
                       const std::string& matrix_label) {
    std::vector<index_t> blocks;
    {
        std::string list = cfg.get("schur.blocks_list");
        for (char& c : list)
            if (c == ',') c = ' ';
        std::istringstream in(list);
        index_t p = 0;
        while (in >> p) blocks.push_back(p);
        if (blocks.empty()) fail_invalid("schur-solve: schur.blocks_list is empty");
    }

    // The Schur smoother's single inner GMRES iteration makes the
    // preconditioner nonstationary, so the outer solver is flexible GMRES;
    // standard GMRES would trip the false-convergence detector here.
    KrylovParams krylov_params = krylov_params_from(cfg);
    krylov_params.method = KrylovMethod::fgmres;
    const DenseVector b = make_rhs(cfg, A);

    Report rep;
    rep.add("matrix", matrix_label);
    rep.add("n", A.nrows);
    rep.add("nnz", A.nnz());
    rep.add("method", std::string("fgmres"));
    ReportTable tab;
    tab.name = "schur";
    tab.columns = {"p", "interface_size", "iterations", "converged", "final_relres",
                   "final_nrbe"};

    index_t iter_min = -1, iter_max = -1;
    for (index_t p : blocks) {
        AmgParams amg_params = amg_params_from(cfg);
        amg_params.plan.finest = schur_smoother_from(cfg);
        amg_params.plan.finest.schur_blocks = p;
        amg_params.plan.finest_levels = 1;

        const SolveOutcome oc = solve_with(A, amg_params, krylov_params, b);
        const auto* schur_state =
            oc.hier.levels.front().smoother.schur.get();
        const index_t iface =
            schur_state ? static_cast<index_t>(schur_state->interface_idx.size()) : 0;

        tab.rows.push_back({std::to_string(p), std::to_string(iface),
                            std::to_string(oc.krylov.iterations),
                            oc.krylov.converged ? "true" : "false",
                            format_num(oc.krylov.final_relres),
                            format_num(oc.krylov.final_nrbe)});
        if (!oc.krylov.converged) rep.status = 1;
        if (iter_min < 0 || oc.krylov.iterations < iter_min) iter_min = oc.krylov.iterations;
        if (iter_max < 0 || oc.krylov.iterations > iter_max) iter_max = oc.krylov.iterations;
    }
    rep.add("iterations_min", iter_min);
    rep.add("iterations_max", iter_max);
    rep.add("iterations_spread", iter_max - iter_min);
    rep.tables.push_back(std::move(tab));
    return rep;
}

} // namespace iluamg
