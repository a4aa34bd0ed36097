#include "iluamg.h"

#include "iluamg/driver.hpp"
#include "iluamg/error.hpp"
#include "iluamg/matrix_market.hpp"
#include "iluamg/problems.hpp"

#include <exception>
#include <string>

struct iluamg_matrix_s {
    iluamg::SparseMatrix A;
    std::string label;
};

struct iluamg_config_s {
    iluamg::SolverConfig cfg;
};

struct iluamg_report_s {
    iluamg::Report rep;
    std::string json_cache;
    std::string text_cache;
    std::vector<std::string> csv_cache; // parallel to rep.tables
};

namespace {

thread_local std::string g_last_error;

int status_of(const iluamg::Error& e) {
    g_last_error = e.what();
    switch (e.kind()) {
    case iluamg::ErrorKind::numeric: return ILUAMG_ERR_NUMERIC;
    case iluamg::ErrorKind::invalid:
    case iluamg::ErrorKind::io: return ILUAMG_ERR_INVALID;
    }
    return ILUAMG_ERR_INVALID;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const iluamg::Error& e) {
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ILUAMG_ERR_INVALID;
    }
}

iluamg_report* wrap_report(iluamg::Report rep) {
    iluamg_report_s boxed{std::move(rep), {}, {}, {}};
    boxed.json_cache = boxed.rep.json();
    boxed.text_cache = boxed.rep.text();
    boxed.csv_cache.reserve(boxed.rep.tables.size());
    for (const auto& t : boxed.rep.tables) boxed.csv_cache.push_back(t.csv());
    return new iluamg_report_s(std::move(boxed));
}

using RunFn = iluamg::Report (*)(const iluamg::SparseMatrix&, const iluamg::SolverConfig&,
                                 const std::string&);

int run_command(const iluamg_matrix* A, const iluamg_config* cfg, iluamg_report** out,
                RunFn fn) {
    return guarded([&] {
        if (!cfg || !out) iluamg::fail_invalid("null argument");
        *out = nullptr;
        iluamg::Report rep;
        if (A) {
            rep = fn(A->A, cfg->cfg, A->label);
        } else {
            const iluamg::SparseMatrix M = iluamg::load_matrix_from(cfg->cfg);
            rep = fn(M, cfg->cfg, cfg->cfg.get("matrix"));
        }
        const int status = rep.status == 0 ? ILUAMG_OK : ILUAMG_NOT_CONVERGED;
        if (status == ILUAMG_NOT_CONVERGED)
            g_last_error = "run completed without meeting its convergence criterion";
        *out = wrap_report(std::move(rep));
        return status;
    });
}

} // namespace

extern "C" {

const char* iluamg_version(void) { return "0.1.0"; }

const char* iluamg_last_error(void) { return g_last_error.c_str(); }

int iluamg_matrix_read(const char* path, iluamg_matrix** out) {
    return guarded([&] {
        if (!path || !out) iluamg::fail_invalid("null argument");
        auto* m = new iluamg_matrix_s{iluamg::mm_read(path), path};
        *out = m;
        return ILUAMG_OK;
    });
}

int iluamg_matrix_generate(const char* spec, iluamg_matrix** out) {
    return guarded([&] {
        if (!spec || !out) iluamg::fail_invalid("null argument");
        auto* m = new iluamg_matrix_s{iluamg::generate_problem(spec), spec};
        *out = m;
        return ILUAMG_OK;
    });
}

int iluamg_matrix_write(const iluamg_matrix* A, const char* path) {
    return guarded([&] {
        if (!A || !path) iluamg::fail_invalid("null argument");
        iluamg::mm_write(A->A, path);
        return ILUAMG_OK;
    });
}

long long iluamg_matrix_rows(const iluamg_matrix* A) { return A ? A->A.nrows : -1; }
long long iluamg_matrix_cols(const iluamg_matrix* A) { return A ? A->A.ncols : -1; }
long long iluamg_matrix_nnz(const iluamg_matrix* A) { return A ? A->A.nnz() : -1; }

void iluamg_matrix_free(iluamg_matrix* A) { delete A; }

int iluamg_config_create(iluamg_config** out) {
    return guarded([&] {
        if (!out) iluamg::fail_invalid("null argument");
        *out = new iluamg_config_s{};
        return ILUAMG_OK;
    });
}

int iluamg_config_load(iluamg_config* cfg, const char* path) {
    return guarded([&] {
        if (!cfg || !path) iluamg::fail_invalid("null argument");
        cfg->cfg.load_file(path);
        return ILUAMG_OK;
    });
}

int iluamg_config_set(iluamg_config* cfg, const char* key, const char* value) {
    return guarded([&] {
        if (!cfg || !key || !value) iluamg::fail_invalid("null argument");
        cfg->cfg.set(key, value);
        return ILUAMG_OK;
    });
}

const char* iluamg_config_get(const iluamg_config* cfg, const char* key) {
    if (!cfg || !key || !cfg->cfg.has(key)) return nullptr;
    return cfg->cfg.get(key).c_str();
}

const char* iluamg_config_reference(void) {
    static const std::string ref = iluamg::SolverConfig::reference();
    return ref.c_str();
}

void iluamg_config_free(iluamg_config* cfg) { delete cfg; }

int iluamg_run_analyze(const iluamg_matrix* A, const iluamg_config* cfg, iluamg_report** out) {
    return run_command(A, cfg, out, &iluamg::run_analyze);
}

int iluamg_run_solve(const iluamg_matrix* A, const iluamg_config* cfg, iluamg_report** out) {
    return run_command(A, cfg, out, &iluamg::run_solve);
}

int iluamg_run_bench_trisolve(const iluamg_matrix* A, const iluamg_config* cfg,
                              iluamg_report** out) {
    return run_command(A, cfg, out, &iluamg::run_bench_trisolve);
}

int iluamg_run_schur_solve(const iluamg_matrix* A, const iluamg_config* cfg,
                           iluamg_report** out) {
    return run_command(A, cfg, out, &iluamg::run_schur_solve);
}

int iluamg_report_status(const iluamg_report* r) { return r ? r->rep.status : ILUAMG_ERR_INVALID; }

int iluamg_report_scalar_count(const iluamg_report* r) {
    return r ? static_cast<int>(r->rep.scalars.size()) : 0;
}

const char* iluamg_report_scalar_key(const iluamg_report* r, int i) {
    if (!r || i < 0 || i >= static_cast<int>(r->rep.scalars.size())) return nullptr;
    return r->rep.scalars[static_cast<std::size_t>(i)].first.c_str();
}

const char* iluamg_report_scalar_value(const iluamg_report* r, int i) {
    if (!r || i < 0 || i >= static_cast<int>(r->rep.scalars.size())) return nullptr;
    return r->rep.scalars[static_cast<std::size_t>(i)].second.c_str();
}

const char* iluamg_report_get(const iluamg_report* r, const char* key) {
    if (!r || !key) return nullptr;
    const std::string* v = r->rep.find(key);
    return v ? v->c_str() : nullptr;
}

int iluamg_report_table_count(const iluamg_report* r) {
    return r ? static_cast<int>(r->rep.tables.size()) : 0;
}

const char* iluamg_report_table_name(const iluamg_report* r, int i) {
    if (!r || i < 0 || i >= static_cast<int>(r->rep.tables.size())) return nullptr;
    return r->rep.tables[static_cast<std::size_t>(i)].name.c_str();
}

const char* iluamg_report_table_csv(const iluamg_report* r, const char* name) {
    if (!r || !name) return nullptr;
    for (std::size_t i = 0; i < r->rep.tables.size(); ++i)
        if (r->rep.tables[i].name == name) return r->csv_cache[i].c_str();
    return nullptr;
}

const char* iluamg_report_json(const iluamg_report* r) {
    return r ? r->json_cache.c_str() : nullptr;
}

const char* iluamg_report_text(const iluamg_report* r) {
    return r ? r->text_cache.c_str() : nullptr;
}

void iluamg_report_free(iluamg_report* r) { delete r; }

} // extern "C"
