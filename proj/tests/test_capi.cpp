// Exercises the shared library strictly through the C header.

#include <iluamg.h>

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

namespace {

struct Matrix {
    iluamg_matrix* m = nullptr;
    ~Matrix() { iluamg_matrix_free(m); }
};

struct Config {
    iluamg_config* c = nullptr;
    Config() { REQUIRE(iluamg_config_create(&c) == ILUAMG_OK); }
    ~Config() { iluamg_config_free(c); }
};

struct Rep {
    iluamg_report* r = nullptr;
    ~Rep() { iluamg_report_free(r); }
};

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/iluamg_capi_") + name;
}

} // namespace

TEST_SUITE_BEGIN("capi");

TEST_CASE("version and config reference") {
    CHECK(std::string(iluamg_version()) == "0.1.0");
    const std::string ref = iluamg_config_reference();
    CHECK(ref.find("amg.theta") != std::string::npos);
    CHECK(ref.find("schur.trisolve.mU") != std::string::npos);
}

TEST_CASE("matrix generate, write, and read back") {
    Matrix gen;
    REQUIRE(iluamg_matrix_generate("poisson2d(4,4)", &gen.m) == ILUAMG_OK);
    CHECK(iluamg_matrix_rows(gen.m) == 16);
    CHECK(iluamg_matrix_cols(gen.m) == 16);
    CHECK(iluamg_matrix_nnz(gen.m) == 64);

    const std::string path = tmp_path("roundtrip.mtx");
    REQUIRE(iluamg_matrix_write(gen.m, path.c_str()) == ILUAMG_OK);
    Matrix back;
    REQUIRE(iluamg_matrix_read(path.c_str(), &back.m) == ILUAMG_OK);
    CHECK(iluamg_matrix_nnz(back.m) == 64);
    std::remove(path.c_str());
}

TEST_CASE("errors carry status codes and messages") {
    Matrix m;
    CHECK(iluamg_matrix_read("/nonexistent/file.mtx", &m.m) == ILUAMG_ERR_INVALID);
    CHECK(std::string(iluamg_last_error()).find("cannot open") != std::string::npos);
    CHECK(iluamg_matrix_generate("warp(3)", &m.m) == ILUAMG_ERR_INVALID);

    Config cfg;
    CHECK(iluamg_config_set(cfg.c, "no.such.key", "1") == ILUAMG_ERR_INVALID);
    CHECK(iluamg_config_get(cfg.c, "no.such.key") == nullptr);
    CHECK(std::string(iluamg_config_get(cfg.c, "amg.theta")) == "0.25");
}

TEST_CASE("analyze produces the diagnostic scalars and machine row") {
    Matrix m;
    REQUIRE(iluamg_matrix_generate("poisson2d(12,12)", &m.m) == ILUAMG_OK);
    Config cfg;
    Rep rep;
    REQUIRE(iluamg_run_analyze(m.m, cfg.c, &rep.r) == ILUAMG_OK);
    CHECK(iluamg_report_status(rep.r) == 0);
    for (const char* key : {"dep_L", "dep_U", "dep_U_row", "dep_U_rowcol", "cond_U",
                            "nnz_L", "nnz_U", "striping_flagged"})
        CHECK(iluamg_report_get(rep.r, key) != nullptr);
    const char* csv = iluamg_report_table_csv(rep.r, "analyze");
    REQUIRE(csv != nullptr);
    CHECK(std::string(csv).find(
              "matrix,variant,droptol,lfill,nnzL,nnzU,depL,depU,depUrow,depUrowcol,"
              "cond_est") == 0);
    CHECK(iluamg_report_scalar_count(rep.r) > 5);
    CHECK(iluamg_report_scalar_key(rep.r, 0) != nullptr);
    CHECK(iluamg_report_table_count(rep.r) >= 1);
    CHECK(std::string(iluamg_report_table_name(rep.r, 0)) == "analyze");
}

TEST_CASE("solve converges and emits byte-identical history across runs") {
    Config cfg;
    REQUIRE(iluamg_config_set(cfg.c, "matrix", "poisson2d(16,16)") == ILUAMG_OK);
    REQUIRE(iluamg_config_set(cfg.c, "krylov.tol", "1e-8") == ILUAMG_OK);

    Rep r1, r2;
    REQUIRE(iluamg_run_solve(nullptr, cfg.c, &r1.r) == ILUAMG_OK);
    REQUIRE(iluamg_run_solve(nullptr, cfg.c, &r2.r) == ILUAMG_OK);
    CHECK(std::string(iluamg_report_get(r1.r, "converged")) == "true");
    CHECK(std::string(iluamg_report_get(r1.r, "false_convergence")) == "false");

    const char* h1 = iluamg_report_table_csv(r1.r, "history");
    const char* h2 = iluamg_report_table_csv(r2.r, "history");
    REQUIRE(h1 != nullptr);
    REQUIRE(h2 != nullptr);
    CHECK(std::string(h1) == std::string(h2));
    CHECK(std::string(h1).find("iter,arnoldi_rel,true_rel,nrbe") == 0);
    CHECK(iluamg_report_table_csv(r1.r, "hierarchy") != nullptr);
    CHECK(iluamg_report_get(r1.r, "flops_smoothing") != nullptr);
    // known solution: rhs defaults to A * ones
    const char* err = iluamg_report_get(r1.r, "ones_solution_inf_err");
    REQUIRE(err != nullptr);
    CHECK(std::stod(err) < 1e-6);
}

TEST_CASE("non-convergence yields status 1 with the report intact") {
    Config cfg;
    REQUIRE(iluamg_config_set(cfg.c, "matrix", "poisson2d(16,16)") == ILUAMG_OK);
    REQUIRE(iluamg_config_set(cfg.c, "krylov.max_iters", "2") == ILUAMG_OK);
    REQUIRE(iluamg_config_set(cfg.c, "krylov.tol", "1e-14") == ILUAMG_OK);
    Rep rep;
    CHECK(iluamg_run_solve(nullptr, cfg.c, &rep.r) == ILUAMG_NOT_CONVERGED);
    REQUIRE(rep.r != nullptr);
    CHECK(iluamg_report_status(rep.r) == 1);
    CHECK(std::string(iluamg_report_get(rep.r, "converged")) == "false");
}

TEST_CASE("a zero pivot surfaces as a numeric error") {
    const std::string path = tmp_path("pivot.mtx");
    {
        std::ofstream out(path);
        out << "%%MatrixMarket matrix coordinate real general\n"
            << "2 2 4\n1 1 1.0\n1 2 1.0\n2 1 1.0\n2 2 1.0\n";
    }
    Matrix m;
    REQUIRE(iluamg_matrix_read(path.c_str(), &m.m) == ILUAMG_OK);
    Config cfg;
    Rep rep;
    CHECK(iluamg_run_analyze(m.m, cfg.c, &rep.r) == ILUAMG_ERR_NUMERIC);
    CHECK(std::string(iluamg_last_error()).find("pivot") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("bench-trisolve and schur-solve tables") {
    Config cfg;
    REQUIRE(iluamg_config_set(cfg.c, "matrix", "poisson2d(10,10)") == ILUAMG_OK);
    REQUIRE(iluamg_config_set(cfg.c, "bench.m_max", "6") == ILUAMG_OK);
    Rep bench;
    REQUIRE(iluamg_run_bench_trisolve(nullptr, cfg.c, &bench.r) == ILUAMG_OK);
    const char* csv = iluamg_report_table_csv(bench.r, "bench");
    REQUIRE(csv != nullptr);
    CHECK(std::string(csv).find("factor,m,err_direct_rel,tail_norm_estimate") == 0);

    REQUIRE(iluamg_config_set(cfg.c, "schur.blocks_list", "1,2") == ILUAMG_OK);
    REQUIRE(iluamg_config_set(cfg.c, "krylov.tol", "1e-7") == ILUAMG_OK);
    Rep schur;
    REQUIRE(iluamg_run_schur_solve(nullptr, cfg.c, &schur.r) == ILUAMG_OK);
    const char* scsv = iluamg_report_table_csv(schur.r, "schur");
    REQUIRE(scsv != nullptr);
    CHECK(std::string(scsv).find("p,interface_size,iterations,converged") == 0);
    CHECK(iluamg_report_get(schur.r, "iterations_spread") != nullptr);
}

TEST_SUITE_END();
