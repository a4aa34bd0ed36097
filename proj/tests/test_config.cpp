#include "iluamg/config.hpp"
#include "iluamg/driver.hpp"
#include "iluamg/error.hpp"
#include "iluamg/problems.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace iluamg;

TEST_SUITE_BEGIN("config");

TEST_CASE("defaults mirror the documented reference") {
    const SolverConfig cfg;
    CHECK(cfg.get("amg.theta") == "0.25");
    CHECK(cfg.get("smoother.sweeps") == "2");
    CHECK(cfg.get("krylov.tol") == "1e-5");
    CHECK(cfg.get("amg.cycles_nu") == "1");
    CHECK(cfg.get("scaling") == "row");
    const std::string ref = SolverConfig::reference();
    for (const char* key : {"amg.theta", "schur.trisolve.mL", "ilu.droptol", "rhs"})
        CHECK(ref.find(key) != std::string::npos);
}

TEST_CASE("unknown keys are rejected fail-fast") {
    SolverConfig cfg;
    CHECK_THROWS_WITH_AS(cfg.set("amg.thetaa", "0.5"), doctest::Contains("unknown key"),
                         Error);
    std::istringstream in("amg.theta = 0.5\nbogus.key = 1\n");
    CHECK_THROWS_WITH_AS(cfg.load_stream(in, "<test>"), doctest::Contains("<test>:2"),
                         Error);
}

TEST_CASE("config files parse comments and blanks") {
    SolverConfig cfg;
    std::istringstream in("# a comment\n\n"
                          "amg.theta = 0.5   # trailing comment\n"
                          "smoother.kind = ilu\n"
                          "krylov.tol = 1e-8\n");
    cfg.load_stream(in, "<test>");
    CHECK(cfg.get_double("amg.theta") == 0.5);
    CHECK(cfg.get("smoother.kind") == "ilu");
    CHECK(cfg.get_double("krylov.tol") == 1e-8);
}

TEST_CASE("typed accessors validate their input") {
    SolverConfig cfg;
    cfg.set("amg.max_levels", "abc");
    CHECK_THROWS_AS(cfg.get_index("amg.max_levels"), Error);
    cfg.set("krylov.record_history", "maybe");
    CHECK_THROWS_AS(cfg.get_bool("krylov.record_history"), Error);
    cfg.set("amg.theta", "not-a-number");
    CHECK_THROWS_AS(cfg.get_double("amg.theta"), Error);
}

TEST_CASE("parameter structs are built from the config") {
    SolverConfig cfg;
    cfg.set("smoother.kind", "ilu");
    cfg.set("ilu.variant", "ilut");
    cfg.set("ilu.droptol", "0.01");
    cfg.set("ilu.lfill", "7");
    cfg.set("trisolve.m_lower", "18");
    cfg.set("trisolve.m_upper", "31");
    cfg.set("scaling", "row_col");
    const AmgParams p = amg_params_from(cfg);
    CHECK(p.plan.finest.kind == SmootherKind::ilu);
    CHECK(p.plan.finest.ilu_params.variant == IluVariant::ilut);
    CHECK(p.plan.finest.ilu_params.droptol == 0.01);
    CHECK(p.plan.finest.ilu_params.lfill == 7);
    CHECK(p.plan.finest.trisolve.m_lower == 18);
    CHECK(p.plan.finest.trisolve.m_upper == 31);
    CHECK(p.plan.finest.scaling == ScalingKind::row_col);
    CHECK(p.plan.fallback.kind == SmootherKind::gauss_seidel);

    cfg.set("krylov.method", "fgmres");
    cfg.set("krylov.criterion", "nrbe");
    const KrylovParams kp = krylov_params_from(cfg);
    CHECK(kp.method == KrylovMethod::fgmres);
    CHECK(kp.criterion == StopCriterion::nrbe);
}

TEST_CASE("invalid enum values are reported") {
    SolverConfig cfg;
    cfg.set("amg.coarsening", "fancy");
    CHECK_THROWS_AS(amg_params_from(cfg), Error);
    SolverConfig cfg2;
    cfg2.set("krylov.criterion", "wat");
    CHECK_THROWS_AS(krylov_params_from(cfg2), Error);
}

TEST_CASE("poisson1d(3) is tridiag(-1, 2, -1)") {
    const SparseMatrix A = poisson1d(3);
    CHECK(A.nnz() == 7);
    CHECK(A.at(0, 0) == 2.0);
    CHECK(A.at(1, 0) == -1.0);
    CHECK(A.at(1, 2) == -1.0);
    CHECK(A.at(0, 2) == 0.0);
}

TEST_CASE("poisson2d(2,2) has the 5-point pattern") {
    const SparseMatrix A = poisson2d(2, 2);
    CHECK(A.nrows == 4);
    CHECK(A.at(0, 0) == 4.0);
    CHECK(A.at(0, 1) == -1.0);
    CHECK(A.at(0, 2) == -1.0);
    CHECK(A.at(0, 3) == 0.0);
}

TEST_CASE("generated problems are symmetric with zero-sum interior rows") {
    for (const SparseMatrix& A : {poisson2d(6, 5), anisotropic2d(7, 4, 0.01)}) {
        const SparseMatrix At = transpose(A);
        CHECK(oracles::max_abs_diff(oracles::to_dense(A), oracles::to_dense(At)) == 0.0);
        index_t zero_sum_rows = 0;
        for (index_t i = 0; i < A.nrows; ++i) {
            double s = 0.0;
            for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
                 k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
                s += A.values[static_cast<std::size_t>(k)];
            CHECK(s >= -1e-14); // Dirichlet rows are positive, interiors zero
            if (std::abs(s) < 1e-14) ++zero_sum_rows;
        }
        const index_t interior = (6 - 2) * (5 - 2);
        if (A.nrows == 30) CHECK(zero_sum_rows == interior);
    }
}

TEST_CASE("generator specs parse and reject malformed input") {
    CHECK(generate_problem("poisson2d(3,4)").nrows == 12);
    CHECK(generate_problem("anisotropic2d(3,3,0.5)").nrows == 9);
    CHECK_THROWS_AS(generate_problem("poisson2d(3)"), Error);
    CHECK_THROWS_AS(generate_problem("hyperbolic(3,3)"), Error);
    CHECK(is_generator_spec("poisson1d(5)"));
    CHECK_FALSE(is_generator_spec("matrix.mtx"));
}

TEST_CASE("rhs modes") {
    const SparseMatrix A = poisson1d(5);
    SolverConfig cfg;
    const DenseVector b1 = make_rhs(cfg, A); // ones-times-A
    const DenseVector want = spmv(A, DenseVector(5, 1.0));
    CHECK(b1 == want);

    cfg.set("rhs", "random(9)");
    const DenseVector b2 = make_rhs(cfg, A);
    const DenseVector b3 = make_rhs(cfg, A);
    CHECK(b2 == b3); // deterministic given the seed
    cfg.set("rhs", "random(10)");
    CHECK(make_rhs(cfg, A) != b2);

    {
        std::ofstream out("/tmp/iluamg_rhs.txt");
        out << "1.5\n-2\n0\n4.25\n3\n";
    }
    cfg.set("rhs", "file:/tmp/iluamg_rhs.txt");
    const DenseVector bf = make_rhs(cfg, A);
    CHECK(bf == DenseVector{1.5, -2.0, 0.0, 4.25, 3.0});
    cfg.set("rhs", "file:/tmp/iluamg_rhs_missing.txt");
    CHECK_THROWS_AS(make_rhs(cfg, A), Error);
    std::remove("/tmp/iluamg_rhs.txt");

    cfg.set("rhs", "nonsense");
    CHECK_THROWS_AS(make_rhs(cfg, A), Error);
}

TEST_CASE("bench-trisolve errors decay geometrically on 2D Poisson") {
    SolverConfig cfg;
    cfg.set("matrix", "poisson2d(32,32)");
    cfg.set("bench.m_max", "40");
    const SparseMatrix A = load_matrix_from(cfg);
    const Report rep = run_bench_trisolve(A, cfg, "poisson2d(32,32)");
    const ReportTable* bench = rep.table("bench");
    REQUIRE(bench != nullptr);
    auto err_at = [&](const std::string& factor, const std::string& m) {
        for (const auto& row : bench->rows)
            if (row[0] == factor && row[1] == m) return std::stod(row[2]);
        return -1.0;
    };
    // Measured envelope: the scaled factors carry roughly two 0.28-magnitude
    // strict-triangular entries per row, so the error contracts by about
    // 0.56 per sweep (5.9e-6 at m = 20, below 1e-8 around m = 32).
    CHECK(err_at("L", "20") < 2e-5);
    CHECK(err_at("U", "20") < 2e-5);
    CHECK(err_at("L", "40") < 1e-10);
    CHECK(err_at("U", "40") < 1e-10);
}

TEST_CASE("reports render deterministic CSV") {
    ReportTable t;
    t.name = "demo";
    t.columns = {"a", "b"};
    t.rows = {{"1", "2"}, {"3", "4"}};
    CHECK(t.csv() == "a,b\n1,2\n3,4\n");
    Report rep;
    rep.add("x", 1.5);
    rep.add("name", std::string("value"));
    CHECK(rep.text().find("name = value") != std::string::npos);
    CHECK(rep.json().find("\"name\":\"value\"") != std::string::npos);
    REQUIRE(rep.find("x") != nullptr);
    CHECK(*rep.find("x") == format_num(1.5));
}

TEST_SUITE_END();
