#include "iluamg/matrix_market.hpp"
#include "iluamg/problems.hpp"
#include "iluamg/sparse.hpp"
#include "iluamg/error.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace iluamg;

TEST_SUITE_BEGIN("sparse");

TEST_CASE("spmv identity and zero vector") {
    const SparseMatrix I = SparseMatrix::identity(3);
    const DenseVector x{1.0, 2.0, 3.0};
    CHECK(spmv(I, x) == x);

    const SparseMatrix A = oracles::random_sparse(5, 5, 0.5, 11);
    const DenseVector zero(5, 0.0);
    CHECK(spmv(A, zero) == zero);
}

TEST_CASE("spmv on the 1D Laplacian") {
    const SparseMatrix A = poisson1d(3);
    const DenseVector y = spmv(A, DenseVector{1.0, 1.0, 1.0});
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(0.0));
    CHECK(y[2] == doctest::Approx(1.0));
}

TEST_CASE("spmv matches the dense oracle on random matrices") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const index_t n = 8 * static_cast<index_t>(seed);
        const SparseMatrix A = oracles::random_sparse(n, n, 0.3, seed);
        const DenseVector x = oracles::random_vec(n, seed + 100);
        const DenseVector got = spmv(A, x);
        const oracles::Vec want = oracles::to_dense(A) * oracles::to_eigen(x);
        CHECK(oracles::rel_err(got, oracles::from_eigen(want)) < 1e-13);
    }
}

TEST_CASE("spmv rejects dimension mismatch") {
    const SparseMatrix A = oracles::random_sparse(4, 6, 0.5, 3);
    CHECK_THROWS_AS(spmv(A, DenseVector(4, 1.0)), Error);
}

TEST_CASE("matmul identity is bitwise exact") {
    const SparseMatrix A = oracles::random_sparse(7, 7, 0.4, 5);
    const SparseMatrix I = SparseMatrix::identity(7);
    const SparseMatrix AI = matmul(A, I);
    const SparseMatrix IA = matmul(I, A);
    CHECK(AI.col_indices == A.col_indices);
    CHECK(AI.values == A.values);
    CHECK(AI.row_starts == A.row_starts);
    CHECK(IA.values == A.values);
}

TEST_CASE("matmul matches the dense product oracle") {
    const SparseMatrix A = oracles::random_sparse(8, 8, 0.4, 21);
    const SparseMatrix B = oracles::random_sparse(8, 8, 0.4, 22);
    const SparseMatrix C = matmul(A, B);
    const oracles::Mat want = oracles::to_dense(A) * oracles::to_dense(B);
    CHECK(oracles::max_abs_diff(oracles::to_dense(C), want) < 1e-14);
}

TEST_CASE("matmul associativity on small random triples") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const SparseMatrix A = oracles::random_sparse(10, 12, 0.3, 30 + seed);
        const SparseMatrix B = oracles::random_sparse(12, 9, 0.3, 40 + seed);
        const SparseMatrix C = oracles::random_sparse(9, 11, 0.3, 50 + seed);
        const oracles::Mat left = oracles::to_dense(matmul(matmul(A, B), C));
        const oracles::Mat right = oracles::to_dense(matmul(A, matmul(B, C)));
        const double scale = std::max(1.0, left.cwiseAbs().maxCoeff());
        CHECK(oracles::max_abs_diff(left, right) / scale < 1e-12);
    }
}

TEST_CASE("matmul rejects dimension mismatch") {
    const SparseMatrix A = oracles::random_sparse(4, 5, 0.5, 1);
    const SparseMatrix B = oracles::random_sparse(4, 4, 0.5, 2);
    CHECK_THROWS_AS(matmul(A, B), Error);
}

TEST_CASE("transpose is an involution") {
    const SparseMatrix A = oracles::random_sparse(9, 6, 0.35, 9);
    const SparseMatrix Att = transpose(transpose(A));
    CHECK(Att.row_starts == A.row_starts);
    CHECK(Att.col_indices == A.col_indices);
    CHECK(Att.values == A.values);
}

TEST_CASE("frobenius norm of the identity") {
    CHECK(frobenius_norm(SparseMatrix::identity(16)) == doctest::Approx(4.0));
}

TEST_CASE("split_triangular reconstructs the matrix exactly") {
    const SparseMatrix A = poisson1d(5);
    auto [L, D, U] = split_triangular(A);
    CHECK(L.nnz() + D.nnz() + U.nnz() == A.nnz());
    for (index_t i = 0; i < 5; ++i)
        for (index_t j = 0; j < 5; ++j)
            CHECK(L.at(i, j) + D.at(i, j) + U.at(i, j) == A.at(i, j));
    // sub-diagonal -1s, diag 2s, super-diagonal -1s
    CHECK(L.at(1, 0) == -1.0);
    CHECK(D.at(2, 2) == 2.0);
    CHECK(U.at(2, 3) == -1.0);
    CHECK(has_shape(L, TriShape::StrictLower));
    CHECK(has_shape(U, TriShape::StrictUpper));
}

TEST_CASE("split on random matrices partitions the nnz") {
    const SparseMatrix A = oracles::random_sparse(20, 20, 0.3, 77);
    auto [L, D, U] = split_triangular(A);
    CHECK(L.nnz() + D.nnz() + U.nnz() == A.nnz());
    CHECK(oracles::max_abs_diff(oracles::to_dense(L) + oracles::to_dense(D) +
                                    oracles::to_dense(U),
                                oracles::to_dense(A)) == 0.0);
}

TEST_CASE("diag and split reject non-square input") {
    const SparseMatrix A = oracles::random_sparse(4, 5, 0.5, 1);
    CHECK_THROWS_AS(diag(A), Error);
    CHECK_THROWS_AS(split_triangular(A), Error);
}

TEST_CASE("from_triplets sums duplicates and drops zeros") {
    std::vector<std::tuple<index_t, index_t, double>> trip{
        {0, 0, 1.0}, {0, 0, 2.0}, {1, 1, 3.0}, {1, 0, 5.0}, {1, 0, -5.0}};
    const SparseMatrix A = SparseMatrix::from_triplets(2, 2, trip);
    CHECK(A.nnz() == 2);
    CHECK(A.at(0, 0) == 3.0);
    CHECK(A.at(1, 0) == 0.0); // cancelled pair dropped
    const SparseMatrix B = SparseMatrix::from_triplets(2, 2, trip, /*keep_zeros=*/true);
    CHECK(B.nnz() == 3);
}

TEST_CASE("matrix market round trip is exact") {
    const SparseMatrix A = oracles::random_sparse(12, 10, 0.3, 123);
    std::ostringstream out;
    mm_write(A, out);
    std::istringstream in(out.str());
    const SparseMatrix B = mm_read(in);
    CHECK(B.nrows == A.nrows);
    CHECK(B.ncols == A.ncols);
    CHECK(B.row_starts == A.row_starts);
    CHECK(B.col_indices == A.col_indices);
    CHECK(B.values == A.values);
}

TEST_CASE("matrix market symmetric expansion") {
    std::istringstream in("%%MatrixMarket matrix coordinate real symmetric\n"
                          "3 3 4\n"
                          "1 1 2.0\n2 1 -1.0\n3 2 -1.5\n3 3 4.0\n");
    const SparseMatrix A = mm_read(in);
    CHECK(A.nnz() == 6);
    CHECK(A.at(0, 1) == -1.0);
    CHECK(A.at(1, 0) == -1.0);
    CHECK(A.at(1, 2) == -1.5);
    CHECK(A.at(2, 1) == -1.5);
    const SparseMatrix At = transpose(A);
    CHECK(oracles::max_abs_diff(oracles::to_dense(A), oracles::to_dense(At)) == 0.0);
}

TEST_CASE("matrix market duplicate entries are summed") {
    std::istringstream in("%%MatrixMarket matrix coordinate real general\n"
                          "2 2 3\n"
                          "1 1 1.5\n1 1 2.5\n2 2 1.0\n");
    const SparseMatrix A = mm_read(in);
    CHECK(A.at(0, 0) == 4.0);
    CHECK(A.nnz() == 2);
}

TEST_CASE("matrix market rejects malformed input") {
    std::istringstream bad_header("%%NotMatrixMarket matrix\n1 1 0\n");
    CHECK_THROWS_AS(mm_read(bad_header), Error);
    std::istringstream complex_field(
        "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n");
    CHECK_THROWS_WITH_AS(mm_read(complex_field),
                         doctest::Contains("not supported"), Error);
    std::istringstream pattern_field(
        "%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n");
    CHECK_THROWS_AS(mm_read(pattern_field), Error);
    std::istringstream out_of_range("%%MatrixMarket matrix coordinate real general\n"
                                    "2 2 1\n3 1 1.0\n");
    CHECK_THROWS_WITH_AS(mm_read(out_of_range), doctest::Contains("out of range"), Error);
    std::istringstream truncated("%%MatrixMarket matrix coordinate real general\n"
                                 "2 2 2\n1 1 1.0\n");
    CHECK_THROWS_AS(mm_read(truncated), Error);
}

TEST_CASE("triangular shape checks") {
    const SparseMatrix A = poisson1d(4);
    CHECK_FALSE(has_shape(A, TriShape::Upper));
    auto [L, D, U] = split_triangular(A);
    CHECK(has_shape(L, TriShape::StrictLower));
    CHECK(has_shape(L, TriShape::UnitLower));
    CHECK(has_shape(U, TriShape::StrictUpper));
    CHECK(has_shape(U, TriShape::Upper));
    CHECK(has_shape(D, TriShape::Lower));
    CHECK_FALSE(has_shape(U, TriShape::Lower));
}

TEST_SUITE_END();
