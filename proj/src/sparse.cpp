#include "iluamg/sparse.hpp"
#include "iluamg/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iluamg {

namespace {

void check_dims(index_t a, index_t b, const char* what) {
    if (a != b) {
        fail_invalid(std::string(what) + ": dimension mismatch (" +
                     std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

} // namespace

double SparseMatrix::at(index_t i, index_t j) const {
    auto first = col_indices.begin() + row_starts[i];
    auto last = col_indices.begin() + row_starts[i + 1];
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values[static_cast<std::size_t>(it - col_indices.begin())];
}

SparseMatrix SparseMatrix::identity(index_t n) {
    SparseMatrix I;
    I.nrows = I.ncols = n;
    I.row_starts.resize(static_cast<std::size_t>(n) + 1);
    I.col_indices.resize(static_cast<std::size_t>(n));
    I.values.assign(static_cast<std::size_t>(n), 1.0);
    for (index_t i = 0; i <= n; ++i) I.row_starts[static_cast<std::size_t>(i)] = i;
    for (index_t i = 0; i < n; ++i) I.col_indices[static_cast<std::size_t>(i)] = i;
    return I;
}

SparseMatrix SparseMatrix::diagonal(const DenseVector& d) {
    std::vector<std::tuple<index_t, index_t, double>> trip;
    trip.reserve(d.size());
    for (index_t i = 0; i < static_cast<index_t>(d.size()); ++i)
        trip.emplace_back(i, i, d[static_cast<std::size_t>(i)]);
    return from_triplets(static_cast<index_t>(d.size()), static_cast<index_t>(d.size()),
                         std::move(trip));
}

SparseMatrix SparseMatrix::from_triplets(index_t nrows, index_t ncols,
                                         std::vector<std::tuple<index_t, index_t, double>> triplets,
                                         bool keep_zeros) {
    for (const auto& [i, j, v] : triplets) {
        (void)v;
        if (i < 0 || i >= nrows || j < 0 || j >= ncols)
            fail_invalid("from_triplets: index (" + std::to_string(i) + "," +
                         std::to_string(j) + ") out of range");
    }
    std::sort(triplets.begin(), triplets.end(),
              [](const auto& a, const auto& b) {
                  return std::tie(std::get<0>(a), std::get<1>(a)) <
                         std::tie(std::get<0>(b), std::get<1>(b));
              });

    SparseMatrix A;
    A.nrows = nrows;
    A.ncols = ncols;
    A.row_starts.assign(static_cast<std::size_t>(nrows) + 1, 0);

    std::size_t k = 0;
    while (k < triplets.size()) {
        auto [i, j, v] = triplets[k];
        ++k;
        while (k < triplets.size() && std::get<0>(triplets[k]) == i &&
               std::get<1>(triplets[k]) == j) {
            v += std::get<2>(triplets[k]); // duplicates sum
            ++k;
        }
        if (v == 0.0 && !keep_zeros) continue;
        A.col_indices.push_back(j);
        A.values.push_back(v);
        ++A.row_starts[static_cast<std::size_t>(i) + 1];
    }
    for (std::size_t i = 1; i < A.row_starts.size(); ++i)
        A.row_starts[i] += A.row_starts[i - 1];
    return A;
}

SparseMatrix SparseMatrix::from_csr(index_t nrows, index_t ncols,
                                    std::vector<index_t> row_starts,
                                    std::vector<index_t> col_indices,
                                    std::vector<double> values) {
    if (static_cast<index_t>(row_starts.size()) != nrows + 1 || row_starts[0] != 0)
        fail_invalid("from_csr: row_starts must have length nrows+1 with row_starts[0]=0");
    if (col_indices.size() != values.size())
        fail_invalid("from_csr: col_indices and values length mismatch");
    if (row_starts[static_cast<std::size_t>(nrows)] != static_cast<index_t>(values.size()))
        fail_invalid("from_csr: row_starts[nrows] != nnz");
    for (index_t i = 0; i < nrows; ++i) {
        if (row_starts[static_cast<std::size_t>(i)] > row_starts[static_cast<std::size_t>(i) + 1])
            fail_invalid("from_csr: row_starts not non-decreasing");
        for (index_t k = row_starts[static_cast<std::size_t>(i)];
             k < row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            index_t j = col_indices[static_cast<std::size_t>(k)];
            if (j < 0 || j >= ncols) fail_invalid("from_csr: column index out of range");
            if (k > row_starts[static_cast<std::size_t>(i)] &&
                col_indices[static_cast<std::size_t>(k) - 1] >= j)
                fail_invalid("from_csr: column indices not strictly increasing in row " +
                             std::to_string(i));
        }
    }
    SparseMatrix A;
    A.nrows = nrows;
    A.ncols = ncols;
    A.row_starts = std::move(row_starts);
    A.col_indices = std::move(col_indices);
    A.values = std::move(values);
    return A;
}

bool has_shape(const SparseMatrix& A, TriShape shape) {
    if (A.nrows != A.ncols) return false;
    bool diag_ok = true;
    for (index_t i = 0; i < A.nrows; ++i) {
        bool has_diag = false;
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            index_t j = A.col_indices[static_cast<std::size_t>(k)];
            switch (shape) {
            case TriShape::UnitLower:
            case TriShape::StrictLower:
                if (j >= i) return false;
                break;
            case TriShape::Lower:
                if (j > i) return false;
                break;
            case TriShape::Upper:
                if (j < i) return false;
                break;
            case TriShape::StrictUpper:
                if (j <= i) return false;
                break;
            }
            if (j == i) has_diag = true;
        }
        if (!has_diag) diag_ok = false;
    }
    (void)diag_ok;
    return true;
}

void require_shape(const SparseMatrix& A, TriShape shape, const char* what) {
    if (!has_shape(A, shape))
        fail_invalid(std::string(what) + ": matrix does not have the required triangular shape");
}

DenseVector spmv(const SparseMatrix& A, const DenseVector& x) {
    DenseVector y(static_cast<std::size_t>(A.nrows));
    spmv_into(A, x, y);
    return y;
}

void spmv_into(const SparseMatrix& A, const DenseVector& x, DenseVector& y) {
    check_dims(A.ncols, static_cast<index_t>(x.size()), "spmv");
    y.resize(static_cast<std::size_t>(A.nrows));
    for (index_t i = 0; i < A.nrows; ++i) {
        double sum = 0.0;
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            sum += A.values[static_cast<std::size_t>(k)] *
                   x[static_cast<std::size_t>(A.col_indices[static_cast<std::size_t>(k)])];
        }
        y[static_cast<std::size_t>(i)] = sum;
    }
}

SparseMatrix matmul(const SparseMatrix& A, const SparseMatrix& B) {
    check_dims(A.ncols, B.nrows, "matmul");

    SparseMatrix C;
    C.nrows = A.nrows;
    C.ncols = B.ncols;
    C.row_starts.assign(static_cast<std::size_t>(A.nrows) + 1, 0);

    // Symbolic pass: pattern of each result row, columns sorted ascending.
    std::vector<index_t> mark(static_cast<std::size_t>(B.ncols), -1);
    std::vector<index_t> cols;
    std::vector<std::vector<index_t>> pattern(static_cast<std::size_t>(A.nrows));
    for (index_t i = 0; i < A.nrows; ++i) {
        cols.clear();
        for (index_t ka = A.row_starts[static_cast<std::size_t>(i)];
             ka < A.row_starts[static_cast<std::size_t>(i) + 1]; ++ka) {
            index_t k = A.col_indices[static_cast<std::size_t>(ka)];
            for (index_t kb = B.row_starts[static_cast<std::size_t>(k)];
                 kb < B.row_starts[static_cast<std::size_t>(k) + 1]; ++kb) {
                index_t j = B.col_indices[static_cast<std::size_t>(kb)];
                if (mark[static_cast<std::size_t>(j)] != i) {
                    mark[static_cast<std::size_t>(j)] = i;
                    cols.push_back(j);
                }
            }
        }
        std::sort(cols.begin(), cols.end());
        pattern[static_cast<std::size_t>(i)] = cols;
    }

    // Numeric pass: accumulate in a dense workspace, scatter in sorted order.
    std::vector<double> work(static_cast<std::size_t>(B.ncols), 0.0);
    for (index_t i = 0; i < A.nrows; ++i) {
        for (index_t ka = A.row_starts[static_cast<std::size_t>(i)];
             ka < A.row_starts[static_cast<std::size_t>(i) + 1]; ++ka) {
            index_t k = A.col_indices[static_cast<std::size_t>(ka)];
            double aik = A.values[static_cast<std::size_t>(ka)];
            for (index_t kb = B.row_starts[static_cast<std::size_t>(k)];
                 kb < B.row_starts[static_cast<std::size_t>(k) + 1]; ++kb) {
                work[static_cast<std::size_t>(B.col_indices[static_cast<std::size_t>(kb)])] +=
                    aik * B.values[static_cast<std::size_t>(kb)];
            }
        }
        for (index_t j : pattern[static_cast<std::size_t>(i)]) {
            double v = work[static_cast<std::size_t>(j)];
            work[static_cast<std::size_t>(j)] = 0.0;
            if (v == 0.0) continue; // exact-zero results dropped
            C.col_indices.push_back(j);
            C.values.push_back(v);
            ++C.row_starts[static_cast<std::size_t>(i) + 1];
        }
    }
    for (std::size_t i = 1; i < C.row_starts.size(); ++i)
        C.row_starts[i] += C.row_starts[i - 1];
    return C;
}

SparseMatrix transpose(const SparseMatrix& A) {
    SparseMatrix T;
    T.nrows = A.ncols;
    T.ncols = A.nrows;
    T.row_starts.assign(static_cast<std::size_t>(A.ncols) + 1, 0);
    T.col_indices.resize(static_cast<std::size_t>(A.nnz()));
    T.values.resize(static_cast<std::size_t>(A.nnz()));

    for (index_t k = 0; k < A.nnz(); ++k)
        ++T.row_starts[static_cast<std::size_t>(A.col_indices[static_cast<std::size_t>(k)]) + 1];
    for (std::size_t j = 1; j < T.row_starts.size(); ++j)
        T.row_starts[j] += T.row_starts[j - 1];

    std::vector<index_t> next(T.row_starts.begin(), T.row_starts.end() - 1);
    for (index_t i = 0; i < A.nrows; ++i) {
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            index_t j = A.col_indices[static_cast<std::size_t>(k)];
            index_t pos = next[static_cast<std::size_t>(j)]++;
            T.col_indices[static_cast<std::size_t>(pos)] = i;
            T.values[static_cast<std::size_t>(pos)] = A.values[static_cast<std::size_t>(k)];
        }
    }
    return T;
}

double frobenius_norm(const SparseMatrix& A) {
    double s = 0.0;
    for (double v : A.values) s += v * v;
    return std::sqrt(s);
}

double two_norm(const DenseVector& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double inf_norm(const DenseVector& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double one_norm_cols(const SparseMatrix& A) {
    std::vector<double> colsum(static_cast<std::size_t>(A.ncols), 0.0);
    for (index_t k = 0; k < A.nnz(); ++k)
        colsum[static_cast<std::size_t>(A.col_indices[static_cast<std::size_t>(k)])] +=
            std::abs(A.values[static_cast<std::size_t>(k)]);
    double m = 0.0;
    for (double v : colsum) m = std::max(m, v);
    return m;
}

DenseVector diag(const SparseMatrix& A) {
    if (A.nrows != A.ncols) fail_invalid("diag: matrix must be square");
    DenseVector d(static_cast<std::size_t>(A.nrows), 0.0);
    for (index_t i = 0; i < A.nrows; ++i) {
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            if (A.col_indices[static_cast<std::size_t>(k)] == i) {
                d[static_cast<std::size_t>(i)] = A.values[static_cast<std::size_t>(k)];
                break;
            }
        }
    }
    return d;
}

std::tuple<SparseMatrix, SparseMatrix, SparseMatrix> split_triangular(const SparseMatrix& A) {
    if (A.nrows != A.ncols) fail_invalid("split_triangular: matrix must be square");
    SparseMatrix L, D, U;
    L.nrows = D.nrows = U.nrows = A.nrows;
    L.ncols = D.ncols = U.ncols = A.ncols;
    L.row_starts.assign(static_cast<std::size_t>(A.nrows) + 1, 0);
    D.row_starts.assign(static_cast<std::size_t>(A.nrows) + 1, 0);
    U.row_starts.assign(static_cast<std::size_t>(A.nrows) + 1, 0);
    for (index_t i = 0; i < A.nrows; ++i) {
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            index_t j = A.col_indices[static_cast<std::size_t>(k)];
            double v = A.values[static_cast<std::size_t>(k)];
            SparseMatrix& dst = j < i ? L : (j == i ? D : U);
            dst.col_indices.push_back(j);
            dst.values.push_back(v);
            ++dst.row_starts[static_cast<std::size_t>(i) + 1];
        }
    }
    for (SparseMatrix* M : {&L, &D, &U})
        for (std::size_t i = 1; i < M->row_starts.size(); ++i)
            M->row_starts[i] += M->row_starts[i - 1];
    return {std::move(L), std::move(D), std::move(U)};
}

DenseVector residual(const SparseMatrix& A, const DenseVector& x, const DenseVector& b) {
    check_dims(A.nrows, static_cast<index_t>(b.size()), "residual");
    DenseVector r = spmv(A, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return r;
}

} // namespace iluamg
