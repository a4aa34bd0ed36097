#include "iluamg/dense.hpp"
#include "iluamg/error.hpp"

#include <cmath>

namespace iluamg {

DenseLu::DenseLu(const SparseMatrix& A) {
    if (A.nrows != A.ncols) fail_invalid("DenseLu: matrix must be square");
    n_ = A.nrows;
    auto n = static_cast<std::size_t>(n_);
    lu_.assign(n * n, 0.0);
    piv_.resize(n);
    for (index_t i = 0; i < n_; ++i) {
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k)
            lu_[static_cast<std::size_t>(i) * n +
                static_cast<std::size_t>(A.col_indices[static_cast<std::size_t>(k)])] =
                A.values[static_cast<std::size_t>(k)];
    }

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu_[i * n + k]) > std::abs(lu_[p * n + k])) p = i;
        if (lu_[p * n + k] == 0.0)
            fail_numeric("DenseLu: singular coarse matrix at column " + std::to_string(k));
        piv_[k] = static_cast<index_t>(p);
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_[p * n + j], lu_[k * n + j]);
        double pivot = lu_[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            double m = lu_[i * n + k] / pivot;
            lu_[i * n + k] = m;
            for (std::size_t j = k + 1; j < n; ++j) lu_[i * n + j] -= m * lu_[k * n + j];
        }
    }
}

DenseVector DenseLu::solve(const DenseVector& b) const {
    if (static_cast<index_t>(b.size()) != n_) fail_invalid("DenseLu::solve: size mismatch");
    auto n = static_cast<std::size_t>(n_);
    DenseVector x = b;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = static_cast<std::size_t>(piv_[k]);
        if (p != k) std::swap(x[p], x[k]);
        for (std::size_t i = k + 1; i < n; ++i) x[i] -= lu_[i * n + k] * x[k];
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu_[i * n + j] * x[j];
        x[i] = s / lu_[i * n + i];
    }
    return x;
}

} // namespace iluamg
