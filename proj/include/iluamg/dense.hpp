/// @file dense.hpp
/// @brief Small dense LU with partial pivoting for the coarsest-level solve.

#ifndef ILUAMG_DENSE_HPP
#define ILUAMG_DENSE_HPP

#include "iluamg/sparse.hpp"

namespace iluamg {

class DenseLu {
public:
    DenseLu() = default;
    explicit DenseLu(const SparseMatrix& A);

    DenseVector solve(const DenseVector& b) const;
    index_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

private:
    index_t n_ = 0;
    std::vector<double> lu_;   // row-major, factors packed in place
    std::vector<index_t> piv_; // row permutation
};

} // namespace iluamg

#endif // ILUAMG_DENSE_HPP
