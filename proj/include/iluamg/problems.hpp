/// @file problems.hpp
/// @brief Desk-scale test problem generators (Dirichlet Laplacians).

#ifndef ILUAMG_PROBLEMS_HPP
#define ILUAMG_PROBLEMS_HPP

#include "iluamg/sparse.hpp"

#include <string>

namespace iluamg {

/// 1D Laplacian tridiag(-1, 2, -1).
SparseMatrix poisson1d(index_t n);

/// 2D 5-point Laplacian on an nx x ny grid, Dirichlet boundary. Interior
/// rows sum to zero; boundary rows are diagonally dominant.
SparseMatrix poisson2d(index_t nx, index_t ny);

/// Anisotropic 2D Laplacian: -eps u_xx - u_yy discretized on nx x ny.
SparseMatrix anisotropic2d(index_t nx, index_t ny, double eps);

/// Parses a generator spec of the form "poisson1d(n)", "poisson2d(nx,ny)",
/// or "anisotropic2d(nx,ny,eps)".
SparseMatrix generate_problem(const std::string& spec);

/// True when the string looks like a generator spec rather than a file path.
bool is_generator_spec(const std::string& s);

} // namespace iluamg

#endif // ILUAMG_PROBLEMS_HPP
