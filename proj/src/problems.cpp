#include "iluamg/problems.hpp"
#include "iluamg/error.hpp"

#include <cctype>
#include <sstream>

namespace iluamg {

SparseMatrix poisson1d(index_t n) {
    if (n < 1) fail_invalid("poisson1d: n must be >= 1");
    std::vector<std::tuple<index_t, index_t, double>> trip;
    for (index_t i = 0; i < n; ++i) {
        if (i > 0) trip.emplace_back(i, i - 1, -1.0);
        trip.emplace_back(i, i, 2.0);
        if (i + 1 < n) trip.emplace_back(i, i + 1, -1.0);
    }
    return SparseMatrix::from_triplets(n, n, std::move(trip));
}

SparseMatrix poisson2d(index_t nx, index_t ny) {
    return anisotropic2d(nx, ny, 1.0);
}

SparseMatrix anisotropic2d(index_t nx, index_t ny, double eps) {
    if (nx < 1 || ny < 1) fail_invalid("anisotropic2d: grid dimensions must be >= 1");
    if (!(eps > 0.0)) fail_invalid("anisotropic2d: eps must be > 0");
    const index_t n = nx * ny;
    auto id = [nx](index_t ix, index_t iy) { return iy * nx + ix; };
    std::vector<std::tuple<index_t, index_t, double>> trip;
    for (index_t iy = 0; iy < ny; ++iy) {
        for (index_t ix = 0; ix < nx; ++ix) {
            const index_t i = id(ix, iy);
            if (iy > 0) trip.emplace_back(i, id(ix, iy - 1), -1.0);
            if (ix > 0) trip.emplace_back(i, id(ix - 1, iy), -eps);
            trip.emplace_back(i, i, 2.0 * eps + 2.0);
            if (ix + 1 < nx) trip.emplace_back(i, id(ix + 1, iy), -eps);
            if (iy + 1 < ny) trip.emplace_back(i, id(ix, iy + 1), -1.0);
        }
    }
    return SparseMatrix::from_triplets(n, n, std::move(trip));
}

bool is_generator_spec(const std::string& s) {
    return s.rfind("poisson1d(", 0) == 0 || s.rfind("poisson2d(", 0) == 0 ||
           s.rfind("anisotropic2d(", 0) == 0;
}

SparseMatrix generate_problem(const std::string& spec) {
    const auto open = spec.find('(');
    const auto close = spec.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        fail_invalid("generate_problem: malformed spec '" + spec + "'");
    const std::string kind = spec.substr(0, open);
    std::string args = spec.substr(open + 1, close - open - 1);
    for (char& c : args)
        if (c == ',') c = ' ';
    std::istringstream in(args);

    if (kind == "poisson1d") {
        index_t n = 0;
        if (!(in >> n)) fail_invalid("generate_problem: poisson1d expects (n)");
        return poisson1d(n);
    }
    if (kind == "poisson2d") {
        index_t nx = 0, ny = 0;
        if (!(in >> nx >> ny)) fail_invalid("generate_problem: poisson2d expects (nx,ny)");
        return poisson2d(nx, ny);
    }
    if (kind == "anisotropic2d") {
        index_t nx = 0, ny = 0;
        double eps = 0.0;
        if (!(in >> nx >> ny >> eps))
            fail_invalid("generate_problem: anisotropic2d expects (nx,ny,eps)");
        return anisotropic2d(nx, ny, eps);
    }
    fail_invalid("generate_problem: unknown generator '" + kind + "'");
}

} // namespace iluamg
