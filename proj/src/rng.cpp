#include "iluamg/rng.hpp"

namespace iluamg {

DenseVector random_unit(index_t n, std::uint64_t seed) {
    DenseVector v = random_uniform(n, seed);
    const double nrm = two_norm(v);
    if (nrm > 0.0)
        for (double& x : v) x /= nrm;
    return v;
}

} // namespace iluamg
