/// @file config.hpp
/// @brief Flat dotted-key solver configuration with a fail-fast key registry
///        and typed accessors, plus translation into the module parameter
///        structs.

#ifndef ILUAMG_CONFIG_HPP
#define ILUAMG_CONFIG_HPP

#include "iluamg/amg.hpp"
#include "iluamg/krylov.hpp"

#include <map>
#include <string>

namespace iluamg {

/// Key-value configuration. Every key is registered with a default and a
/// one-line description; setting an unknown key fails immediately.
class SolverConfig {
public:
    SolverConfig(); ///< initialized to the documented defaults

    void set(const std::string& key, const std::string& value);
    const std::string& get(const std::string& key) const;
    bool has(const std::string& key) const;

    double get_double(const std::string& key) const;
    index_t get_index(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    /// Parses "key = value" lines; '#' starts a comment.
    void load_file(const std::string& path);
    void load_stream(std::istream& in, const std::string& name);

    const std::map<std::string, std::string>& values() const { return values_; }

    /// Generated key/default/description reference.
    static std::string reference();

private:
    std::map<std::string, std::string> values_;
};

// Translation into the module parameter structs (validating as it goes).

IluParams ilu_params_from(const SolverConfig& cfg, const std::string& prefix = "ilu.");
TriSolveConfig trisolve_from(const SolverConfig& cfg);
ScalingKind scaling_from(const SolverConfig& cfg, const std::string& key = "scaling");
SmootherConfig smoother_from(const SolverConfig& cfg);
SmootherConfig fallback_smoother_from(const SolverConfig& cfg);
SmootherConfig schur_smoother_from(const SolverConfig& cfg);
AmgParams amg_params_from(const SolverConfig& cfg);
KrylovParams krylov_params_from(const SolverConfig& cfg);

/// Builds the right-hand side per the rhs key: "ones-times-A" (b = A*1),
/// "random(seed)", or "file:<path>" (one value per line).
DenseVector make_rhs(const SolverConfig& cfg, const SparseMatrix& A);

/// Loads the matrix named by the config: a generator spec or an .mtx path.
SparseMatrix load_matrix_from(const SolverConfig& cfg);

} // namespace iluamg

#endif // ILUAMG_CONFIG_HPP
