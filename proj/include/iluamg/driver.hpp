/// @file driver.hpp
/// @brief Experiment drivers behind the CLI subcommands: each produces a
///        Report of ordered scalars plus named tables renderable as CSV.

#ifndef ILUAMG_DRIVER_HPP
#define ILUAMG_DRIVER_HPP

#include "iluamg/config.hpp"
#include "iluamg/sparse.hpp"

#include <string>
#include <utility>
#include <vector>

namespace iluamg {

struct ReportTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string csv() const; ///< header row + data rows, comma-separated
};

struct Report {
    std::vector<std::pair<std::string, std::string>> scalars;
    std::vector<ReportTable> tables;
    int status = 0; ///< 0 succeeded/converged, 1 ran but missed its criterion

    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, index_t value);
    void add(const std::string& key, bool value);
    const std::string* find(const std::string& key) const;
    const ReportTable* table(const std::string& name) const;

    std::string text() const; ///< flat key = value block
    std::string json() const; ///< scalars as a JSON object
};

std::string format_num(double v); ///< deterministic %.16e

/// Factorization diagnostics: departures from normality of L, U, and the
/// row- and row/col-scaled U, condition estimates, striping flags.
Report run_analyze(const SparseMatrix& A, const SolverConfig& cfg,
                   const std::string& matrix_label);

/// Hierarchy + (F)GMRES solve; emits the iteration history and the
/// per-level hierarchy summary.
Report run_solve(const SparseMatrix& A, const SolverConfig& cfg,
                 const std::string& matrix_label);

/// Per-m Richardson-vs-direct error curves for the L and scaled-U solves.
Report run_bench_trisolve(const SparseMatrix& A, const SolverConfig& cfg,
                          const std::string& matrix_label);

/// Repeats the solve with the Schur smoother for each block count in
/// schur.blocks_list; reports iterations and interface sizes per p.
Report run_schur_solve(const SparseMatrix& A, const SolverConfig& cfg,
                       const std::string& matrix_label);

} // namespace iluamg

#endif // ILUAMG_DRIVER_HPP
