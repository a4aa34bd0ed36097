#include "iluamg/matrix_market.hpp"
#include "iluamg/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace iluamg {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace

SparseMatrix mm_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_io("mm_read: cannot open '" + path + "'");
    return mm_read(in, path);
}

SparseMatrix mm_read(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line))
        fail_io("mm_read: '" + name + "' is empty");

    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix")
        fail_io("mm_read: '" + name + "' has a malformed Matrix Market header");
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format != "coordinate")
        fail_io("mm_read: only coordinate format is supported (got '" + format + "')");
    if (field == "complex" || field == "pattern")
        fail_io("mm_read: field type '" + field + "' is not supported; real matrices only");
    if (field != "real" && field != "integer")
        fail_io("mm_read: unsupported field type '" + field + "'");
    if (symmetry != "general" && symmetry != "symmetric")
        fail_io("mm_read: unsupported symmetry '" + symmetry +
                "'; general and symmetric only");
    bool symmetric = symmetry == "symmetric";

    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream sizes(line);
    index_t nrows = 0, ncols = 0, nnz = 0;
    if (!(sizes >> nrows >> ncols >> nnz) || nrows < 0 || ncols < 0 || nnz < 0)
        fail_io("mm_read: '" + name + "' has a malformed size line");

    std::vector<std::tuple<index_t, index_t, double>> trip;
    trip.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
    for (index_t k = 0; k < nnz; ++k) {
        index_t i = 0, j = 0;
        double v = 0.0;
        if (!(in >> i >> j >> v))
            fail_io("mm_read: '" + name + "' truncated at entry " + std::to_string(k + 1));
        if (i < 1 || i > nrows || j < 1 || j > ncols)
            fail_io("mm_read: '" + name + "' index out of range at entry " +
                    std::to_string(k + 1));
        trip.emplace_back(i - 1, j - 1, v);
        if (symmetric && i != j) trip.emplace_back(j - 1, i - 1, v);
    }
    return SparseMatrix::from_triplets(nrows, ncols, std::move(trip));
}

void mm_write(const SparseMatrix& A, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail_io("mm_write: cannot open '" + path + "' for writing");
    mm_write(A, out);
    if (!out) fail_io("mm_write: write to '" + path + "' failed");
}

void mm_write(const SparseMatrix& A, std::ostream& out) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.nrows << " " << A.ncols << " " << A.nnz() << "\n";
    char buf[64];
    for (index_t i = 0; i < A.nrows; ++i) {
        for (index_t k = A.row_starts[static_cast<std::size_t>(i)];
             k < A.row_starts[static_cast<std::size_t>(i) + 1]; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", A.values[static_cast<std::size_t>(k)]);
            out << (i + 1) << " " << (A.col_indices[static_cast<std::size_t>(k)] + 1) << " "
                << buf << "\n";
        }
    }
}

} // namespace iluamg
