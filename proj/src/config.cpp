#include "iluamg/config.hpp"
#include "iluamg/error.hpp"
#include "iluamg/matrix_market.hpp"
#include "iluamg/problems.hpp"
#include "iluamg/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace iluamg {

namespace {

struct KeyDoc {
    const char* key;
    const char* def;
    const char* doc;
};

// The single source of truth for keys, defaults, and the generated reference.
const KeyDoc kRegistry[] = {
    {"matrix", "", "matrix source: .mtx path or generator spec, e.g. poisson2d(32,32)"},
    {"rhs", "ones-times-A", "right-hand side: ones-times-A | random(<seed>) | file:<path>"},
    {"amg.theta", "0.25", "strength-of-connection threshold in (0,1]"},
    {"amg.max_levels", "25", "maximum hierarchy depth"},
    {"amg.coarse_size", "16", "direct-solve threshold for the coarsest level"},
    {"amg.coarsening", "rs_greedy", "C/F splitting: rs_greedy | pmis"},
    {"amg.interpolation", "direct", "interpolation: direct | mm_ext"},
    {"amg.cycles_nu", "1", "recursive calls per level (1 = V-cycle, 2 = W-cycle)"},
    {"amg.pmis_seed", "1", "seed of the PMIS weight jitter"},
    {"smoother.kind", "gauss_seidel",
     "finest-level smoother: jacobi | l1_jacobi | gauss_seidel | poly_gs | ilu | schur_ilut"},
    {"smoother.sweeps", "2", "sweeps per pre/post smoothing phase"},
    {"smoother.poly_degree", "2", "Neumann-series degree of poly_gs"},
    {"smoother.levels", "1", "how many finest levels use smoother.kind"},
    {"smoother.fallback.kind", "gauss_seidel", "smoother for the remaining levels"},
    {"smoother.fallback.sweeps", "2", "sweeps of the fallback smoother"},
    {"smoother.fallback.poly_degree", "2", "poly_gs degree of the fallback smoother"},
    {"ilu.variant", "ilu0", "factorization: ilu0 | ilut"},
    {"ilu.droptol", "0.001", "ILUT drop tolerance (relative to the A-row 2-norm)"},
    {"ilu.lfill", "5", "ILUT max fill entries per row in each of L and U"},
    {"ilu.pivot_patch", "error", "zero-pivot policy: error | replace"},
    {"scaling", "row", "U-factor scaling: none | row | row_col"},
    {"trisolve.mode", "richardson", "triangular solves: direct | richardson"},
    {"trisolve.m_lower", "10", "Richardson iterations for the L solve"},
    {"trisolve.m_upper", "10", "Richardson iterations for the U solve"},
    {"krylov.method", "gmres", "outer solver: gmres | fgmres"},
    {"krylov.restart", "50", "restart length"},
    {"krylov.max_iters", "200", "iteration cap"},
    {"krylov.tol", "1e-5", "convergence tolerance"},
    {"krylov.criterion", "relres", "stopping criterion: relres | nrbe"},
    {"krylov.record_history", "true", "record per-iterate history"},
    {"krylov.anorm_seed", "7", "seed of the |A|_2 power iteration (NRBE denominator)"},
    {"schur.blocks", "4", "sub-domain count of the Schur smoother"},
    {"schur.blocks_list", "1,2,4,8", "block counts swept by schur-solve"},
    {"schur.ilut.droptol", "0.001", "ILUT drop tolerance of the Schur block factors"},
    {"schur.ilut.lfill", "5", "ILUT fill limit of the Schur block factors"},
    {"schur.trisolve.mL", "10", "Richardson iterations for the Schur block L solves"},
    {"schur.trisolve.mU", "10", "Richardson iterations for the Schur block U solves"},
    {"schur.scaling", "row", "scaling of the Schur block factors: none | row | row_col"},
    {"striping.threshold", "1e8", "max/median column ratio that flags striping"},
    {"bench.m_max", "20", "bench-trisolve sweeps m = 1..m_max"},
    {"bench.seed", "123", "bench-trisolve right-hand-side seed"},
    {"bench.probes", "4", "probe vectors of the tail-norm estimate"},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

SolverConfig::SolverConfig() {
    for (const auto& kd : kRegistry) values_[kd.key] = kd.def;
}

void SolverConfig::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end())
        fail_invalid("config: unknown key '" + key + "' (see the config reference)");
    it->second = value;
}

const std::string& SolverConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) fail_invalid("config: unknown key '" + key + "'");
    return it->second;
}

bool SolverConfig::has(const std::string& key) const { return values_.count(key) != 0; }

double SolverConfig::get_double(const std::string& key) const {
    const std::string& v = get(key);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        fail_invalid("config: key '" + key + "' expects a number, got '" + v + "'");
    return x;
}

index_t SolverConfig::get_index(const std::string& key) const {
    const std::string& v = get(key);
    index_t x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || p != v.data() + v.size())
        fail_invalid("config: key '" + key + "' expects an integer, got '" + v + "'");
    return x;
}

bool SolverConfig::get_bool(const std::string& key) const {
    const std::string& v = get(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail_invalid("config: key '" + key + "' expects a boolean, got '" + v + "'");
}

void SolverConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_io("config: cannot open '" + path + "'");
    load_stream(in, path);
}

void SolverConfig::load_stream(std::istream& in, const std::string& name) {
    std::string line;
    index_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail_invalid("config: " + name + ":" + std::to_string(lineno) +
                         ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            set(key, value);
        } catch (const Error& e) {
            fail_invalid("config: " + name + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

std::string SolverConfig::reference() {
    std::ostringstream out;
    out << "# Configuration reference: key = default  (description)\n";
    for (const auto& kd : kRegistry) {
        out << kd.key << " = " << kd.def;
        out << "  # " << kd.doc << "\n";
    }
    return out.str();
}

namespace {

SmootherKind parse_smoother_kind(const std::string& v, const std::string& key) {
    if (v == "jacobi") return SmootherKind::jacobi;
    if (v == "l1_jacobi") return SmootherKind::l1_jacobi;
    if (v == "gauss_seidel") return SmootherKind::gauss_seidel;
    if (v == "poly_gs") return SmootherKind::poly_gs;
    if (v == "ilu") return SmootherKind::ilu;
    if (v == "schur_ilut") return SmootherKind::schur_ilut;
    fail_invalid("config: key '" + key + "' has unknown smoother kind '" + v + "'");
}

} // namespace

IluParams ilu_params_from(const SolverConfig& cfg, const std::string& prefix) {
    IluParams p;
    const std::string variant_key = prefix == "ilu." ? "ilu.variant" : "";
    if (!variant_key.empty()) {
        const std::string& v = cfg.get(variant_key);
        if (v == "ilu0")
            p.variant = IluVariant::ilu0;
        else if (v == "ilut")
            p.variant = IluVariant::ilut;
        else
            fail_invalid("config: ilu.variant must be ilu0 or ilut, got '" + v + "'");
        p.droptol = cfg.get_double("ilu.droptol");
        p.lfill = cfg.get_index("ilu.lfill");
        const std::string& pp = cfg.get("ilu.pivot_patch");
        if (pp == "error")
            p.pivot_patch = PivotPatch::error;
        else if (pp == "replace")
            p.pivot_patch = PivotPatch::replace;
        else
            fail_invalid("config: ilu.pivot_patch must be error or replace");
    } else {
        p.variant = IluVariant::ilut;
        p.droptol = cfg.get_double(prefix + "droptol");
        p.lfill = cfg.get_index(prefix + "lfill");
        p.pivot_patch = PivotPatch::error;
    }
    if (p.droptol < 0.0) fail_invalid("config: droptol must be >= 0");
    if (p.lfill < 0) fail_invalid("config: lfill must be >= 0");
    return p;
}

TriSolveConfig trisolve_from(const SolverConfig& cfg) {
    TriSolveConfig ts;
    const std::string& mode = cfg.get("trisolve.mode");
    if (mode == "direct")
        ts.mode = TriSolveMode::direct;
    else if (mode == "richardson")
        ts.mode = TriSolveMode::richardson;
    else
        fail_invalid("config: trisolve.mode must be direct or richardson");
    ts.m_lower = cfg.get_index("trisolve.m_lower");
    ts.m_upper = cfg.get_index("trisolve.m_upper");
    if (ts.mode == TriSolveMode::richardson && (ts.m_lower < 1 || ts.m_upper < 1))
        fail_invalid("config: richardson iteration counts must be >= 1");
    return ts;
}

ScalingKind scaling_from(const SolverConfig& cfg, const std::string& key) {
    const std::string& v = cfg.get(key);
    if (v == "none") return ScalingKind::none;
    if (v == "row") return ScalingKind::row;
    if (v == "row_col") return ScalingKind::row_col;
    fail_invalid("config: key '" + key + "' must be none, row, or row_col");
}

SmootherConfig smoother_from(const SolverConfig& cfg) {
    SmootherConfig sc;
    sc.kind = parse_smoother_kind(cfg.get("smoother.kind"), "smoother.kind");
    sc.sweeps = cfg.get_index("smoother.sweeps");
    if (sc.sweeps < 1) fail_invalid("config: smoother.sweeps must be >= 1");
    sc.poly_degree = cfg.get_index("smoother.poly_degree");
    if (sc.poly_degree < 0) fail_invalid("config: smoother.poly_degree must be >= 0");
    if (sc.kind == SmootherKind::schur_ilut) {
        sc.ilu_params = ilu_params_from(cfg, "schur.ilut.");
        sc.scaling = scaling_from(cfg, "schur.scaling");
        sc.schur_blocks = cfg.get_index("schur.blocks");
        sc.trisolve = trisolve_from(cfg);
        sc.trisolve.m_lower = cfg.get_index("schur.trisolve.mL");
        sc.trisolve.m_upper = cfg.get_index("schur.trisolve.mU");
    } else {
        sc.ilu_params = ilu_params_from(cfg);
        sc.scaling = scaling_from(cfg);
        sc.trisolve = trisolve_from(cfg);
    }
    return sc;
}

SmootherConfig fallback_smoother_from(const SolverConfig& cfg) {
    SmootherConfig sc;
    sc.kind = parse_smoother_kind(cfg.get("smoother.fallback.kind"), "smoother.fallback.kind");
    sc.sweeps = cfg.get_index("smoother.fallback.sweeps");
    if (sc.sweeps < 1) fail_invalid("config: smoother.fallback.sweeps must be >= 1");
    sc.poly_degree = cfg.get_index("smoother.fallback.poly_degree");
    sc.ilu_params = ilu_params_from(cfg);
    sc.scaling = scaling_from(cfg);
    sc.trisolve = trisolve_from(cfg);
    sc.schur_blocks = cfg.get_index("schur.blocks");
    return sc;
}

SmootherConfig schur_smoother_from(const SolverConfig& cfg) {
    SmootherConfig sc;
    sc.kind = SmootherKind::schur_ilut;
    sc.sweeps = cfg.get_index("smoother.sweeps");
    sc.poly_degree = cfg.get_index("smoother.poly_degree");
    sc.ilu_params = ilu_params_from(cfg, "schur.ilut.");
    sc.scaling = scaling_from(cfg, "schur.scaling");
    sc.schur_blocks = cfg.get_index("schur.blocks");
    sc.trisolve = trisolve_from(cfg);
    sc.trisolve.m_lower = cfg.get_index("schur.trisolve.mL");
    sc.trisolve.m_upper = cfg.get_index("schur.trisolve.mU");
    return sc;
}

AmgParams amg_params_from(const SolverConfig& cfg) {
    AmgParams p;
    p.theta = cfg.get_double("amg.theta");
    p.max_levels = cfg.get_index("amg.max_levels");
    p.coarse_size = cfg.get_index("amg.coarse_size");
    const std::string& c = cfg.get("amg.coarsening");
    if (c == "rs_greedy")
        p.coarsening = Coarsening::rs_greedy;
    else if (c == "pmis")
        p.coarsening = Coarsening::pmis;
    else
        fail_invalid("config: amg.coarsening must be rs_greedy or pmis");
    const std::string& ip = cfg.get("amg.interpolation");
    if (ip == "direct")
        p.interpolation = Interpolation::direct;
    else if (ip == "mm_ext")
        p.interpolation = Interpolation::mm_ext;
    else
        fail_invalid("config: amg.interpolation must be direct or mm_ext");
    p.cycles_nu = cfg.get_index("amg.cycles_nu");
    p.pmis_seed = static_cast<std::uint64_t>(cfg.get_index("amg.pmis_seed"));
    p.plan.finest = smoother_from(cfg);
    p.plan.finest_levels = cfg.get_index("smoother.levels");
    if (p.plan.finest_levels < 1) fail_invalid("config: smoother.levels must be >= 1");
    p.plan.fallback = fallback_smoother_from(cfg);
    return p;
}

KrylovParams krylov_params_from(const SolverConfig& cfg) {
    KrylovParams p;
    const std::string& m = cfg.get("krylov.method");
    if (m == "gmres")
        p.method = KrylovMethod::gmres;
    else if (m == "fgmres")
        p.method = KrylovMethod::fgmres;
    else
        fail_invalid("config: krylov.method must be gmres or fgmres");
    p.restart = cfg.get_index("krylov.restart");
    p.max_iters = cfg.get_index("krylov.max_iters");
    p.tol = cfg.get_double("krylov.tol");
    const std::string& c = cfg.get("krylov.criterion");
    if (c == "relres")
        p.criterion = StopCriterion::relres;
    else if (c == "nrbe")
        p.criterion = StopCriterion::nrbe;
    else
        fail_invalid("config: krylov.criterion must be relres or nrbe");
    p.record_history = cfg.get_bool("krylov.record_history");
    p.anorm_seed = static_cast<std::uint64_t>(cfg.get_index("krylov.anorm_seed"));
    return p;
}

DenseVector make_rhs(const SolverConfig& cfg, const SparseMatrix& A) {
    const std::string& rhs = cfg.get("rhs");
    if (rhs == "ones-times-A") {
        DenseVector ones(static_cast<std::size_t>(A.ncols), 1.0);
        return spmv(A, ones);
    }
    if (rhs.rfind("random(", 0) == 0 && rhs.back() == ')') {
        const std::string seed_str = rhs.substr(7, rhs.size() - 8);
        char* end = nullptr;
        const unsigned long long seed = std::strtoull(seed_str.c_str(), &end, 10);
        if (end == seed_str.c_str() || *end != '\0')
            fail_invalid("config: rhs random(<seed>) expects an integer seed");
        return random_uniform(A.nrows, seed);
    }
    if (rhs.rfind("file:", 0) == 0) {
        const std::string path = rhs.substr(5);
        std::ifstream in(path);
        if (!in) fail_io("config: cannot open rhs file '" + path + "'");
        DenseVector b;
        double v = 0.0;
        while (in >> v) b.push_back(v);
        if (static_cast<index_t>(b.size()) != A.nrows)
            fail_invalid("config: rhs file '" + path + "' has " + std::to_string(b.size()) +
                         " entries, expected " + std::to_string(A.nrows));
        return b;
    }
    fail_invalid("config: rhs must be ones-times-A, random(<seed>), or file:<path>");
}

SparseMatrix load_matrix_from(const SolverConfig& cfg) {
    const std::string& m = cfg.get("matrix");
    if (m.empty()) fail_invalid("config: key 'matrix' is required");
    if (is_generator_spec(m)) return generate_problem(m);
    return mm_read(m);
}

} // namespace iluamg
