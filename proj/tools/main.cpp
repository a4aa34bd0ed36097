// iluamg command-line driver. Talks to the solver library exclusively
// through the C API in iluamg.h.
//
// Exit codes: 0 converged/succeeded, 1 ran but failed its criterion,
// 2 invalid input, 3 numerical breakdown.

#include <CLI11.hpp>
#include <iluamg.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

struct ConfigHandle {
    iluamg_config* cfg = nullptr;
    ~ConfigHandle() { iluamg_config_free(cfg); }
};

struct ReportHandle {
    iluamg_report* rep = nullptr;
    ~ReportHandle() { iluamg_report_free(rep); }
};

struct CommonOpts {
    std::string config_path;
    std::string matrix;
    std::vector<std::string> sets;
    bool json = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "configuration file (flat dotted keys)");
    cmd->add_option("-m,--matrix", opts.matrix,
                    "matrix: .mtx path or generator spec, e.g. poisson2d(32,32)");
    cmd->add_option("--set", opts.sets, "override a config key, e.g. --set amg.theta=0.5")
        ->expected(-1);
    cmd->add_flag("--json", opts.json, "print the summary as a JSON object");
}

int fail(int status) {
    std::cerr << "error: " << iluamg_last_error() << "\n";
    return status;
}

int build_config(const CommonOpts& opts, ConfigHandle& ch) {
    if (int s = iluamg_config_create(&ch.cfg); s != ILUAMG_OK) return s;
    if (!opts.config_path.empty()) {
        if (int s = iluamg_config_load(ch.cfg, opts.config_path.c_str()); s != ILUAMG_OK)
            return s;
    }
    if (!opts.matrix.empty()) {
        if (int s = iluamg_config_set(ch.cfg, "matrix", opts.matrix.c_str()); s != ILUAMG_OK)
            return s;
    }
    for (const std::string& kv : opts.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
            return ILUAMG_ERR_INVALID;
        }
        if (int s = iluamg_config_set(ch.cfg, kv.substr(0, eq).c_str(),
                                      kv.substr(eq + 1).c_str());
            s != ILUAMG_OK)
            return s;
    }
    return ILUAMG_OK;
}

bool write_text_file(const std::string& path, const char* text) {
    std::ofstream out(path);
    if (!out) return false;
    out << (text ? text : "");
    return static_cast<bool>(out);
}

void print_summary(const ReportHandle& rh, bool json) {
    if (json)
        std::cout << iluamg_report_json(rh.rep) << "\n";
    else
        std::cout << iluamg_report_text(rh.rep);
}

using RunFn = int (*)(const iluamg_matrix*, const iluamg_config*, iluamg_report**);

int run_with_config(const CommonOpts& opts, RunFn fn, ReportHandle& rh) {
    ConfigHandle ch;
    if (int s = build_config(opts, ch); s != ILUAMG_OK) return fail(s);
    const int status = fn(nullptr, ch.cfg, &rh.rep);
    if (status != ILUAMG_OK && status != ILUAMG_NOT_CONVERGED) return fail(status);
    return status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"iluamg: AMG solver with ILU smoothers and iterative triangular solves"};
    app.require_subcommand(0, 1);
    bool show_reference = false;
    bool show_version = false;
    app.add_flag("--config-reference", show_reference,
                 "print every config key with its default and exit");
    app.add_flag("--version", show_version, "print the library version and exit");

    // analyze
    CommonOpts an_opts;
    std::string an_csv;
    auto* analyze = app.add_subcommand("analyze",
                                       "ILU factorization diagnostics: departure from "
                                       "normality, scalings, conditioning, striping");
    add_common(analyze, an_opts);
    analyze->add_option("--csv", an_csv, "write the machine-readable row to this CSV file");

    // solve
    CommonOpts so_opts;
    std::string so_history = "history.csv";
    auto* solve = app.add_subcommand("solve", "AMG-preconditioned (F)GMRES solve");
    add_common(solve, so_opts);
    solve->add_option("--history", so_history,
                      "path of the per-iterate history CSV (default history.csv)");

    // bench-trisolve
    CommonOpts be_opts;
    std::string be_out;
    auto* bench = app.add_subcommand(
        "bench-trisolve", "Richardson-vs-direct error curves for the triangular solves");
    add_common(bench, be_opts);
    bench->add_option("--out", be_out, "write the CSV here instead of stdout");

    // schur-solve
    CommonOpts sc_opts;
    std::string sc_blocks;
    std::string sc_csv;
    auto* schur = app.add_subcommand(
        "schur-solve", "solve once per block count with the ILUT Schur-complement smoother");
    add_common(schur, sc_opts);
    schur->add_option("--blocks", sc_blocks, "comma-separated block counts, e.g. 1,2,4,8");
    schur->add_option("--csv", sc_csv, "write the per-p table to this CSV file");

    // gen
    std::string gen_spec, gen_out;
    auto* gen = app.add_subcommand("gen", "write a generated problem as Matrix Market");
    gen->add_option("spec", gen_spec, "generator spec, e.g. poisson2d(32,32)")->required();
    gen->add_option("out", gen_out, "output .mtx path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : ILUAMG_ERR_INVALID;
    }

    if (show_version) {
        std::cout << "iluamg " << iluamg_version() << "\n";
        return 0;
    }
    if (show_reference) {
        std::cout << iluamg_config_reference();
        return 0;
    }

    if (analyze->parsed()) {
        ReportHandle rh;
        const int status = run_with_config(an_opts, &iluamg_run_analyze, rh);
        if (status != ILUAMG_OK && status != ILUAMG_NOT_CONVERGED) return status;
        print_summary(rh, an_opts.json);
        if (!an_csv.empty() &&
            !write_text_file(an_csv, iluamg_report_table_csv(rh.rep, "analyze"))) {
            std::cerr << "error: cannot write '" << an_csv << "'\n";
            return ILUAMG_ERR_INVALID;
        }
        return status;
    }

    if (solve->parsed()) {
        ReportHandle rh;
        const int status = run_with_config(so_opts, &iluamg_run_solve, rh);
        if (status != ILUAMG_OK && status != ILUAMG_NOT_CONVERGED) return status;
        if (!write_text_file(so_history, iluamg_report_table_csv(rh.rep, "history"))) {
            std::cerr << "error: cannot write '" << so_history << "'\n";
            return ILUAMG_ERR_INVALID;
        }
        print_summary(rh, so_opts.json);
        if (!so_opts.json) std::cout << "history_csv = " << so_history << "\n";
        return status;
    }

    if (bench->parsed()) {
        ReportHandle rh;
        const int status = run_with_config(be_opts, &iluamg_run_bench_trisolve, rh);
        if (status != ILUAMG_OK && status != ILUAMG_NOT_CONVERGED) return status;
        const char* csv = iluamg_report_table_csv(rh.rep, "bench");
        if (be_out.empty()) {
            if (be_opts.json) print_summary(rh, true);
            std::cout << (csv ? csv : "");
        } else {
            if (!write_text_file(be_out, csv)) {
                std::cerr << "error: cannot write '" << be_out << "'\n";
                return ILUAMG_ERR_INVALID;
            }
            print_summary(rh, be_opts.json);
        }
        return status;
    }

    if (schur->parsed()) {
        if (!sc_blocks.empty())
            sc_opts.sets.push_back("schur.blocks_list=" + sc_blocks);
        ReportHandle rh;
        const int status = run_with_config(sc_opts, &iluamg_run_schur_solve, rh);
        if (status != ILUAMG_OK && status != ILUAMG_NOT_CONVERGED) return status;
        print_summary(rh, sc_opts.json);
        const char* csv = iluamg_report_table_csv(rh.rep, "schur");
        if (!sc_csv.empty()) {
            if (!write_text_file(sc_csv, csv)) {
                std::cerr << "error: cannot write '" << sc_csv << "'\n";
                return ILUAMG_ERR_INVALID;
            }
        } else if (!sc_opts.json) {
            std::cout << (csv ? csv : "");
        }
        return status;
    }

    if (gen->parsed()) {
        iluamg_matrix* m = nullptr;
        if (int s = iluamg_matrix_generate(gen_spec.c_str(), &m); s != ILUAMG_OK)
            return fail(s);
        const int s = iluamg_matrix_write(m, gen_out.c_str());
        iluamg_matrix_free(m);
        if (s != ILUAMG_OK) return fail(s);
        return ILUAMG_OK;
    }

    std::cout << app.help();
    return 0;
}
