// Command-line front end: solve, censor, factorize, interpret,
// truncate-compare, stability-bench. Output is buffered and written in one
// piece, so a failing run never leaves a half-written file. Exit codes:
// 0 success, 1 invalid input, 2 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gthkit/censoring.hpp"
#include "gthkit/errors.hpp"
#include "gthkit/families.hpp"
#include "gthkit/gth.hpp"
#include "gthkit/io.hpp"
#include "gthkit/rg.hpp"
#include "gthkit/stochastic.hpp"
#include "gthkit/truncation.hpp"

namespace {

using namespace gthkit;
using ordered_json = nlohmann::ordered_json;

struct ChainSource {
    std::string input;
    std::string family;
    std::string sizes_text;  // --N accepts a comma list; most commands want one
    double eps = 1e-8;
    std::uint64_t seed = 1;
    bool normalize = false;
    double row_tol = kDefaultRowTol;
};

void add_chain_options(CLI::App* sub, ChainSource& src, const char* n_help) {
    sub->add_option("--input", src.input, "transition matrix file (.stmx text)");
    sub->add_option("--family", src.family, "generated chain: bd | ncd | rand");
    sub->add_option("--N", src.sizes_text, n_help);
    sub->add_option("--eps", src.eps, "coupling for --family ncd (default 1e-8)");
    sub->add_option("--seed", src.seed, "seed for --family rand (default 1)");
    sub->add_flag("--normalize", src.normalize,
                  "rescale each input row to sum exactly 1 before validating");
    sub->add_option("--tol", src.row_tol, "row-sum validation tolerance (default 1e-12)");
}

std::vector<int> parse_sizes(const ChainSource& src) {
    if (src.sizes_text.empty()) throw ValidationError("--family needs --N");
    return parse_int_list(src.sizes_text);
}

int single_size(const ChainSource& src) {
    const std::vector<int> sizes = parse_sizes(src);
    if (sizes.size() != 1) throw ValidationError("this command takes a single --N value");
    return sizes[0];
}

StochasticMatrix load_chain(const ChainSource& src) {
    if (!src.input.empty() && !src.family.empty())
        throw ValidationError("give either --input or --family, not both");
    if (!src.input.empty()) {
        DenseMatrix d = read_matrix_file(src.input);
        if (src.normalize) {
            for (int i = 0; i < d.rows(); ++i) {
                const double s = stable_sum(d.row(i), static_cast<std::size_t>(d.cols()));
                if (!(s > 0.0))
                    throw ValidationError("cannot normalize: row " + std::to_string(i + 1) +
                                          " has a nonpositive sum");
                for (int j = 0; j < d.cols(); ++j) d(i, j) /= s;
            }
        }
        return StochasticMatrix::checked(std::move(d), src.row_tol);
    }
    if (!src.family.empty()) {
        const int n = single_size(src);
        if (src.family == "ncd") return nearly_uncoupled_chain(n, src.eps);
        if (src.family == "rand") return random_dense_chain(n, src.seed);
        return finite_family_instance(src.family, n);
    }
    throw ValidationError("provide --input or --family");
}

Backend parse_backend(const std::string& name) {
    if (name == "auto") return Backend::Auto;
    if (name == "serial") return Backend::Serial;
    if (name == "parallel") return Backend::Parallel;
    throw ValidationError("unknown backend '" + name + "' (auto | serial | parallel)");
}

std::string require_format(const std::string& format) {
    if (format != "csv" && format != "json")
        throw ValidationError("unknown format '" + format + "' (csv | json)");
    return format;
}

void deliver(const std::string& out_path, const std::string& body) {
    if (out_path.empty()) {
        std::fputs(body.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ValidationError("cannot open '" + out_path + "' for writing");
    out << body;
    if (!out) throw ValidationError("failed writing '" + out_path + "'");
}

// NaN serializes as "nan" in CSV (printf) and null in JSON.
ordered_json json_number(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

int run(int argc, char** argv) {
    CLI::App app{
        "gthkit: stationary distributions of Markov chains by subtraction-free\n"
        "elimination, censored (watched) chains, RG-factorization, and\n"
        "truncation of countable-state chains."};
    app.require_subcommand(1);
    app.fallthrough();  // --out / --backend may follow the subcommand

    std::string out_path, backend_name = "auto";
    app.add_option("--out", out_path, "write output here instead of stdout")
        ->capture_default_str();
    app.add_option("--backend", backend_name, "kernel backend: auto | serial | parallel")
        ->capture_default_str();

    // solve
    auto* solve = app.add_subcommand("solve", "stationary distribution of a finite chain");
    ChainSource solve_src;
    add_chain_options(solve, solve_src, "state count for --family");
    bool solve_compensated = false;
    std::string solve_format = "csv";
    solve->add_flag("--compensated", solve_compensated,
                    "compensated accumulation in the elimination sums");
    solve->add_option("--format", solve_format, "csv (12 digits) | json (full precision)")
        ->capture_default_str();

    // censor
    auto* censor_cmd = app.add_subcommand("censor", "watch the chain on a subset of states");
    ChainSource censor_src;
    add_chain_options(censor_cmd, censor_src, "state count for --family");
    std::string subset_text, method_name = "solve";
    censor_cmd->add_option("--subset", subset_text, "census states, e.g. 1,2,5 or E=1..4")
        ->required();
    censor_cmd->add_option("--method", method_name,
                           "complement inversion: solve | neumann (default solve)");

    // factorize
    auto* factorize_cmd =
        app.add_subcommand("factorize", "RG-factorization of I - P (R / PSI / G sections)");
    ChainSource factorize_src;
    add_chain_options(factorize_cmd, factorize_src, "state count for --family");

    // interpret
    auto* interpret_cmd = app.add_subcommand(
        "interpret", "probabilistic meaning of one elimination level as CSV");
    ChainSource interpret_src;
    add_chain_options(interpret_cmd, interpret_src, "state count for --family");
    int level = 0;
    interpret_cmd->add_option("--level", level, "elimination level in [2,N]")->required();

    // truncate-compare
    auto* trunc_cmd = app.add_subcommand(
        "truncate-compare", "augmentation strategies for a truncated countable chain");
    ChainSource trunc_src;
    add_chain_options(trunc_cmd, trunc_src, "truncation sizes, e.g. 5,10,20,40");
    trunc_src.sizes_text = "5,10,20,40";
    std::string strategies_text = "censored,last,first,uniform";
    std::string trunc_format = "csv";
    long omega = 0, omega_cap = 0;
    double stall_tol = 1e-12;
    bool no_timing = false;
    trunc_cmd->add_option("--strategies", strategies_text,
                          "comma list of censored | last | first | uniform | col:J | linear:...")
        ->capture_default_str();
    trunc_cmd->add_option("--format", trunc_format,
                          "csv | json (embeds the truncated stationary vectors)")
        ->capture_default_str();
    trunc_cmd->add_option("--omega", omega, "starting outer size (default 4N)");
    trunc_cmd->add_option("--omega-cap", omega_cap, "outer size cap (default 1024N)");
    trunc_cmd->add_option("--stall-tol", stall_tol,
                          "outer doubling stall tolerance (default 1e-12)");
    trunc_cmd->add_flag("--no-timing", no_timing,
                        "write runtime_ms as 0 so reruns are byte-identical");

    // stability-bench
    auto* bench_cmd = app.add_subcommand(
        "stability-bench", "subtraction-free elimination vs textbook elimination, "
                           "measured against the exact rational solution");
    std::string bench_family = "ncd", bench_sizes = "8,16,32", bench_eps = "1e-4,1e-8,1e-12";
    std::string bench_format = "csv";
    bool bench_compensated = false, bench_no_timing = false;
    bench_cmd->add_option("--family", bench_family, "ncd | rand")->capture_default_str();
    bench_cmd->add_option("--N", bench_sizes, "state counts")->capture_default_str();
    bench_cmd->add_option("--eps", bench_eps, "coupling values (ncd only; use 0 for rand)")
        ->capture_default_str();
    bench_cmd->add_option("--format", bench_format, "csv | json")->capture_default_str();
    bench_cmd->add_flag("--compensated", bench_compensated,
                        "compensated accumulation in the elimination sums");
    bench_cmd->add_flag("--no-timing", bench_no_timing,
                        "write the ms columns as 0 so reruns are byte-identical");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const Backend backend = parse_backend(backend_name);
        std::ostringstream body;

        if (solve->parsed()) {
            require_format(solve_format);
            const StochasticMatrix m = load_chain(solve_src);
            GthOptions opts{backend, solve_compensated};
            const ProbabilityVector pi = gth_solve(m, opts);
            if (solve_format == "csv") {
                write_probability_csv(body, pi);
            } else {
                ordered_json doc;
                doc["n"] = pi.n();
                doc["stationary"] = pi.values();
                body << doc.dump(2) << '\n';
            }
        } else if (censor_cmd->parsed()) {
            const StochasticMatrix m = load_chain(censor_src);
            const Partition e = Partition::of(m.n(), parse_subset(subset_text, m.n()));
            ComplementInverse method;
            if (method_name == "solve") {
                method = ComplementInverse::Solve;
            } else if (method_name == "neumann") {
                method = ComplementInverse::Neumann;
            } else {
                throw ValidationError("unknown method '" + method_name + "' (solve | neumann)");
            }
            const StochasticMatrix watched = censor(m, e, method, backend);
            body << "# censored onto states";
            for (int s : e.census()) body << ' ' << s;
            body << '\n';
            write_matrix_text(body, watched.dense());
        } else if (factorize_cmd->parsed()) {
            const StochasticMatrix m = load_chain(factorize_src);
            const RgFactors factors = rg_factorize(m, GthOptions{backend, false});
            write_rg_factors(body, factors);
            body << "# reconstruction_residual "
                 << format_exact(rg_reconstruction_residual(factors, m, backend)) << '\n';
        } else if (interpret_cmd->parsed()) {
            const StochasticMatrix m = load_chain(interpret_src);
            if (level < 2 || level > m.n())
                throw ValidationError("--level must lie in [2,N]");
            const EliminationTrace trace = gth_forward(m, GthOptions{backend, false});
            body << "quantity,i,j,value\n";
            for (int i = 1; i <= level; ++i)
                body << "expected_visits," << i << ',' << level << ','
                     << format_csv_value(visits_expected(trace, level, i)) << '\n';
            for (int j = 1; j < level; ++j)
                body << "entry_probability," << level << ',' << j << ','
                     << format_csv_value(first_entry_probability(trace, level, level, j))
                     << '\n';
            for (int i = 1; i < level; ++i)
                for (int j = 1; j < level; ++j)
                    body << "entry_correction," << i << ',' << j << ','
                         << format_csv_value(first_entry_probability(trace, level, i, j))
                         << '\n';
            // Removing the level leaves the chain watched on {1..level-1}.
            const DenseMatrix watched = trace.level(level - 1);
            for (int i = 1; i < level; ++i)
                for (int j = 1; j < level; ++j)
                    body << "censored_transition," << i << ',' << j << ','
                         << format_csv_value(watched(i - 1, j - 1)) << '\n';
        } else if (trunc_cmd->parsed()) {
            require_format(trunc_format);
            CountableChainSpec spec;
            std::vector<int> sizes;
            if (!trunc_src.input.empty()) {
                spec = embed_finite(load_chain(ChainSource{trunc_src.input, "", "", 0, 0,
                                                           trunc_src.normalize,
                                                           trunc_src.row_tol}),
                                    trunc_src.input);
                sizes = parse_sizes(trunc_src);
            } else if (!trunc_src.family.empty()) {
                spec = family_from_id(trunc_src.family);
                sizes = parse_sizes(trunc_src);
            } else {
                throw ValidationError("provide --input or --family");
            }
            std::vector<AugmentationStrategy> strategies;
            for (const std::string& piece : [&] {
                     std::vector<std::string> out;
                     std::istringstream parts(strategies_text);
                     std::string p;
                     while (std::getline(parts, p, ','))
                         if (!p.empty()) out.push_back(p);
                     return out;
                 }())
                strategies.push_back(AugmentationStrategy::parse(piece));
            OuterTruncation outer;
            outer.omega = omega;
            outer.omega_cap = omega_cap;
            outer.tol = stall_tol;
            const TruncationReport report =
                compare_augmentations(spec, sizes, strategies, outer, backend);
            for (const TruncationRow& row : report.rows)
                if (!row.ok)
                    std::cerr << "skipping " << row.strategy << " N=" << row.n << ": "
                              << row.error << '\n';
            if (trunc_format == "csv") {
                body << "family,strategy,N,l1_error,runtime_ms\n";
                for (const TruncationRow& row : report.rows)
                    body << report.family << ',' << row.strategy << ',' << row.n << ','
                         << (row.ok ? format_csv_value(row.l1_error) : "nan") << ','
                         << (no_timing ? "0" : format_csv_value(row.runtime_ms)) << '\n';
            } else {
                ordered_json doc;
                doc["family"] = report.family;
                doc["rows"] = ordered_json::array();
                for (const TruncationRow& row : report.rows) {
                    ordered_json r;
                    r["strategy"] = row.strategy;
                    r["N"] = row.n;
                    r["l1_error"] = row.ok ? json_number(row.l1_error) : ordered_json(nullptr);
                    r["runtime_ms"] = no_timing ? 0.0 : row.runtime_ms;
                    if (row.strategy == "censored") r["stall_gap"] = row.stall_gap;
                    if (!row.ok) r["error"] = row.error;
                    r["stationary"] = row.stationary;
                    doc["rows"].push_back(std::move(r));
                }
                body << doc.dump(2) << '\n';
            }
        } else if (bench_cmd->parsed()) {
            require_format(bench_format);
            const std::vector<StabilityRow> rows =
                stability_benchmark(bench_family, parse_int_list(bench_sizes),
                                    parse_double_list(bench_eps),
                                    GthOptions{backend, bench_compensated});
            for (const StabilityRow& row : rows)
                if (!row.note.empty())
                    std::cerr << row.family << " N=" << row.n << ": " << row.note << '\n';
            if (bench_format == "csv") {
                body << "family,N,eps,gth_relerr,ge_relerr,gth_ms,ge_ms\n";
                for (const StabilityRow& row : rows)
                    body << row.family << ',' << row.n << ',' << format_csv_value(row.eps)
                         << ',' << format_csv_value(row.gth_relerr) << ','
                         << format_csv_value(row.ge_relerr) << ','
                         << (bench_no_timing ? "0" : format_csv_value(row.gth_ms)) << ','
                         << (bench_no_timing ? "0" : format_csv_value(row.ge_ms)) << '\n';
            } else {
                ordered_json doc;
                doc["rows"] = ordered_json::array();
                for (const StabilityRow& row : rows) {
                    ordered_json r;
                    r["family"] = row.family;
                    r["N"] = row.n;
                    r["eps"] = row.eps;
                    r["gth_relerr"] = json_number(row.gth_relerr);
                    r["ge_relerr"] = json_number(row.ge_relerr);
                    r["gth_ms"] = bench_no_timing ? 0.0 : row.gth_ms;
                    r["ge_ms"] = bench_no_timing ? 0.0 : row.ge_ms;
                    if (!row.note.empty()) r["note"] = row.note;
                    doc["rows"].push_back(std::move(r));
                }
                body << doc.dump(2) << '\n';
            }
        }

        deliver(out_path, body.str());
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
