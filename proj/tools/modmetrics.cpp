// modmetrics command line front end.
//
// Subcommands: analyze, suggest, bench, generate, validate.
// Exit codes: 0 success, 2 parse error, 3 validation error, 4 I/O error,
// 64 usage error, 1 anything else.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <modmetrics/modmetrics.hpp>

namespace {

using namespace modmetrics;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;
constexpr int kExitUsage = 64;

unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

struct RunConfig {
    std::string facts_path;
    std::string out_path; // empty: stdout
    std::string engine = "sequential";
    unsigned workers = default_workers();
    std::string format = "json";
    std::vector<std::string> criteria; // empty: all
    std::string combine = "union";
    std::optional<double> thr_similarity;
    std::optional<double> thr_lcom;
    std::optional<double> thr_cbo;
    bool all_candidates = false;
};

struct GenerateConfig {
    GeneratorConfig gen;
    std::string out_path;
};

struct BenchConfig {
    GeneratorConfig gen;
    unsigned workers = default_workers();
    std::string out_path;
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

void write_output(const std::string& out_path, const std::string& bytes) {
    if (out_path.empty()) {
        if (std::fwrite(bytes.data(), 1, bytes.size(), stdout) != bytes.size())
            throw IoError("write error on stdout");
        std::fflush(stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + out_path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("write error on " + out_path);
}

void print_warnings(const LoadResult& loaded) {
    for (const std::string& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
}

MetricsReport compute_report(const LoadResult& loaded, const RunConfig& cfg) {
    if (cfg.engine == "parallel")
        return parallel_full_report(loaded.model, loaded.deps, cfg.workers);
    return full_report(loaded.model, loaded.deps);
}

int cmd_analyze(const RunConfig& cfg) {
    const LoadResult loaded = load_facts(cfg.facts_path);
    print_warnings(loaded);
    const MetricsReport report = compute_report(loaded, cfg);
    write_output(cfg.out_path, cfg.format == "text" ? render_report_text(loaded.model, report)
                                                    : render_report_json(loaded.model, report));
    return kExitOk;
}

std::vector<Criterion> parse_criteria(const std::vector<std::string>& names) {
    if (names.empty())
        return {Criterion::Similarity, Criterion::Cohesion, Criterion::Coupling};
    std::vector<Criterion> out;
    for (const std::string& n : names) {
        if (n == "similarity") out.push_back(Criterion::Similarity);
        else if (n == "cohesion") out.push_back(Criterion::Cohesion);
        else if (n == "coupling") out.push_back(Criterion::Coupling);
    }
    return out;
}

int cmd_suggest(const RunConfig& cfg) {
    const LoadResult loaded = load_facts(cfg.facts_path);
    print_warnings(loaded);
    const MetricsReport report = compute_report(loaded, cfg);
    ThresholdOverrides overrides;
    overrides.similarity = cfg.thr_similarity;
    overrides.lcom = cfg.thr_lcom;
    overrides.cbo = cfg.thr_cbo;
    const Thresholds thresholds = compute_thresholds(report, overrides);
    const Combine combine =
        cfg.combine == "intersection" ? Combine::Intersection : Combine::Union;
    SuggestOptions opts;
    opts.all_candidates = cfg.all_candidates;
    const std::vector<MoveSuggestion> suggestions = suggest_all(
        loaded.model, loaded.deps, report, thresholds, parse_criteria(cfg.criteria), combine, opts);
    write_output(cfg.out_path,
                 cfg.format == "text"
                     ? render_suggestions_text(loaded.model, suggestions, thresholds)
                     : render_suggestions_json(loaded.model, suggestions, thresholds));
    return kExitOk;
}

int cmd_validate(const std::string& facts_path) {
    const LoadResult loaded = load_facts(facts_path); // throws on any violation
    print_warnings(loaded);
    std::string summary = "ok: " + std::to_string(loaded.model.class_count()) + " classes, " +
                          std::to_string(loaded.model.method_count()) + " methods, " +
                          std::to_string(loaded.model.attribute_count()) + " attributes\n";
    write_output("", summary);
    return kExitOk;
}

int cmd_generate(const GenerateConfig& cfg) {
    const GeneratedSystem g = generate(cfg.gen);
    write_output(cfg.out_path, facts_to_json(g.model, g.deps));
    return kExitOk;
}

// Keeps timed results observable so the loops cannot be optimized out.
volatile double g_bench_sink = 0.0;

// One cohesion-improvement pass: pairwise similarities, per-class lcom and
// cbo, then what-if rescoring of the strongest cross-class pairs. Both
// engines run the same pass; only the metric kernels differ.
template <class SimilarityFn, class ClassFn>
double timed_pass(const SystemModel& model, const DependencyTable& deps,
                  SimilarityFn similarities, ClassFn class_metrics) {
    const auto start = std::chrono::steady_clock::now();

    const std::vector<SimilarityEntry> sims = similarities();
    const ClassMetrics cm = class_metrics();

    std::vector<SimilarityEntry> cross;
    for (const SimilarityEntry& e : sims)
        if (model.method_owner[e.first] != model.method_owner[e.second]) cross.push_back(e);
    std::sort(cross.begin(), cross.end(), [](const SimilarityEntry& a, const SimilarityEntry& b) {
        if (a.value != b.value) return a.value > b.value;
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    if (cross.size() > 64) cross.resize(64);

    double checksum = 0.0;
    for (const SimilarityEntry& e : cross) {
        const WhatIfMetrics fwd =
            what_if_move(e.first, model.method_owner[e.first], model.method_owner[e.second], model, deps);
        const WhatIfMetrics rev =
            what_if_move(e.second, model.method_owner[e.second], model.method_owner[e.first], model, deps);
        checksum += fwd.lcom_origin_after + fwd.lcom_dest_after + rev.lcom_origin_after +
                    rev.lcom_dest_after;
    }
    for (double v : cm.lcom) checksum += v;
    checksum += static_cast<double>(sims.size());
    g_bench_sink = checksum;

    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

BenchReport run_bench(const BenchConfig& cfg) {
    const GeneratedSystem g = generate(cfg.gen);
    const SystemModel& model = g.model;
    const DependencyTable& deps = g.deps;
    const WorkloadEstimate workload = estimate_workload(model, deps);

    const double seq_wall = timed_pass(
        model, deps, [&] { return all_similarities(model, deps); },
        [&] {
            ClassMetrics cm;
            cm.lcom.resize(model.class_count());
            cm.cbo.resize(model.class_count());
            for (ClassId c = 0; c < model.class_count(); ++c) {
                cm.lcom[c] = lcom_normalized(c, model, deps);
                cm.cbo[c] = cbo(c, model, deps);
            }
            return cm;
        });
    const double par_wall = timed_pass(
        model, deps, [&] { return parallel_similarities(model, deps, cfg.workers); },
        [&] { return parallel_class_metrics(model, deps, cfg.workers); });

    BenchReport report;
    BenchRow seq;
    seq.m = model.method_count();
    seq.c = model.class_count();
    seq.n_total = workload.n_total;
    seq.engine = "sequential";
    seq.workers = 1;
    seq.wall_seconds = seq_wall;
    seq.speedup = 1.0;
    report.rows.push_back(seq);

    BenchRow par = seq;
    par.engine = "parallel";
    par.workers = cfg.workers;
    par.wall_seconds = par_wall;
    par.speedup = par_wall > 0.0 ? seq_wall / par_wall : 0.0;
    report.rows.push_back(par);
    return report;
}

int cmd_bench(const BenchConfig& cfg) {
    const BenchReport report = run_bench(cfg);
    write_output(cfg.out_path, render_bench_csv(report.rows));
    return kExitOk;
}

void add_generator_flags(CLI::App* cmd, GeneratorConfig& gen, bool require_counts) {
    auto* classes = cmd->add_option("--classes", gen.n_classes, "Number of classes")
                        ->check(CLI::PositiveNumber);
    auto* methods = cmd->add_option("--methods", gen.n_methods, "Number of methods");
    cmd->add_option("--attributes", gen.n_attributes, "Number of attributes");
    cmd->add_option("--kmax-calls", gen.k_max_calls, "Max calls drawn per method");
    cmd->add_option("--kmax-accesses", gen.k_max_accesses, "Max accesses drawn per method");
    cmd->add_option("--intra-bias", gen.intra_class_bias,
                    "Probability a dependency stays inside its class")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--seed", gen.seed, "Generator seed");
    if (require_counts) {
        classes->required();
        methods->required();
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modularity metrics and move-method suggestions for object-oriented systems"};
    app.require_subcommand(1);

    RunConfig run;
    GenerateConfig gen_cfg;
    gen_cfg.gen.k_max_calls = 4;
    gen_cfg.gen.k_max_accesses = 4;
    BenchConfig bench_cfg;
    bench_cfg.gen.k_max_calls = 4;
    bench_cfg.gen.k_max_accesses = 4;
    std::string validate_path;

    CLI::App* analyze = app.add_subcommand("analyze", "Compute all metrics of a facts file");
    analyze->add_option("--facts", run.facts_path, "Facts file to analyze")->required();
    analyze->add_option("--out", run.out_path, "Output path (default stdout)");
    analyze->add_option("--engine", run.engine, "Metrics engine")
        ->check(CLI::IsMember({"sequential", "parallel"}));
    analyze->add_option("--workers", run.workers, "Worker threads for the parallel engine")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--format", run.format, "Output format")
        ->check(CLI::IsMember({"json", "text"}));

    CLI::App* suggest = app.add_subcommand("suggest", "Propose move-method refactorings");
    suggest->add_option("--facts", run.facts_path, "Facts file to analyze")->required();
    suggest->add_option("--out", run.out_path, "Output path (default stdout)");
    suggest->add_option("--engine", run.engine, "Metrics engine")
        ->check(CLI::IsMember({"sequential", "parallel"}));
    suggest->add_option("--workers", run.workers, "Worker threads for the parallel engine")
        ->check(CLI::PositiveNumber);
    suggest->add_option("--criteria", run.criteria, "Criteria to apply (default: all)")
        ->delimiter(',')
        ->check(CLI::IsMember({"similarity", "cohesion", "coupling"}));
    suggest->add_option("--combine", run.combine, "How to merge criteria results")
        ->check(CLI::IsMember({"union", "intersection"}));
    suggest->add_option("--threshold-similarity", run.thr_similarity,
                        "Similarity threshold (default: mean of stored values)")
        ->check(CLI::NonNegativeNumber);
    suggest->add_option("--threshold-lcom", run.thr_lcom,
                        "Lcom threshold (default: mean over classes)")
        ->check(CLI::NonNegativeNumber);
    suggest->add_option("--threshold-cbo", run.thr_cbo, "Cbo threshold (default: mean over classes)")
        ->check(CLI::NonNegativeNumber);
    suggest->add_flag("--all-candidates", run.all_candidates,
                      "Report every passing destination, not just the best");
    suggest->add_option("--format", run.format, "Output format")
        ->check(CLI::IsMember({"json", "text"}));

    CLI::App* bench = app.add_subcommand("bench", "Time both engines on a synthetic system");
    add_generator_flags(bench, bench_cfg.gen, true);
    bench->add_option("--workers", bench_cfg.workers, "Worker threads for the parallel engine")
        ->check(CLI::PositiveNumber);
    bench->add_option("--out", bench_cfg.out_path, "CSV output path (default stdout)");

    CLI::App* generate_cmd = app.add_subcommand("generate", "Write a reproducible synthetic facts file");
    add_generator_flags(generate_cmd, gen_cfg.gen, true);
    generate_cmd->add_option("--out", gen_cfg.out_path, "Facts output path")->required();

    CLI::App* validate_cmd = app.add_subcommand("validate", "Check a facts file for consistency");
    validate_cmd->add_option("--facts", validate_path, "Facts file to validate")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(run);
        if (suggest->parsed()) return cmd_suggest(run);
        if (bench->parsed()) return cmd_bench(bench_cfg);
        if (generate_cmd->parsed()) return cmd_generate(gen_cfg);
        if (validate_cmd->parsed()) return cmd_validate(validate_path);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        for (const Violation& v : e.violations()) std::cerr << "  - " << v.message << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
