#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <modmetrics/modmetrics.hpp>

using namespace modmetrics;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path test_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("modmetrics-cli-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = test_dir() / ("stdout." + std::to_string(counter));
    const fs::path err = test_dir() / ("stderr." + std::to_string(counter));
    ++counter;
    const std::string cmd = std::string(MODMETRICS_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path make_facts(const std::string& name, const std::string& extra_args) {
    const fs::path path = test_dir() / name;
    const CliResult r = run_cli("generate --out " + path.string() + " " + extra_args);
    REQUIRE(r.exit_code == 0);
    return path;
}

} // namespace

TEST_CASE("cli: generate then validate") {
    const fs::path facts = make_facts(
        "gen1.json", "--classes 6 --methods 40 --attributes 18 --seed 5 --intra-bias 0.5");
    const CliResult v = run_cli("validate --facts " + facts.string());
    CHECK(v.exit_code == 0);
    CHECK(v.out.find("ok:") == 0);
    CHECK(v.out.find("40 methods") != std::string::npos);
}

TEST_CASE("cli: generate is byte-deterministic per seed") {
    const fs::path a = make_facts("det-a.json", "--classes 5 --methods 30 --seed 9");
    const fs::path b = make_facts("det-b.json", "--classes 5 --methods 30 --seed 9");
    const fs::path c = make_facts("det-c.json", "--classes 5 --methods 30 --seed 10");
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) != slurp(c));
}

TEST_CASE("cli: analyze output is engine-independent byte for byte") {
    const fs::path facts = make_facts(
        "engines.json", "--classes 8 --methods 90 --attributes 30 --seed 12 --intra-bias 0.4");
    const fs::path seq = test_dir() / "seq.json";
    const fs::path par = test_dir() / "par.json";
    CHECK(run_cli("analyze --facts " + facts.string() + " --engine sequential --out " +
                  seq.string())
              .exit_code == 0);
    CHECK(run_cli("analyze --facts " + facts.string() +
                  " --engine parallel --workers 3 --out " + par.string())
              .exit_code == 0);
    const std::string seq_bytes = slurp(seq);
    CHECK_FALSE(seq_bytes.empty());
    CHECK(seq_bytes == slurp(par));
}

TEST_CASE("cli: analyze reports the workload of a known system size") {
    const fs::path facts =
        make_facts("junit-sized.json",
                   "--classes 231 --methods 1200 --attributes 500 --seed 0 --kmax-calls 2 "
                   "--kmax-accesses 2");
    const CliResult r = run_cli("analyze --facts " + facts.string());
    REQUIRE(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc["workload"]["m"] == 1200);
    CHECK(doc["workload"]["c"] == 231);
    CHECK(doc["workload"]["n_total"] == 1276662);
}

TEST_CASE("cli: analyze text format") {
    const fs::path facts = make_facts("text.json", "--classes 3 --methods 12 --seed 2");
    const CliResult r = run_cli("analyze --facts " + facts.string() + " --format text");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("12 methods") != std::string::npos);
    CHECK(r.out.find("n_total=") != std::string::npos);
}

TEST_CASE("cli: suggest matches the library exactly") {
    const fs::path facts = make_facts(
        "parity.json",
        "--classes 7 --methods 60 --attributes 25 --seed 33 --intra-bias 0.3");
    const CliResult r = run_cli("suggest --facts " + facts.string() +
                                " --threshold-similarity 0.2 --threshold-lcom 0.4 "
                                "--threshold-cbo 1 --combine union");
    REQUIRE(r.exit_code == 0);

    const LoadResult loaded = load_facts(facts.string());
    const MetricsReport report = full_report(loaded.model, loaded.deps);
    ThresholdOverrides ov;
    ov.similarity = 0.2;
    ov.lcom = 0.4;
    ov.cbo = 1.0;
    const Thresholds t = compute_thresholds(report, ov);
    const std::vector<MoveSuggestion> s = suggest_all(
        loaded.model, loaded.deps, report, t,
        {Criterion::Similarity, Criterion::Cohesion, Criterion::Coupling}, Combine::Union);
    CHECK(r.out == render_suggestions_json(loaded.model, s, t));
}

TEST_CASE("cli: suggest respects criteria selection and intersection") {
    const fs::path facts = make_facts(
        "criteria.json", "--classes 6 --methods 50 --attributes 20 --seed 44 --intra-bias 0.3");
    const CliResult cohesion_only =
        run_cli("suggest --facts " + facts.string() + " --criteria cohesion");
    REQUIRE(cohesion_only.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(cohesion_only.out);
    for (const auto& s : doc["suggestions"])
        CHECK(s["criteria"] == nlohmann::json::array({"cohesion"}));

    const CliResult inter = run_cli("suggest --facts " + facts.string() +
                                    " --criteria similarity,coupling --combine intersection");
    REQUIRE(inter.exit_code == 0);
    const nlohmann::json idoc = nlohmann::json::parse(inter.out);
    for (const auto& s : idoc["suggestions"])
        CHECK(s["criteria"] == nlohmann::json::array({"coupling", "similarity"}));
}

TEST_CASE("cli: suggest runs are byte-identical") {
    const fs::path facts = make_facts(
        "stable.json", "--classes 9 --methods 70 --attributes 30 --seed 21 --intra-bias 0.5");
    const CliResult a = run_cli("suggest --facts " + facts.string());
    const CliResult b = run_cli("suggest --facts " + facts.string());
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    const CliResult c = run_cli("suggest --facts " + facts.string() + " --engine parallel --workers 4");
    REQUIRE(c.exit_code == 0);
    CHECK(a.out == c.out);
}

TEST_CASE("cli: bench emits well-formed csv") {
    const CliResult r = run_cli(
        "bench --methods 300 --classes 30 --attributes 120 --seed 3 --workers 2");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string header;
    REQUIRE(std::getline(lines, header));
    CHECK(header == "m,c,n_total,engine,workers,wall_seconds,speedup");

    const std::uint64_t n_total = estimate_workload_counts(300, 30).n_total;
    std::string row;
    int rows = 0;
    bool saw_sequential = false, saw_parallel = false;
    while (std::getline(lines, row)) {
        ++rows;
        std::istringstream cells(row);
        std::string m, c, total, engine, workers, wall, speedup;
        REQUIRE(std::getline(cells, m, ','));
        REQUIRE(std::getline(cells, c, ','));
        REQUIRE(std::getline(cells, total, ','));
        REQUIRE(std::getline(cells, engine, ','));
        REQUIRE(std::getline(cells, workers, ','));
        REQUIRE(std::getline(cells, wall, ','));
        REQUIRE(std::getline(cells, speedup, ','));
        CHECK(m == "300");
        CHECK(c == "30");
        CHECK(total == std::to_string(n_total));
        CHECK(std::stod(wall) >= 0.0);
        CHECK(std::stod(speedup) > 0.0);
        if (engine == "sequential") {
            saw_sequential = true;
            CHECK(workers == "1");
            CHECK(speedup == "1.000000");
        } else if (engine == "parallel") {
            saw_parallel = true;
            CHECK(workers == "2");
        }
    }
    CHECK(rows == 2);
    CHECK(saw_sequential);
    CHECK(saw_parallel);
}

TEST_CASE("cli: warnings for repaired input go to stderr") {
    const fs::path path = test_dir() / "selfcall.json";
    std::ofstream(path) << R"({"schema_version": "1", "classes": [
        {"id": 0, "name": "A", "attributes": [],
         "methods": [{"id": 0, "name": "f", "calls": [0], "accesses": []}]}
    ]})";
    const CliResult r = run_cli("validate --facts " + path.string());
    CHECK(r.exit_code == 0);
    CHECK(r.err.find("self-call") != std::string::npos);
}

TEST_CASE("cli: exit codes distinguish failure classes") {
    SECTION("missing file is an I/O error") {
        const CliResult r = run_cli("analyze --facts /nonexistent/nope.json");
        CHECK(r.exit_code == 4);
    }
    SECTION("malformed json is a parse error") {
        const fs::path path = test_dir() / "broken.json";
        std::ofstream(path) << "{not json";
        const CliResult r = run_cli("analyze --facts " + path.string());
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("line") != std::string::npos);
    }
    SECTION("inconsistent facts are a validation error") {
        const fs::path path = test_dir() / "invalid.json";
        std::ofstream(path) << R"({"schema_version": "1", "classes": [
            {"id": 0, "name": "A", "attributes": [],
             "methods": [{"id": 0, "name": "f", "calls": [5], "accesses": []}]}
        ]})";
        const CliResult r = run_cli("validate --facts " + path.string());
        CHECK(r.exit_code == 3);
        CHECK(r.err.find("5") != std::string::npos);
    }
    SECTION("usage errors") {
        CHECK(run_cli("analyze").exit_code == 64);               // missing --facts
        CHECK(run_cli("frobnicate").exit_code == 64);            // unknown subcommand
        CHECK(run_cli("analyze --facts x --engine gpu").exit_code == 64);
        CHECK(run_cli("suggest --facts x --criteria novelty").exit_code == 64);
        CHECK(run_cli("generate --out x --classes 0 --methods 5").exit_code == 64);
    }
}

TEST_CASE("cli: all-candidates mode is a superset") {
    const fs::path facts = make_facts(
        "allc.json", "--classes 6 --methods 48 --attributes 20 --seed 55 --intra-bias 0.3");
    const CliResult best = run_cli("suggest --facts " + facts.string() + " --criteria cohesion");
    const CliResult all =
        run_cli("suggest --facts " + facts.string() + " --criteria cohesion --all-candidates");
    REQUIRE(best.exit_code == 0);
    REQUIRE(all.exit_code == 0);
    const auto nbest = nlohmann::json::parse(best.out)["suggestions"].size();
    const auto nall = nlohmann::json::parse(all.out)["suggestions"].size();
    CHECK(nall >= nbest);
}
