#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "subpop/cli/commands.hpp"
#include "subpop/cli/output.hpp"
#include "subpop/cli/reproduce.hpp"
#include "subpop/cli/scenario_io.hpp"

using namespace subpop;
using namespace subpop::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("subpop_test_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string error_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ScenarioError& e) {
        return e.what();
    }
    return {};
}

const char* kMinimal = R"({
  "scenario_id": "tiny",
  "groups": [{"theta": 0.4, "prevalence": 1.0, "law": "direct_normal", "sigma_sq": 1.0}],
  "params": {"alpha": 0.05, "beta": 0.1, "theta_min": 0.5, "n0": 1, "budget": {"unbounded_cap": 100000}},
  "algorithm": {"name": "adaggi", "sampler": "lcb"},
  "replications": 3,
  "master_seed": 9
})";

}  // namespace

TEST_CASE("load a minimal scenario") {
    const auto spec = parse_scenario(kMinimal);
    CHECK(spec.scenario_id == "tiny");
    CHECK(spec.groups() == 1);
    CHECK(spec.params.budget.unbounded);
    CHECK(spec.params.budget.limit == 100000);
    CHECK(spec.replications == 3);
    CHECK(spec.master_seed == 9);
    CHECK(spec.algorithm.label() == "adaggi-lcb");
}

TEST_CASE("scenario diagnostics") {
    std::string bad_bernoulli = R"({"scenario_id": "b", "groups": [
        {"theta": 0.0, "prevalence": 0.5, "law": "paired_bernoulli", "mu0": 0.4},
        {"theta": 0.8, "prevalence": 0.5, "law": "paired_bernoulli", "mu0": 0.4}],
      "params": {"alpha": 0.025, "beta": 0.1, "theta_min": 0.2, "n0": 5, "budget": 800}})";
    CHECK(error_of(bad_bernoulli).find("group 2") != std::string::npos);

    std::string short_prevalence = R"({"scenario_id": "p", "groups": [
        {"theta": 0.0, "prevalence": 0.45, "law": "direct_normal"},
        {"theta": 0.0, "prevalence": 0.45, "law": "direct_normal"}],
      "params": {"alpha": 0.05, "beta": 0.1, "theta_min": 0.5, "budget": 100}})";
    CHECK(error_of(short_prevalence).find("prevalences") != std::string::npos);

    const std::string syntax = error_of("{\n  \"scenario_id\": \"x\",\n  \"groups\": [\n}");
    CHECK(syntax.find("parse error") != std::string::npos);
    CHECK(syntax.find("line 4") != std::string::npos);

    std::string wrong_type = kMinimal;
    wrong_type.replace(wrong_type.find("0.05"), 4, "\"a\"");
    CHECK(error_of(wrong_type).find("params.alpha") != std::string::npos);

    std::string bad_delta = kMinimal;
    bad_delta.replace(bad_delta.find("0.05"), 4, "0.5");
    CHECK(error_of(bad_delta).find("alpha") != std::string::npos);

    std::string missing = R"({"scenario_id": "m", "groups": [{"theta": 0, "law": "direct_normal"}]})";
    CHECK(error_of(missing).find("params") != std::string::npos);

    CHECK_THROWS_AS(load_scenario("/nonexistent/file.json"), ScenarioError);
    CHECK_THROWS_AS(resolve_scenario("not-a-builtin"), ScenarioError);
}

TEST_CASE("round trip for every builtin and every file") {
    for (const auto& spec : builtin_scenarios()) {
        const auto j = scenario_to_json(spec);
        CHECK(scenario_to_json(scenario_from_json(j)) == j);
    }
    for (const auto& entry : fs::directory_iterator(fs::path(SUBPOP_TEST_DATA) / "../../scenarios")) {
        const auto original = nlohmann::json::parse(slurp(entry.path()));
        CHECK(scenario_to_json(load_scenario(entry.path())) == original);
    }
}

TEST_CASE("field order does not matter") {
    const std::string reordered = R"({
      "master_seed": 9, "replications": 3,
      "algorithm": {"sampler": "lcb", "name": "adaggi"},
      "params": {"budget": {"unbounded_cap": 100000}, "n0": 1, "theta_min": 0.5, "beta": 0.1, "alpha": 0.05},
      "groups": [{"sigma_sq": 1.0, "law": "direct_normal", "prevalence": 1.0, "theta": 0.4}],
      "scenario_id": "tiny"})";
    CHECK(scenario_to_json(parse_scenario(reordered)) == scenario_to_json(parse_scenario(kMinimal)));
}

TEST_CASE("output schema is pinned") {
    CHECK(events_columns() == std::vector<std::string>{"scenario_id", "replication", "algorithm", "variant",
                                                       "t", "event_kind", "group_id", "verdict_flag"});
    CHECK(metrics_columns().size() == 23);
    CHECK(metrics_columns().front() == "scenario_id");
    CHECK(curves_columns().size() == 9);
    CHECK(format_float(0.123456789) == "0.123457");
    CHECK(format_float(1234567.0) == "1.23457e+06");
    CHECK(format_float(std::nan("")) == "NA");
}

TEST_CASE("serialized traces re-aggregate to the same metrics") {
    for (const char* id : {"table1-C-binary", "stylized-ng3"}) {
        auto spec = *find_builtin(id);
        spec.replications = 30;
        std::stringstream events, direct, reread;
        write_events_header(events);
        std::vector<AggregateMetrics> in_memory;
        for (const auto& a : applicable_algorithms(spec.models, spec.params.budget)) {
            auto s = spec;
            s.algorithm = a;
            const auto results = run_replications(s, 1);
            write_events(events, s, results);
            write_metrics_row(direct, aggregate(results, s));
        }
        const auto blocks = read_events(events);
        for (const auto& block : blocks) {
            auto s = spec;
            s.algorithm = *parse_algorithm(block.algorithm + "-" + block.variant, spec.models.front().law);
            if (block.algorithm == "gsds") s.algorithm = AlgorithmChoice::gsds_for(spec.models.front().law);
            write_metrics_row(reread, aggregate(block.results, s));
        }
        CHECK(reread.str() == direct.str());
    }
}

TEST_CASE("read_events rejects malformed input") {
    std::stringstream empty;
    CHECK_THROWS(read_events(empty));
    std::stringstream bad("scenario_id,replication,algorithm,variant,t,event_kind,group_id,verdict_flag\n"
                          "s,0,adaggi,lcb,5,exploded,1,0\n");
    CHECK_THROWS(read_events(bad));
}

TEST_CASE("simulate writes manifest, events and metrics deterministically") {
    TempDir tmp;
    std::stringstream out, err;
    SimulateOptions o;
    o.scenario = "table1-B-binary";
    o.replications = 20;
    o.seed = 7;
    o.algorithm = "all";
    o.out_dir = (tmp.path / "a").string();
    REQUIRE(cmd_simulate(o, out, err) == kOk);
    for (const char* f : {"manifest.json", "events.csv", "metrics.csv", "curves.csv"})
        CHECK(fs::exists(tmp.path / "a" / f));

    const auto manifest = nlohmann::json::parse(slurp(tmp.path / "a" / "manifest.json"));
    CHECK(manifest["master_seed"] == 7);
    CHECK(manifest["replications"] == 20);
    CHECK(manifest["schema_version"] == kSchemaVersion);
    CHECK(manifest["columns"]["events"].size() == 8);
    CHECK(manifest["algorithms"].size() == 8);
    CHECK(scenario_from_json(manifest["scenario"]).master_seed == 7);

    o.out_dir = (tmp.path / "b").string();
    o.jobs = 3;
    REQUIRE(cmd_simulate(o, out, err) == kOk);
    for (const char* f : {"events.csv", "metrics.csv", "curves.csv"})
        CHECK(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f));

    o.out_dir = (tmp.path / "c").string();
    o.seed = 8;
    REQUIRE(cmd_simulate(o, out, err) == kOk);
    CHECK(slurp(tmp.path / "a" / "events.csv") != slurp(tmp.path / "c" / "events.csv"));
}

TEST_CASE("simulate error paths") {
    TempDir tmp;
    std::stringstream out, err;
    SimulateOptions o;
    o.scenario = "table1-B-binary";
    o.out_dir = (tmp.path / "x").string();
    o.replications = 0;
    CHECK(cmd_simulate(o, out, err) == kUsage);
    CHECK(err.str().find("reps") != std::string::npos);

    o.replications = 2;
    o.algorithm = "adaggi-nonsense";
    CHECK(cmd_simulate(o, out, err) == kUsage);

    o.algorithm = "gsds";
    o.scenario = "stylized-ng2";
    CHECK(cmd_simulate(o, out, err) == kUsage);

    o.algorithm.reset();
    o.scenario = "/no/such/file.json";
    CHECK(cmd_simulate(o, out, err) == kUsage);

    o.scenario = "table1-B-binary";
    std::ofstream(tmp.path / "blocker") << "x";
    o.out_dir = (tmp.path / "blocker" / "sub").string();
    CHECK(cmd_simulate(o, out, err) == kRuntime);
}

TEST_CASE("jobs resolution") {
    CHECK(resolve_jobs(3u) == 3);
    CHECK(resolve_jobs(0u) == 1);
    setenv("SUBPOP_JOBS", "5", 1);
    CHECK(resolve_jobs(std::nullopt) == 5);
    CHECK(resolve_jobs(2u) == 2);
    setenv("SUBPOP_JOBS", "lots", 1);
    CHECK_THROWS_AS(resolve_jobs(std::nullopt), std::invalid_argument);
    unsetenv("SUBPOP_JOBS");
    CHECK(resolve_jobs(std::nullopt) == 1);
}

TEST_CASE("reproduce tables") {
    std::stringstream out, err;
    ReproduceArgs args;
    args.id = "fig99";
    CHECK(cmd_reproduce(args, out, err) == kUsage);

    ReproduceOptions o;
    o.replications = 5;
    const auto t1 = reproduce("table1-binary", o);
    CHECK(t1.columns == std::vector<std::string>{"scenario", "theta", "method", "variant", "succ_pct",
                                                 "mean_S", "t_stop_frac", "t_1g_frac", "t_1b_frac"});
    CHECK(t1.rows.size() == 5 * 8);

    o.replications = 2;
    const auto f2 = reproduce("fig2", o);
    CHECK(f2.columns == std::vector<std::string>{"n_g", "method", "sampler", "event", "event_rank",
                                                 "mean_time", "censored_count"});
    CHECK_FALSE(f2.rows.empty());
    CHECK_THROWS_AS(reproduce("nope", o), std::invalid_argument);
    o.replications = 0;
    CHECK_THROWS_AS(reproduce("fig3", o), std::invalid_argument);
}
