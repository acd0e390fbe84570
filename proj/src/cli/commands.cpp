#include "subpop/cli/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "subpop/cli/output.hpp"
#include "subpop/cli/reproduce.hpp"
#include "subpop/cli/scenario_io.hpp"

namespace subpop::cli {

namespace fs = std::filesystem;

unsigned resolve_jobs(std::optional<unsigned> flag) {
    if (flag) return std::max(1u, *flag);
    const char* env = std::getenv("SUBPOP_JOBS");
    if (!env || !*env) return 1;
    try {
        std::size_t used = 0;
        const long v = std::stol(env, &used);
        if (used != std::string(env).size() || v < 1) throw std::invalid_argument(env);
        return static_cast<unsigned>(v);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("SUBPOP_JOBS must be a positive integer, got '") + env + "'");
    }
}

namespace {

std::ofstream open_output(const fs::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

}  // namespace

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
    ScenarioSpec base;
    std::vector<ScenarioSpec> runs;
    unsigned jobs = 1;
    try {
        base = resolve_scenario(options.scenario);
        if (options.replications) base.replications = *options.replications;
        if (options.seed) base.master_seed = *options.seed;
        if (base.replications == 0) throw std::invalid_argument("--reps must be positive");
        jobs = resolve_jobs(options.jobs);

        std::vector<AlgorithmChoice> algorithms;
        if (!options.algorithm) {
            algorithms.push_back(base.algorithm);
        } else if (*options.algorithm == "all") {
            algorithms = applicable_algorithms(base.models, base.params.budget);
        } else {
            auto a = parse_algorithm(*options.algorithm, base.models.front().law);
            if (!a) throw std::invalid_argument("unknown algorithm '" + *options.algorithm + "'");
            algorithms.push_back(*a);
        }
        for (const auto& a : algorithms) {
            ScenarioSpec spec = base;
            spec.algorithm = a;
            spec.validate();
            runs.push_back(std::move(spec));
        }
    } catch (const std::exception& e) {
        err << "subpop simulate: " << e.what() << '\n';
        return kUsage;
    }

    try {
        const fs::path dir = options.out_dir;
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

        RunManifest manifest;
        manifest.scenario_id = base.scenario_id;
        manifest.master_seed = base.master_seed;
        manifest.replications = base.replications;
        manifest.jobs = jobs;
        manifest.scenario = scenario_to_json(base);
        manifest.files = {"events.csv", "metrics.csv", "curves.csv"};
        manifest.started_at = utc_timestamp();

        auto events = open_output(dir / "events.csv");
        auto metrics = open_output(dir / "metrics.csv");
        auto curves = open_output(dir / "curves.csv");
        write_events_header(events);
        write_metrics_header(metrics);
        write_curves_header(curves);

        std::uint64_t failed = 0;
        for (const auto& spec : runs) {
            manifest.algorithms.push_back(spec.algorithm.label());
            const auto results = run_replications(spec, jobs);
            const auto m = aggregate(results, spec);
            failed += m.failed;
            write_events(events, spec, results);
            write_metrics_row(metrics, m);
            write_curves(curves, m);
            out << spec.scenario_id << ' ' << spec.algorithm.label() << ": success "
                << format_float(m.success_rate) << "%, |S| " << format_float(m.mean_selected_size)
                << ", t_stop " << format_float(m.t_stop.mean) << '\n';
        }
        manifest.finished_at = utc_timestamp();
        auto mf = open_output(dir / "manifest.json");
        mf << manifest_to_json(manifest).dump(2) << '\n';
        for (auto* f : {&events, &metrics, &curves, &mf}) {
            f->flush();
            if (!*f) throw std::runtime_error("write failed in " + dir.string());
        }
        if (failed > 0) {
            err << "subpop simulate: " << failed << " replication(s) failed; see events.csv\n";
            return kRuntime;
        }
    } catch (const std::exception& e) {
        err << "subpop simulate: " << e.what() << '\n';
        return kRuntime;
    }
    return kOk;
}

int cmd_reproduce(const ReproduceArgs& args, std::ostream& out, std::ostream& err) {
    const auto& ids = reproduce_ids();
    if (std::find(ids.begin(), ids.end(), args.id) == ids.end()) {
        err << "subpop reproduce: unknown id '" << args.id << "' (one of:";
        for (const auto& id : ids) err << ' ' << id;
        err << ")\n";
        return kUsage;
    }
    ReproduceOptions options;
    try {
        if (args.replications == 0) throw std::invalid_argument("--reps must be positive");
        options.replications = args.replications;
        options.master_seed = args.seed;
        options.jobs = resolve_jobs(args.jobs);
    } catch (const std::exception& e) {
        err << "subpop reproduce: " << e.what() << '\n';
        return kUsage;
    }
    if (!args.quiet) options.progress = [&](const std::string& what) { err << "  running " << what << '\n'; };

    try {
        const Table table = reproduce(args.id, options);
        if (args.out_file.empty()) {
            write_table(out, table);
        } else {
            auto f = open_output(args.out_file);
            write_table(f, table);
            f.flush();
            if (!f) throw std::runtime_error("write failed: " + args.out_file);
        }
    } catch (const std::exception& e) {
        err << "subpop reproduce: " << e.what() << '\n';
        return kRuntime;
    }
    return kOk;
}

int cmd_list(std::ostream& out) {
    out << "builtin scenarios:\n";
    for (const auto& s : builtin_scenarios()) out << "  " << s.scenario_id << '\n';
    out << "reproduce ids:\n";
    for (const auto& id : reproduce_ids()) out << "  " << id << '\n';
    return kOk;
}

int cmd_export_scenario(const std::string& id, std::ostream& out, std::ostream& err) {
    const auto spec = find_builtin(id);
    if (!spec) {
        err << "subpop export-scenario: no builtin scenario '" << id << "'\n";
        return kUsage;
    }
    out << scenario_to_json(*spec).dump(2) << '\n';
    return kOk;
}

}  // namespace subpop::cli
