#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace subpop::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kRuntime = 2 };

struct SimulateOptions {
    std::string scenario;  // builtin id or path
    std::optional<std::uint64_t> replications;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::optional<std::string> algorithm;  // label, or "all"
    std::optional<unsigned> jobs;
};

struct ReproduceArgs {
    std::string id;
    std::uint64_t replications = 1000;
    std::uint64_t seed = 1;
    std::optional<unsigned> jobs;
    std::string out_file;  // empty: stdout
    bool quiet = false;
};

/// --jobs if given, else SUBPOP_JOBS, else 1. Throws std::invalid_argument
/// on a malformed environment value.
unsigned resolve_jobs(std::optional<unsigned> flag);

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);
int cmd_reproduce(const ReproduceArgs& args, std::ostream& out, std::ostream& err);
int cmd_list(std::ostream& out);
int cmd_export_scenario(const std::string& id, std::ostream& out, std::ostream& err);

}  // namespace subpop::cli
