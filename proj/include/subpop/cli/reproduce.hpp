#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace subpop::cli {

/// A plain comparison table, written as CSV.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

void write_table(std::ostream& out, const Table& table);

struct ReproduceOptions {
    std::uint64_t replications = 1000;
    std::uint64_t master_seed = 1;
    unsigned jobs = 1;
    std::function<void(const std::string&)> progress;  // optional, one call per run
};

const std::vector<std::string>& reproduce_ids();

/// Runs every scenario and algorithm variant behind a figure or table id.
/// Throws std::invalid_argument for an unknown id.
Table reproduce(const std::string& id, const ReproduceOptions& options);

}  // namespace subpop::cli
