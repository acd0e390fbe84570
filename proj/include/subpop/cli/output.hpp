#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "subpop/harness.hpp"

namespace subpop::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

const std::vector<std::string>& events_columns();
const std::vector<std::string>& metrics_columns();
const std::vector<std::string>& curves_columns();

/// %.6g, with NA for non-finite values.
std::string format_float(double value);

void write_events_header(std::ostream& out);
/// One row per trace event; a failed replication gets a single "failed" row.
void write_events(std::ostream& out, const ScenarioSpec& spec,
                  std::span<const ReplicationResult> results);

void write_metrics_header(std::ostream& out);
void write_metrics_row(std::ostream& out, const AggregateMetrics& m);

void write_curves_header(std::ostream& out);
void write_curves(std::ostream& out, const AggregateMetrics& m);

/// Replications of one algorithm label read back from an events file.
struct EventsBlock {
    std::string scenario_id;
    std::string algorithm;
    std::string variant;
    std::vector<ReplicationResult> results;
};

/// Parses an events file. Blocks come out in first-appearance order.
std::vector<EventsBlock> read_events(std::istream& in);

struct RunManifest {
    std::string scenario_id;
    std::uint64_t master_seed = 0;
    std::uint64_t replications = 0;
    std::vector<std::string> algorithms;
    unsigned jobs = 1;
    std::string started_at;
    std::string finished_at;
    nlohmann::json scenario;
    std::vector<std::string> files;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);

/// UTC, ISO 8601.
std::string utc_timestamp();

}  // namespace subpop::cli
