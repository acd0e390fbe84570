#include "subpop/cli/output.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace subpop::cli {

const std::vector<std::string>& events_columns() {
    static const std::vector<std::string> cols{"scenario_id", "replication", "algorithm",
                                               "variant",     "t",           "event_kind",
                                               "group_id",    "verdict_flag"};
    return cols;
}

const std::vector<std::string>& metrics_columns() {
    static const std::vector<std::string> cols{
        "scenario_id",     "algorithm",         "variant",          "replications",
        "failed",          "truncated",         "time_scale",       "success_rate",
        "mean_selected_size", "t_stop_mean",    "t_stop_sd",        "t_stop_min",
        "t_stop_median",   "t_stop_max",        "t_stop_frac",      "t_1g_mean",
        "t_1g_frac",       "t_1b_mean",         "t_1b_frac",        "type_i_rate",
        "missed_good_rate", "good_identification_curve", "bad_removal_curve"};
    return cols;
}

const std::vector<std::string>& curves_columns() {
    static const std::vector<std::string> cols{"scenario_id", "algorithm", "variant",
                                               "event",       "rank",      "count",
                                               "mean_time",   "sd_time",   "censored"};
    return cols;
}

std::string format_float(double value) {
    if (!std::isfinite(value)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

namespace {

void write_header(std::ostream& out, const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double first_time(const std::vector<CurvePoint>& curve) {
    return curve.empty() ? std::nan("") : curve.front().time.mean;
}

// rank:count:mean:censored joined by ';'
std::string encode_curve(const std::vector<CurvePoint>& curve) {
    std::string s;
    for (const auto& p : curve) {
        if (!s.empty()) s += ';';
        s += std::to_string(p.rank) + ':' + std::to_string(p.time.count) + ':' +
             format_float(p.time.mean) + ':' + std::to_string(p.censored);
    }
    return s;
}

std::uint64_t to_count(const std::string& s, std::size_t line) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("events line " + std::to_string(line) + ": bad integer '" + s + "'");
    }
}

}  // namespace

void write_events_header(std::ostream& out) { write_header(out, events_columns()); }

void write_events(std::ostream& out, const ScenarioSpec& spec,
                  std::span<const ReplicationResult> results) {
    const std::string prefix = spec.scenario_id + ',';
    const std::string algo = ',' + spec.algorithm.name() + ',' + spec.algorithm.variant() + ',';
    for (const auto& r : results) {
        if (!r.ok()) {
            out << prefix << r.replication << algo << "0,failed,,0\n";
            continue;
        }
        for (const auto& e : r.trace->events) {
            out << prefix << r.replication << algo << e.t << ',' << to_string(e.kind) << ',';
            if (e.group) out << (*e.group + 1);
            out << ',' << (e.verdict ? 1 : 0) << '\n';
        }
    }
}

void write_metrics_header(std::ostream& out) { write_header(out, metrics_columns()); }

void write_metrics_row(std::ostream& out, const AggregateMetrics& m) {
    const double scale = m.time_scale;
    const double t1g = first_time(m.good_identification);
    const double t1b = first_time(m.bad_removal);
    out << m.scenario_id << ',' << m.algorithm << ',' << m.variant << ',' << m.replications << ','
        << m.failed << ',' << m.truncated << ',' << format_float(scale) << ','
        << format_float(m.success_rate) << ',' << format_float(m.mean_selected_size) << ','
        << format_float(m.t_stop.mean) << ',' << format_float(m.t_stop.sd) << ','
        << format_float(m.t_stop.min) << ',' << format_float(m.t_stop.median) << ','
        << format_float(m.t_stop.max) << ',' << format_float(m.t_stop.mean / scale) << ','
        << format_float(t1g) << ',' << format_float(t1g / scale) << ',' << format_float(t1b)
        << ',' << format_float(t1b / scale) << ',' << format_float(m.type_i_rate) << ','
        << format_float(m.missed_good_rate) << ',' << encode_curve(m.good_identification) << ','
        << encode_curve(m.bad_removal) << '\n';
}

void write_curves_header(std::ostream& out) { write_header(out, curves_columns()); }

void write_curves(std::ostream& out, const AggregateMetrics& m) {
    auto emit = [&](const char* event, const std::vector<CurvePoint>& curve) {
        for (const auto& p : curve) {
            out << m.scenario_id << ',' << m.algorithm << ',' << m.variant << ',' << event << ','
                << p.rank << ',' << p.time.count << ',' << format_float(p.time.mean) << ','
                << format_float(p.time.sd) << ',' << p.censored << '\n';
        }
    };
    emit("good_identification", m.good_identification);
    emit("bad_removal", m.bad_removal);
}

std::vector<EventsBlock> read_events(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("events file is empty");
    if (split(line, ',') != events_columns()) throw std::runtime_error("events file: unexpected header");

    std::vector<EventsBlock> blocks;
    std::map<std::string, std::size_t> block_of;
    // per block: replication -> (events, failed)
    std::vector<std::map<std::uint64_t, std::pair<std::vector<TrialEvent>, bool>>> pending;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != events_columns().size()) {
            throw std::runtime_error("events line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(events_columns().size()) + " fields");
        }
        const std::string key = cells[0] + '\x1f' + cells[2] + '\x1f' + cells[3];
        auto [it, fresh] = block_of.try_emplace(key, blocks.size());
        if (fresh) {
            blocks.push_back({cells[0], cells[2], cells[3], {}});
            pending.emplace_back();
        }
        auto& slot = pending[it->second][to_count(cells[1], line_no)];
        if (cells[5] == "failed") {
            slot.second = true;
            continue;
        }
        const auto kind = parse_event_kind(cells[5]);
        if (!kind) {
            throw std::runtime_error("events line " + std::to_string(line_no) +
                                     ": unknown event kind '" + cells[5] + "'");
        }
        TrialEvent e;
        e.t = to_count(cells[4], line_no);
        e.kind = *kind;
        if (!cells[6].empty()) {
            const auto id = to_count(cells[6], line_no);
            if (id == 0) throw std::runtime_error("events line " + std::to_string(line_no) + ": group ids start at 1");
            e.group = id - 1;
        }
        e.verdict = cells[7] == "1";
        slot.first.push_back(e);
    }

    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (auto& [rep, entry] : pending[b]) {
            ReplicationResult r;
            r.replication = rep;
            if (entry.second) {
                r.error = "failed replication";
            } else {
                r.trace = trace_from_events(std::move(entry.first));
            }
            blocks[b].results.push_back(std::move(r));
        }
    }
    return blocks;
}

nlohmann::json manifest_to_json(const RunManifest& m) {
    return {{"tool", "subpop"},
            {"tool_version", kToolVersion},
            {"schema_version", kSchemaVersion},
            {"scenario_id", m.scenario_id},
            {"master_seed", m.master_seed},
            {"replications", m.replications},
            {"algorithms", m.algorithms},
            {"jobs", m.jobs},
            {"started_at", m.started_at},
            {"finished_at", m.finished_at},
            {"files", m.files},
            {"columns",
             {{"events", events_columns()},
              {"metrics", metrics_columns()},
              {"curves", curves_columns()}}},
            {"scenario", m.scenario}};
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

}  // namespace subpop::cli
