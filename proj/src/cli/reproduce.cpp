#include "subpop/cli/reproduce.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "subpop/cli/output.hpp"
#include "subpop/harness.hpp"

namespace subpop::cli {

namespace {

AggregateMetrics run(ScenarioSpec spec, const AlgorithmChoice& algorithm,
                     const ReproduceOptions& options) {
    spec.algorithm = algorithm;
    spec.replications = options.replications;
    spec.master_seed = options.master_seed;
    if (options.progress) options.progress(spec.scenario_id + " " + algorithm.label());
    const auto results = run_replications(spec, options.jobs);
    return aggregate(results, spec);
}

ScenarioSpec builtin(const std::string& id) {
    auto spec = find_builtin(id);
    if (!spec) throw std::logic_error("missing builtin scenario " + id);
    return *spec;
}

std::vector<AlgorithmChoice> algorithms_for(const ScenarioSpec& spec) {
    return applicable_algorithms(spec.models, spec.params.budget);
}

int count_good(const ScenarioSpec& spec) {
    return static_cast<int>(std::count_if(spec.models.begin(), spec.models.end(), [&](const auto& m) {
        return m.theta >= spec.params.theta_min;
    }));
}

std::string fraction(double time, double scale) { return format_float(time / scale); }

// Stop time plus both event curves, each row keyed by `key`.
void curve_rows(Table& table, const std::vector<std::string>& key, const AggregateMetrics& m) {
    auto row = [&](const std::string& event, std::size_t rank, double mean, std::uint64_t censored) {
        auto r = key;
        r.insert(r.end(), {m.algorithm, m.variant, event, std::to_string(rank), format_float(mean),
                           std::to_string(censored)});
        table.rows.push_back(std::move(r));
    };
    row("stop", 0, m.t_stop.mean, m.truncated);
    for (const auto& p : m.good_identification) row("good_identification", p.rank, p.time.mean, p.censored);
    for (const auto& p : m.bad_removal) row("bad_removal", p.rank, p.time.mean, p.censored);
}

const std::vector<std::string> kCurveTail{"method", "sampler", "event", "event_rank", "mean_time",
                                          "censored_count"};

Table fig2(const ReproduceOptions& options) {
    Table t;
    t.columns = {"n_g"};
    t.columns.insert(t.columns.end(), kCurveTail.begin(), kCurveTail.end());
    for (int g = 0; g <= 10; ++g) {
        const auto spec = builtin("stylized-ng" + std::to_string(g));
        for (const auto& a : algorithms_for(spec)) curve_rows(t, {std::to_string(g)}, run(spec, a, options));
    }
    return t;
}

Table curves_for(const std::vector<std::string>& ids, const ReproduceOptions& options) {
    Table t;
    t.columns = {"scenario", "n_g"};
    t.columns.insert(t.columns.end(), kCurveTail.begin(), kCurveTail.end());
    for (const auto& id : ids) {
        const auto spec = builtin(id);
        for (const auto& a : algorithms_for(spec)) {
            curve_rows(t, {id, std::to_string(count_good(spec))}, run(spec, a, options));
        }
    }
    return t;
}

Table fig4(const ReproduceOptions& options) {
    Table t;
    t.columns = {"theta_b", "n_g", "method", "variant", "mean_selected_size", "missed_good",
                 "success_rate", "t_stop_mean"};
    for (const char* theta_b : {"0", "-0.5"}) {
        for (int g = 0; g <= 10; ++g) {
            const std::string id = std::string(theta_b) == "0" ? "stylized-ng" + std::to_string(g)
                                                                : "fig4-negative-ng" + std::to_string(g);
            const auto spec = builtin(id);
            for (const auto& a : algorithms_for(spec)) {
                const auto m = run(spec, a, options);
                t.rows.push_back({theta_b, std::to_string(g), m.algorithm, m.variant,
                                  format_float(m.mean_selected_size), format_float(m.missed_good_rate),
                                  format_float(m.success_rate), format_float(m.t_stop.mean)});
            }
        }
    }
    return t;
}

Table fig6(const ReproduceOptions& options) {
    Table t;
    t.columns = {"n_g", "method", "variant", "bonferroni", "type_i_rate", "success_rate",
                 "mean_selected_size"};
    for (int g = 0; g <= 10; ++g) {
        for (bool bonferroni : {true, false}) {
            auto spec = builtin("stylized-ng" + std::to_string(g));
            spec.params.bonferroni = bonferroni;
            for (const auto& a : algorithms_for(spec)) {
                const auto m = run(spec, a, options);
                t.rows.push_back({std::to_string(g), m.algorithm, m.variant, bonferroni ? "on" : "off",
                                  format_float(m.type_i_rate), format_float(m.success_rate),
                                  format_float(m.mean_selected_size)});
            }
        }
    }
    return t;
}

Table table1(bool binary, const ReproduceOptions& options) {
    Table t;
    t.columns = {"scenario", "theta", "method", "variant", "succ_pct", "mean_S",
                 "t_stop_frac", "t_1g_frac", "t_1b_frac"};
    for (char row : {'A', 'B', 'C', 'D', 'E'}) {
        const auto spec = builtin(std::string("table1-") + row + (binary ? "-binary" : "-normal"));
        std::string theta = "[";
        for (const auto& m : spec.models) theta += (theta.size() > 1 ? " " : "") + format_float(m.theta);
        theta += "]";
        for (const auto& a : algorithms_for(spec)) {
            const auto m = run(spec, a, options);
            const double scale = m.time_scale;
            auto first = [&](const std::vector<CurvePoint>& c) {
                return c.empty() ? std::string("NA") : fraction(c.front().time.mean, scale);
            };
            t.rows.push_back({std::string(1, row), theta, m.algorithm, m.variant,
                              format_float(m.success_rate), format_float(m.mean_selected_size),
                              fraction(m.t_stop.mean, scale), first(m.good_identification),
                              first(m.bad_removal)});
        }
    }
    return t;
}

}  // namespace

void write_table(std::ostream& out, const Table& table) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(table.columns);
    for (const auto& r : table.rows) line(r);
}

const std::vector<std::string>& reproduce_ids() {
    static const std::vector<std::string> ids{"fig2", "fig3", "fig4", "fig6",
                                              "table1-binary", "table1-normal", "appD-variance"};
    return ids;
}

Table reproduce(const std::string& id, const ReproduceOptions& options) {
    if (options.replications == 0) throw std::invalid_argument("replications must be positive");
    if (id == "fig2") return fig2(options);
    if (id == "fig3") return curves_for({"fig3-scen1", "fig3-scen2"}, options);
    if (id == "fig4") return fig4(options);
    if (id == "fig6") return fig6(options);
    if (id == "table1-binary") return table1(true, options);
    if (id == "table1-normal") return table1(false, options);
    if (id == "appD-variance") {
        return curves_for({"stylized-ng10", "appD-var-ng10-rising", "stylized-ng5",
                           "appD-var-ng5-noisy-bad"},
                          options);
    }
    throw std::invalid_argument("unknown figure or table id '" + id + "'");
}

}  // namespace subpop::cli
