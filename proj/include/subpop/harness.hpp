#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subpop/adagcpi.hpp"
#include "subpop/adaggi.hpp"
#include "subpop/gsds.hpp"

namespace subpop {

enum class Family { adaggi, adagcpi, gsds };

/// One algorithm variant: AdaGGI with a sampler, AdaGCPI with a removal
/// mode, or GSDS with its configuration.
struct AlgorithmChoice {
    Family family = Family::adaggi;
    Sampler sampler = Sampler::lcb;
    RemovalMode removal = RemovalMode::fut_plus_pop;
    GsdsConfig gsds{};

    std::string name() const;     // adaggi | adagcpi | gsds
    std::string variant() const;  // lcb, fut+pop, standard, ...
    std::string label() const;    // name-variant, e.g. adaggi-lcb

    static AlgorithmChoice adaggi(Sampler sampler);
    static AlgorithmChoice adagcpi(RemovalMode mode);
    static AlgorithmChoice gsds_for(const OutcomeLaw& law);
};

/// Parses labels like "adaggi-lcb", "adagcpi-fut+pop" or "gsds". GSDS takes
/// its default configuration for `law`.
std::optional<AlgorithmChoice> parse_algorithm(const std::string& label, const OutcomeLaw& law);

/// Every variant that applies to the scenario's models and budget.
std::vector<AlgorithmChoice> applicable_algorithms(std::span<const SubgroupModel> models,
                                                   const Budget& budget);

struct ScenarioSpec {
    std::string scenario_id;
    std::vector<SubgroupModel> models;
    TrialParams params;
    AlgorithmChoice algorithm;
    std::uint64_t replications = 1000;
    std::uint64_t master_seed = 1;

    std::size_t groups() const { return models.size(); }
    void validate() const;

    /// Budget used to normalise reported times (1 for unbounded runs).
    double time_scale() const;
};

// Catalog of the experimental settings.
std::vector<SubgroupModel> stylized_models(const std::vector<double>& theta,
                                           const std::vector<double>& sigma_sq = {});
std::vector<double> stylized_theta(int good, double theta_good = 0.5, double theta_bad = 0.0);
ScenarioSpec stylized_scenario(std::string id, std::vector<SubgroupModel> models);
ScenarioSpec trial_scenario(std::string id, const std::vector<double>& theta, bool binary);
std::vector<double> table1_theta(char row);

std::vector<ScenarioSpec> builtin_scenarios();
std::optional<ScenarioSpec> find_builtin(const std::string& scenario_id);

/// Runs one replication with RngContract{master_seed, replication}.
TrialTrace run_trial(const ScenarioSpec& spec, std::uint64_t replication);

struct ReplicationResult {
    std::uint64_t replication = 0;
    std::optional<TrialTrace> trace;
    std::string error;  // non-empty for a failed replication

    bool ok() const { return trace.has_value(); }
};

/// Runs every replication, `jobs` at a time. Results are ordered by
/// replication index regardless of scheduling; per-replication exceptions
/// become failed results instead of aborting the batch.
std::vector<ReplicationResult> run_replications(const ScenarioSpec& spec, unsigned jobs = 1);

struct SummaryStat {
    std::uint64_t count = 0;
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;

    double standard_error() const;
};

SummaryStat summarize(std::vector<double> values);

/// Time of the rank-th event of a kind, conditional on that event happening.
struct CurvePoint {
    std::size_t rank = 0;
    SummaryStat time;
    std::uint64_t censored = 0;
};

struct AggregateMetrics {
    std::string scenario_id;
    std::string algorithm;
    std::string variant;
    std::uint64_t replications = 0;
    std::uint64_t failed = 0;
    std::uint64_t truncated = 0;
    double time_scale = 1.0;

    double success_rate = 0.0;  // percent
    double mean_selected_size = 0.0;
    SummaryStat t_stop;
    std::vector<CurvePoint> good_identification;  // theta_j >= theta_min
    std::vector<CurvePoint> bad_removal;          // theta_j < theta_min
    double type_i_rate = 0.0;
    double missed_good_rate = 0.0;
};

/// Prevalence-weighted true effect of a set of groups.
double true_pooled_effect(std::span<const SubgroupModel> models,
                          std::span<const GroupIndex> members);

/// True when the trace rejects a true null hypothesis.
bool commits_type_i_error(const TrialTrace& trace, const ScenarioSpec& spec);

AggregateMetrics aggregate(std::span<const ReplicationResult> results, const ScenarioSpec& spec);

}  // namespace subpop
