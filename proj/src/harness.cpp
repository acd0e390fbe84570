#include "subpop/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace subpop {

std::string AlgorithmChoice::name() const {
    switch (family) {
        case Family::adaggi: return "adaggi";
        case Family::adagcpi: return "adagcpi";
        case Family::gsds: return "gsds";
    }
    return "unknown";
}

std::string AlgorithmChoice::variant() const {
    switch (family) {
        case Family::adaggi: return to_string(sampler);
        case Family::adagcpi: return to_string(removal);
        case Family::gsds: return "standard";
    }
    return "unknown";
}

std::string AlgorithmChoice::label() const {
    return family == Family::gsds ? name() : name() + "-" + variant();
}

AlgorithmChoice AlgorithmChoice::adaggi(Sampler sampler) {
    AlgorithmChoice a;
    a.family = Family::adaggi;
    a.sampler = sampler;
    return a;
}

AlgorithmChoice AlgorithmChoice::adagcpi(RemovalMode mode) {
    AlgorithmChoice a;
    a.family = Family::adagcpi;
    a.removal = mode;
    return a;
}

AlgorithmChoice AlgorithmChoice::gsds_for(const OutcomeLaw& law) {
    AlgorithmChoice a;
    a.family = Family::gsds;
    a.gsds = GsdsConfig::standard(law);
    return a;
}

std::optional<AlgorithmChoice> parse_algorithm(const std::string& label, const OutcomeLaw& law) {
    if (label == "gsds") {
        if (!is_paired(law)) return std::nullopt;
        return AlgorithmChoice::gsds_for(law);
    }
    const auto dash = label.find('-');
    if (dash == std::string::npos) return std::nullopt;
    const std::string family = label.substr(0, dash);
    const std::string variant = label.substr(dash + 1);
    if (family == "adaggi") {
        if (auto s = parse_sampler(variant)) return AlgorithmChoice::adaggi(*s);
    } else if (family == "adagcpi") {
        if (auto m = parse_removal_mode(variant)) return AlgorithmChoice::adagcpi(*m);
    }
    return std::nullopt;
}

std::vector<AlgorithmChoice> applicable_algorithms(std::span<const SubgroupModel> models,
                                                   const Budget& budget) {
    std::vector<AlgorithmChoice> out;
    const bool paired = !models.empty() && std::all_of(models.begin(), models.end(), [](const auto& m) {
        return is_paired(m.law);
    });
    if (paired && !budget.unbounded) {
        auto gsds = AlgorithmChoice::gsds_for(models.front().law);
        if (gsds.gsds.budget_pairs == budget.limit) out.push_back(gsds);
    }
    for (auto s : {Sampler::lcb, Sampler::ucb, Sampler::lucb, Sampler::uniform, Sampler::apt}) {
        out.push_back(AlgorithmChoice::adaggi(s));
    }
    out.push_back(AlgorithmChoice::adagcpi(RemovalMode::fut_only));
    out.push_back(AlgorithmChoice::adagcpi(RemovalMode::fut_plus_pop));
    return out;
}

void ScenarioSpec::validate() const {
    if (scenario_id.empty()) throw std::invalid_argument("scenario_id must not be empty");
    validate_models(models);
    params.validate(models.size());
    if (replications < 1) throw std::invalid_argument("replications must be at least 1");
    if (algorithm.family == Family::gsds) {
        for (const auto& m : models) {
            if (!is_paired(m.law)) throw std::invalid_argument("GSDS needs paired outcomes");
        }
        algorithm.gsds.validate(models.front().law);
        if (params.budget.unbounded || algorithm.gsds.budget_pairs != params.budget.limit) {
            throw std::invalid_argument("GSDS budget must equal the scenario's bounded budget");
        }
    }
}

double ScenarioSpec::time_scale() const {
    return params.budget.unbounded ? 1.0 : static_cast<double>(params.budget.limit);
}

std::vector<SubgroupModel> stylized_models(const std::vector<double>& theta,
                                           const std::vector<double>& sigma_sq) {
    std::vector<SubgroupModel> models;
    const double prevalence = 1.0 / static_cast<double>(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        const double s = sigma_sq.empty() ? 1.0 : sigma_sq.at(j);
        models.push_back({theta[j], prevalence, DirectNormal{s}});
    }
    return models;
}

std::vector<double> stylized_theta(int good, double theta_good, double theta_bad) {
    std::vector<double> theta(10, theta_bad);
    for (int j = 0; j < good; ++j) theta[j] = theta_good;
    return theta;
}

ScenarioSpec stylized_scenario(std::string id, std::vector<SubgroupModel> models) {
    ScenarioSpec spec;
    spec.scenario_id = std::move(id);
    spec.models = std::move(models);
    spec.params.alpha = 0.05;
    spec.params.beta = 0.1;
    spec.params.theta_min = 0.5;
    spec.params.n0 = 1;
    spec.params.budget = Budget::capped();
    spec.algorithm = AlgorithmChoice::adaggi(Sampler::lcb);
    return spec;
}

ScenarioSpec trial_scenario(std::string id, const std::vector<double>& theta, bool binary) {
    ScenarioSpec spec;
    spec.scenario_id = std::move(id);
    const double prevalence = 1.0 / static_cast<double>(theta.size());
    for (double th : theta) {
        OutcomeLaw law = binary ? OutcomeLaw{PairedBernoulli{0.4}} : OutcomeLaw{PairedNormal{1.0}};
        spec.models.push_back({th, prevalence, law});
    }
    spec.params.alpha = 0.025;
    spec.params.beta = 0.1;
    spec.params.theta_min = 0.2;
    spec.params.n0 = 5;
    spec.params.budget = Budget::bounded(gsds_budget(spec.models.front().law, GsdsConfig{}.i_max));
    spec.algorithm = AlgorithmChoice::adagcpi(RemovalMode::fut_plus_pop);
    return spec;
}

std::vector<double> table1_theta(char row) {
    switch (row) {
        case 'A': return {0.0, 0.0, 0.0};
        case 'B': return {-0.2, 0.0, 0.2};
        case 'C': return {0.0, 0.1, 0.3};
        case 'D': return {0.2, 0.2, 0.2};
        case 'E': return {0.3, 0.3, 0.3};
    }
    throw std::invalid_argument(std::string("unknown table row ") + row);
}

std::vector<ScenarioSpec> builtin_scenarios() {
    std::vector<ScenarioSpec> out;
    for (int g = 0; g <= 10; ++g) {
        out.push_back(stylized_scenario("stylized-ng" + std::to_string(g),
                                        stylized_models(stylized_theta(g))));
    }
    {
        std::vector<double> theta(10, 0.0);
        theta[0] = 0.5;
        theta[1] = 1.0;
        out.push_back(stylized_scenario("fig3-scen1", stylized_models(theta)));
    }
    {
        std::vector<double> theta(10, 0.0);
        for (int j = 0; j < 8; ++j) theta[j] = 0.5 + 0.5 / 7.0 * j;
        out.push_back(stylized_scenario("fig3-scen2", stylized_models(theta)));
    }
    for (int g = 0; g <= 10; ++g) {
        out.push_back(stylized_scenario("fig4-negative-ng" + std::to_string(g),
                                        stylized_models(stylized_theta(g, 0.5, -0.5))));
    }
    {
        std::vector<double> sigma(10);
        for (int j = 0; j < 10; ++j) sigma[j] = 1.0 + j / 10.0;
        out.push_back(stylized_scenario("appD-var-ng10-rising",
                                        stylized_models(stylized_theta(10), sigma)));
    }
    {
        std::vector<double> sigma(10, 1.0);
        for (int j = 5; j < 10; ++j) sigma[j] = 2.0;
        out.push_back(stylized_scenario("appD-var-ng5-noisy-bad",
                                        stylized_models(stylized_theta(5), sigma)));
    }
    for (bool binary : {true, false}) {
        for (char row : {'A', 'B', 'C', 'D', 'E'}) {
            out.push_back(trial_scenario(std::string("table1-") + row + (binary ? "-binary" : "-normal"),
                                         table1_theta(row), binary));
        }
    }
    return out;
}

std::optional<ScenarioSpec> find_builtin(const std::string& scenario_id) {
    for (auto& spec : builtin_scenarios()) {
        if (spec.scenario_id == scenario_id) return spec;
    }
    return std::nullopt;
}

TrialTrace run_trial(const ScenarioSpec& spec, std::uint64_t replication) {
    const RngContract rng{spec.master_seed, replication};
    switch (spec.algorithm.family) {
        case Family::adaggi: return run_adaggi(spec.params, spec.models, spec.algorithm.sampler, rng);
        case Family::adagcpi:
            return run_adagcpi(spec.params, spec.models, spec.algorithm.removal, rng);
        case Family::gsds: return run_gsds(spec.algorithm.gsds, spec.models, rng);
    }
    throw std::logic_error("unknown algorithm family");
}

std::vector<ReplicationResult> run_replications(const ScenarioSpec& spec, unsigned jobs) {
    spec.validate();
    std::vector<ReplicationResult> results(spec.replications);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t r = next++; r < spec.replications; r = next++) {
            auto& slot = results[r];
            slot.replication = r;
            try {
                slot.trace = run_trial(spec, r);
            } catch (const std::exception& e) {
                slot.error = e.what();
                if (slot.error.empty()) slot.error = "unknown failure";
            }
        }
    };
    jobs = std::max(1u, jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    }
    return results;
}

double SummaryStat::standard_error() const {
    return count > 0 ? sd / std::sqrt(static_cast<double>(count))
                     : std::numeric_limits<double>::quiet_NaN();
}

SummaryStat summarize(std::vector<double> values) {
    SummaryStat s;
    s.count = values.size();
    if (values.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        s.mean = s.sd = s.min = s.median = s.max = nan;
        return s;
    }
    // Sorted first so the result does not depend on input order.
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    s.min = values.front();
    s.max = values.back();
    const std::size_t mid = values.size() / 2;
    s.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    return s;
}

double true_pooled_effect(std::span<const SubgroupModel> models,
                          std::span<const GroupIndex> members) {
    double weight = 0.0;
    double effect = 0.0;
    for (GroupIndex j : members) {
        weight += models[j].prevalence;
        effect += models[j].prevalence * models[j].theta;
    }
    if (weight <= 0.0) throw std::invalid_argument("true_pooled_effect: empty member set");
    return effect / weight;
}

bool commits_type_i_error(const TrialTrace& trace, const ScenarioSpec& spec) {
    if (!trace.verdict || trace.selected.empty()) return false;
    if (spec.algorithm.family == Family::adaggi) {
        return std::any_of(trace.selected.begin(), trace.selected.end(),
                           [&](GroupIndex j) { return spec.models[j].theta <= 0.0; });
    }
    return true_pooled_effect(spec.models, trace.selected) <= 0.0;
}

namespace {

std::vector<CurvePoint> event_curve(const std::vector<std::vector<double>>& per_trace,
                                    std::size_t ranks) {
    std::vector<CurvePoint> curve;
    for (std::size_t rank = 1; rank <= ranks; ++rank) {
        std::vector<double> times;
        for (const auto& events : per_trace) {
            if (events.size() >= rank) times.push_back(events[rank - 1]);
        }
        CurvePoint p;
        p.rank = rank;
        p.censored = per_trace.size() - times.size();
        p.time = summarize(std::move(times));
        curve.push_back(p);
    }
    return curve;
}

}  // namespace

AggregateMetrics aggregate(std::span<const ReplicationResult> results, const ScenarioSpec& spec) {
    if (results.empty()) throw std::invalid_argument("aggregate: no replications");

    AggregateMetrics m;
    m.scenario_id = spec.scenario_id;
    m.algorithm = spec.algorithm.name();
    m.variant = spec.algorithm.variant();
    m.replications = results.size();
    m.time_scale = spec.time_scale();

    auto is_good = [&](GroupIndex j) { return spec.models[j].theta >= spec.params.theta_min; };
    std::size_t n_good = 0;
    for (GroupIndex j = 0; j < spec.groups(); ++j) n_good += is_good(j) ? 1 : 0;
    const std::size_t n_bad = spec.groups() - n_good;

    std::uint64_t ok = 0, successes = 0, selected = 0, type_i = 0, missed = 0;
    std::vector<double> stops;
    std::vector<std::vector<double>> good_times, bad_times;
    for (const auto& r : results) {
        if (!r.ok()) {
            ++m.failed;
            continue;
        }
        const TrialTrace& trace = *r.trace;
        ++ok;
        successes += trace.verdict ? 1 : 0;
        selected += trace.selected.size();
        m.truncated += trace.truncated ? 1 : 0;
        type_i += commits_type_i_error(trace, spec) ? 1 : 0;
        for (GroupIndex j = 0; j < spec.groups(); ++j) {
            if (is_good(j) &&
                std::find(trace.selected.begin(), trace.selected.end(), j) == trace.selected.end()) {
                ++missed;
            }
        }
        stops.push_back(static_cast<double>(trace.t_stop));
        auto& good = good_times.emplace_back();
        auto& bad = bad_times.emplace_back();
        for (const auto& e : trace.events) {
            if (!e.group) continue;
            if (e.kind == EventKind::identified && is_good(*e.group)) good.push_back(static_cast<double>(e.t));
            if (e.kind == EventKind::removed && !is_good(*e.group)) bad.push_back(static_cast<double>(e.t));
        }
    }

    const double denom = ok > 0 ? static_cast<double>(ok) : std::numeric_limits<double>::quiet_NaN();
    m.success_rate = 100.0 * static_cast<double>(successes) / denom;
    m.mean_selected_size = static_cast<double>(selected) / denom;
    m.type_i_rate = static_cast<double>(type_i) / denom;
    m.missed_good_rate = static_cast<double>(missed) / denom;
    m.t_stop = summarize(std::move(stops));
    m.good_identification = event_curve(good_times, n_good);
    m.bad_removal = event_curve(bad_times, n_bad);
    return m;
}

}  // namespace subpop
