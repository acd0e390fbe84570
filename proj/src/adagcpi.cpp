#include "subpop/adagcpi.hpp"

#include <algorithm>
#include <cmath>

#include "subpop/adaggi.hpp"

namespace subpop {

namespace {

bool equal_prevalences(std::span<const SubgroupModel> models) {
    return std::all_of(models.begin(), models.end(), [&](const SubgroupModel& m) {
        return std::abs(m.prevalence - models.front().prevalence) < 1e-12;
    });
}

std::vector<GroupIndex> sampled_members(const StatsTable& stats,
                                        std::span<const GroupIndex> active) {
    std::vector<GroupIndex> out;
    for (GroupIndex j : active) {
        if (stats.group(j).n > 0) out.push_back(j);
    }
    return out;
}

std::optional<PooledStats> pool_active(const StatsTable& stats,
                                       std::span<const GroupIndex> active) {
    const auto members = sampled_members(stats, active);
    if (members.empty()) return std::nullopt;
    return stats.pooled(members);
}

}  // namespace

std::string to_string(RemovalMode mode) {
    return mode == RemovalMode::fut_only ? "fut" : "fut+pop";
}

std::optional<RemovalMode> parse_removal_mode(const std::string& text) {
    if (text == "fut" || text == "fut_only") return RemovalMode::fut_only;
    if (text == "fut+pop" || text == "fut_plus_pop" || text == "fut-pop")
        return RemovalMode::fut_plus_pop;
    return std::nullopt;
}

bool identify_pooled(const Evidence& evidence, const PooledStats& pooled,
                     const TrialParams& params, std::size_t groups) {
    const double level = params.identification_level(groups);
    return pooled.mean() - evidence.pooled_radius(pooled, level) > 0.0;
}

std::optional<GroupIndex> remove_pop_futile(const Evidence& evidence,
                                            std::span<const GroupIndex> active,
                                            const PooledStats& pooled,
                                            const TrialParams& params) {
    if (active.empty()) return std::nullopt;
    if (!(pooled.mean() + evidence.pooled_radius(pooled, params.beta) < params.theta_min)) {
        return std::nullopt;
    }
    std::optional<GroupIndex> worst;
    double worst_lcb = 0.0;
    for (GroupIndex j : active) {
        if (evidence.stats().group(j).n == 0) continue;
        const double lcb = evidence.lcb(j, params.alpha);
        if (!worst || lcb < worst_lcb) {
            worst = j;
            worst_lcb = lcb;
        }
    }
    return worst;
}

TrialTrace run_adagcpi(const TrialParams& params, std::span<const SubgroupModel> models,
                       RemovalMode mode, const RngContract& rng,
                       const GcpiObserver& observer, const ConfidenceRadius& radius) {
    const std::size_t k = models.size();
    params.validate(k);

    Environment env({models.begin(), models.end()}, rng);
    const std::vector<double> sigma = env.proxy_variances();
    StatsTable stats(k);
    const Evidence evidence(stats, sigma, radius);
    const bool uniform_rounds = equal_prevalences(models);

    TrialTrace trace;
    GcpiState state;
    for (GroupIndex j = 0; j < k; ++j) state.active.push_back(j);
    const std::uint64_t limit = params.budget.limit;

    auto enrol = [&](GroupIndex j) {
        const double x = env.draw(j);
        ++state.t;
        stats.record({j, x, state.t});
    };
    auto drop = [&](GroupIndex j) {
        std::erase(state.active, j);
        stats.drop_group_samples(j);
        trace.events.push_back({state.t, EventKind::removed, j, false});
    };

    bool first_round = true;
    while (state.t < limit && !state.active.empty()) {
        const std::uint64_t rounds = first_round ? params.n0 : 1;
        first_round = false;
        bool partial = false;
        for (std::uint64_t r = 0; r < rounds && !partial; ++r) {
            std::vector<GroupIndex> draws;
            if (uniform_rounds) {
                draws = state.active;
            } else {
                for (std::size_t i = 0; i < k; ++i) draws.push_back(env.draw_by_prevalence(state.active));
            }
            const std::uint64_t remaining = limit - state.t;
            if (draws.size() > remaining) {
                draws.resize(remaining);
                partial = true;
            }
            for (GroupIndex j : draws) enrol(j);
        }

        state.pooled = pool_active(stats, state.active);
        if (state.pooled && identify_pooled(evidence, *state.pooled, params, k)) {
            trace.verdict = true;
            trace.selected = state.active;
            for (GroupIndex j : state.active) {
                trace.events.push_back({state.t, EventKind::identified, j, false});
            }
            break;
        }
        if (partial) continue;

        for (GroupIndex j : remove_futile(evidence, state.active, params)) drop(j);

        if (mode == RemovalMode::fut_plus_pop && !state.active.empty()) {
            const auto pooled = pool_active(stats, state.active);
            if (pooled) {
                if (auto worst = remove_pop_futile(evidence, state.active, *pooled, params)) {
                    drop(*worst);
                }
            }
        }

        state.pooled = state.active.empty() ? std::nullopt : pool_active(stats, state.active);
        if (observer) observer(state, stats);
    }

    if (!trace.verdict && !state.active.empty() && params.budget.unbounded) {
        trace.truncated = true;
        trace.events.push_back({state.t, EventKind::truncated, std::nullopt, false});
    }
    trace.t_stop = state.t;
    trace.events.push_back({state.t, EventKind::terminated, std::nullopt, trace.verdict});
    return trace;
}

}  // namespace subpop
