#include "subpop/adaggi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subpop {

namespace {

void require_active(std::span<const GroupIndex> active) {
    if (active.empty()) throw std::invalid_argument("sampling from an empty active set");
}

template <class Score>
GroupIndex argmax(std::span<const GroupIndex> active, Score score) {
    require_active(active);
    GroupIndex best = active.front();
    double best_score = score(best);
    for (GroupIndex j : active.subspan(1)) {
        const double s = score(j);
        if (s > best_score) {
            best = j;
            best_score = s;
        }
    }
    return best;
}

void erase_all(std::vector<GroupIndex>& from, std::span<const GroupIndex> values) {
    std::erase_if(from, [&](GroupIndex j) {
        return std::find(values.begin(), values.end(), j) != values.end();
    });
}

}  // namespace

std::string to_string(Sampler sampler) {
    switch (sampler) {
        case Sampler::ucb: return "ucb";
        case Sampler::lcb: return "lcb";
        case Sampler::lucb: return "lucb";
        case Sampler::uniform: return "unif";
        case Sampler::apt: return "apt";
    }
    return "unknown";
}

std::optional<Sampler> parse_sampler(const std::string& text) {
    for (auto s : {Sampler::ucb, Sampler::lcb, Sampler::lucb, Sampler::uniform, Sampler::apt}) {
        if (to_string(s) == text) return s;
    }
    if (text == "uniform") return Sampler::uniform;
    return std::nullopt;
}

GroupIndex select_ucb(const Evidence& evidence, std::span<const GroupIndex> active,
                      double alpha) {
    return argmax(active, [&](GroupIndex j) { return evidence.ucb(j, alpha); });
}

GroupIndex select_lcb(const Evidence& evidence, std::span<const GroupIndex> active,
                      double alpha) {
    return argmax(active, [&](GroupIndex j) { return evidence.lcb(j, alpha); });
}

std::vector<GroupIndex> select_lucb(const Evidence& evidence,
                                    std::span<const GroupIndex> active, double alpha,
                                    std::uint64_t remaining_budget) {
    const GroupIndex low = select_lcb(evidence, active, alpha);
    const GroupIndex high = select_ucb(evidence, active, alpha);
    if (low == high || remaining_budget < 2) return {low};
    return {low, high};
}

GroupIndex select_apt(const StatsTable& stats, std::span<const GroupIndex> active) {
    return argmax(active, [&](GroupIndex j) {
        const auto& g = stats.group(j);
        return -std::sqrt(static_cast<double>(g.n)) * mean(g);
    });
}

GroupIndex RoundRobin::next(std::span<const GroupIndex> active) {
    require_active(active);
    GroupIndex pick = active.front();
    if (last_) {
        const auto it = std::upper_bound(active.begin(), active.end(), *last_);
        if (it != active.end()) pick = *it;
    }
    last_ = pick;
    return pick;
}

std::vector<GroupIndex> identify_bf(const Evidence& evidence,
                                    std::span<const GroupIndex> candidates,
                                    const TrialParams& params, std::size_t groups) {
    const double level = params.identification_level(groups);
    std::vector<GroupIndex> out;
    for (GroupIndex j : candidates) {
        if (evidence.stats().group(j).n == 0) continue;
        if (evidence.lcb(j, level) > 0.0) out.push_back(j);
    }
    return out;
}

std::vector<GroupIndex> remove_futile(const Evidence& evidence,
                                      std::span<const GroupIndex> candidates,
                                      const TrialParams& params) {
    std::vector<GroupIndex> out;
    for (GroupIndex j : candidates) {
        if (evidence.stats().group(j).n == 0) continue;
        if (evidence.ucb(j, params.beta) < params.theta_min) out.push_back(j);
    }
    return out;
}

TrialTrace run_adaggi(const TrialParams& params, std::span<const SubgroupModel> models,
                      Sampler sampler, const RngContract& rng, const GgiObserver& observer,
                      const ConfidenceRadius& radius) {
    const std::size_t k = models.size();
    params.validate(k);

    Environment env({models.begin(), models.end()}, rng);
    const std::vector<double> sigma = env.proxy_variances();
    StatsTable stats(k);
    const Evidence evidence(stats, sigma, radius);

    TrialTrace trace;
    TrialState state;
    const std::uint64_t limit = params.budget.limit;

    auto enrol = [&](GroupIndex j) {
        const double x = env.draw(j);
        ++state.t;
        stats.record({j, x, state.t});
    };

    for (GroupIndex j = 0; j < k; ++j) {
        for (std::uint64_t i = 0; i < params.n0; ++i) enrol(j);
        state.active.push_back(j);
    }

    // runs after every enrolment, the initial n0 round included
    auto resolve = [&] {
        const auto found = identify_bf(evidence, state.active, params, k);
        erase_all(state.active, found);
        for (GroupIndex j : found) {
            state.identified.push_back(j);
            trace.events.push_back({state.t, EventKind::identified, j, false});
        }

        const auto futile = remove_futile(evidence, state.active, params);
        erase_all(state.active, futile);
        for (GroupIndex j : futile) {
            state.removed.push_back(j);
            trace.events.push_back({state.t, EventKind::removed, j, false});
        }

        if (observer) observer(state, stats);
    };
    resolve();

    RoundRobin round_robin;
    while (state.t < limit && !state.active.empty()) {
        std::vector<GroupIndex> picks;
        switch (sampler) {
            case Sampler::ucb: picks = {select_ucb(evidence, state.active, params.alpha)}; break;
            case Sampler::lcb: picks = {select_lcb(evidence, state.active, params.alpha)}; break;
            case Sampler::lucb:
                picks = select_lucb(evidence, state.active, params.alpha, limit - state.t);
                break;
            case Sampler::uniform: picks = {round_robin.next(state.active)}; break;
            case Sampler::apt: picks = {select_apt(stats, state.active)}; break;
        }
        for (GroupIndex j : picks) enrol(j);

        resolve();
    }

    if (!state.active.empty() && params.budget.unbounded) {
        trace.truncated = true;
        trace.events.push_back({state.t, EventKind::truncated, std::nullopt, false});
    }
    trace.verdict = !state.identified.empty();
    trace.selected = state.identified;
    std::sort(trace.selected.begin(), trace.selected.end());
    trace.t_stop = state.t;
    trace.events.push_back({state.t, EventKind::terminated, std::nullopt, trace.verdict});
    return trace;
}

}  // namespace subpop
