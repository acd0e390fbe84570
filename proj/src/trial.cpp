#include "subpop/trial.hpp"

#include <algorithm>
#include <stdexcept>

namespace subpop {

void TrialParams::validate(std::size_t groups) const {
    if (groups < 1) throw std::invalid_argument("need at least one group");
    if (!(alpha > 0.0 && alpha <= 0.1)) throw std::invalid_argument("alpha must lie in (0, 0.1]");
    if (!(beta > 0.0 && beta <= 0.1)) throw std::invalid_argument("beta must lie in (0, 0.1]");
    if (!(theta_min > 0.0)) throw std::invalid_argument("theta_min must be positive");
    if (n0 < 1) throw std::invalid_argument("n0 must be at least 1");
    if (budget.limit < groups * n0) {
        throw std::invalid_argument("budget " + std::to_string(budget.limit) +
                                    " is smaller than K*n0 = " + std::to_string(groups * n0));
    }
}

double TrialParams::identification_level(std::size_t groups) const {
    return bonferroni ? alpha / static_cast<double>(groups) : alpha;
}

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::identified: return "identified";
        case EventKind::removed: return "removed";
        case EventKind::truncated: return "truncated";
        case EventKind::terminated: return "terminated";
    }
    return "unknown";
}

std::optional<EventKind> parse_event_kind(const std::string& text) {
    for (auto kind : {EventKind::identified, EventKind::removed, EventKind::truncated,
                      EventKind::terminated}) {
        if (to_string(kind) == text) return kind;
    }
    return std::nullopt;
}

TrialTrace trace_from_events(std::vector<TrialEvent> events) {
    TrialTrace trace;
    for (const auto& e : events) {
        switch (e.kind) {
            case EventKind::identified:
                if (e.group) trace.selected.push_back(*e.group);
                break;
            case EventKind::truncated: trace.truncated = true; break;
            case EventKind::terminated:
                trace.verdict = e.verdict;
                trace.t_stop = e.t;
                break;
            case EventKind::removed: break;
        }
    }
    if (!trace.verdict) trace.selected.clear();
    std::sort(trace.selected.begin(), trace.selected.end());
    trace.events = std::move(events);
    return trace;
}

Evidence::Evidence(const StatsTable& stats, std::span<const double> sigma_sq_p,
                   const ConfidenceRadius& radius)
    : stats_(stats), sigma_sq_p_(sigma_sq_p), radius_(radius) {
    if (sigma_sq_p.size() != stats.size()) {
        throw std::invalid_argument("one proxy variance per group required");
    }
}

double Evidence::radius(GroupIndex j, double delta) const {
    return radius_(sigma_sq_p_[j], stats_.group(j).n, delta);
}

double Evidence::lcb(GroupIndex j, double delta) const {
    return stats_.mean(j) - radius(j, delta);
}

double Evidence::ucb(GroupIndex j, double delta) const {
    return stats_.mean(j) + radius(j, delta);
}

double Evidence::pooled_radius(const PooledStats& pooled, double delta) const {
    double sigma = 0.0;
    for (GroupIndex j : pooled.members) sigma = std::max(sigma, sigma_sq_p_[j]);
    return radius_(sigma, pooled.n, delta);
}

}  // namespace subpop
