#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subpop/confidence.hpp"
#include "subpop/core_stats.hpp"

namespace subpop {

/// Enrolment budget in effect-signal units (patient pairs for paired laws).
struct Budget {
    static constexpr std::uint64_t kDefaultCap = 1'000'000;

    std::uint64_t limit = kDefaultCap;
    bool unbounded = true;

    static Budget bounded(std::uint64_t units) { return {units, false}; }
    static Budget capped(std::uint64_t cap = kDefaultCap) { return {cap, true}; }
};

struct TrialParams {
    double alpha = 0.05;      // FWER level
    double beta = 0.1;        // futility level
    double theta_min = 0.5;   // minimum clinically relevant effect
    std::uint64_t n0 = 1;     // initial samples per group
    Budget budget{};
    bool bonferroni = true;   // divide alpha by K for identification

    /// Throws std::invalid_argument on any violated constraint.
    void validate(std::size_t groups) const;

    /// Level used by the identification tests: alpha / K, or alpha when the
    /// Bonferroni divisor is switched off.
    double identification_level(std::size_t groups) const;
};

enum class EventKind { identified, removed, truncated, terminated };

std::string to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(const std::string& text);

struct TrialEvent {
    std::uint64_t t = 0;
    EventKind kind = EventKind::terminated;
    std::optional<GroupIndex> group;
    bool verdict = false;

    friend bool operator==(const TrialEvent&, const TrialEvent&) = default;
};

/// Outcome of one trial run. Events are time-ordered; the single terminated
/// event is last.
struct TrialTrace {
    std::vector<TrialEvent> events;
    bool verdict = false;
    std::vector<GroupIndex> selected;
    std::uint64_t t_stop = 0;
    bool truncated = false;

    friend bool operator==(const TrialTrace&, const TrialTrace&) = default;
};

/// Rebuilds verdict/selected/t_stop/truncated from an event list.
TrialTrace trace_from_events(std::vector<TrialEvent> events);

/// Running confidence bounds for per-group estimates.
class Evidence {
   public:
    Evidence(const StatsTable& stats, std::span<const double> sigma_sq_p,
             const ConfidenceRadius& radius = default_radius());

    const StatsTable& stats() const { return stats_; }
    double sigma_sq_p(GroupIndex j) const { return sigma_sq_p_[j]; }

    double radius(GroupIndex j, double delta) const;
    double lcb(GroupIndex j, double delta) const;
    double ucb(GroupIndex j, double delta) const;

    /// Radius for a pooled estimate; uses the largest member proxy variance.
    double pooled_radius(const PooledStats& pooled, double delta) const;

   private:
    const StatsTable& stats_;
    std::span<const double> sigma_sq_p_;
    const ConfidenceRadius& radius_;
};

}  // namespace subpop
