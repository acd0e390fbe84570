#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace subpop {

/// Zero-based subgroup index. Files and reports print it one-based.
using GroupIndex = std::size_t;

/// Raised when an estimate is requested with no observations behind it.
class UndefinedEstimate : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

/// One observed effect signal: Y^T - Y^C for paired designs, Y^theta for
/// direct ones.
struct EffectSample {
    GroupIndex group = 0;
    double signal = 0.0;
    std::uint64_t time = 0;
};

struct GroupStats {
    GroupIndex group = 0;
    std::uint64_t n = 0;
    double sum = 0.0;
};

struct PooledStats {
    std::vector<GroupIndex> members;
    std::uint64_t n = 0;
    double sum = 0.0;

    double mean() const;
};

/// sum / n; throws UndefinedEstimate when n == 0.
double mean(const GroupStats& stats);

/// Pools raw sums and counts over the given groups. No prevalence reweighting:
/// the caller is responsible for having sampled members proportionally.
PooledStats pooled_mean(std::span<const GroupStats> groups);

/// Per-trial sufficient statistics plus the full sample log.
///
/// Sums are kept raw so pooling and dropping are exact. A dropped group keeps
/// its record for reporting but no longer contributes to pooled statistics
/// and accepts no new samples.
class StatsTable {
   public:
    explicit StatsTable(std::size_t groups);

    std::size_t size() const { return groups_.size(); }

    void record(const EffectSample& sample);

    const GroupStats& group(GroupIndex j) const;
    double mean(GroupIndex j) const { return subpop::mean(group(j)); }

    void drop_group_samples(GroupIndex j);
    bool dropped(GroupIndex j) const;

    /// Pool over the non-dropped members of `members`. Throws
    /// UndefinedEstimate if nothing is left to pool.
    PooledStats pooled(std::span<const GroupIndex> members) const;

    std::span<const EffectSample> log() const { return log_; }

   private:
    void check(GroupIndex j) const;

    std::vector<GroupStats> groups_;
    std::vector<bool> dropped_;
    std::vector<EffectSample> log_;
};

}  // namespace subpop
