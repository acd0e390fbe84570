#include "subpop/core_stats.hpp"

#include <string>

namespace subpop {

double PooledStats::mean() const {
    if (members.empty() || n == 0) {
        throw UndefinedEstimate("pooled mean of an empty subpopulation");
    }
    return sum / static_cast<double>(n);
}

double mean(const GroupStats& stats) {
    if (stats.n == 0) {
        throw UndefinedEstimate("mean of group " + std::to_string(stats.group + 1) +
                                " with no observations");
    }
    return stats.sum / static_cast<double>(stats.n);
}

PooledStats pooled_mean(std::span<const GroupStats> groups) {
    PooledStats pooled;
    for (const auto& g : groups) {
        pooled.members.push_back(g.group);
        pooled.n += g.n;
        pooled.sum += g.sum;
    }
    if (pooled.members.empty() || pooled.n == 0) {
        throw UndefinedEstimate("pooled mean of an empty subpopulation");
    }
    return pooled;
}

StatsTable::StatsTable(std::size_t groups) : groups_(groups), dropped_(groups, false) {
    for (GroupIndex j = 0; j < groups; ++j) groups_[j].group = j;
}

void StatsTable::check(GroupIndex j) const {
    if (j >= groups_.size()) {
        throw std::out_of_range("unknown group " + std::to_string(j + 1));
    }
}

void StatsTable::record(const EffectSample& sample) {
    check(sample.group);
    if (dropped_[sample.group]) {
        throw std::logic_error("group " + std::to_string(sample.group + 1) +
                               " was dropped and cannot be sampled");
    }
    if (!log_.empty() && sample.time <= log_.back().time) {
        throw std::invalid_argument("sample times must be strictly increasing");
    }
    auto& g = groups_[sample.group];
    g.n += 1;
    g.sum += sample.signal;
    log_.push_back(sample);
}

const GroupStats& StatsTable::group(GroupIndex j) const {
    check(j);
    return groups_[j];
}

void StatsTable::drop_group_samples(GroupIndex j) {
    check(j);
    dropped_[j] = true;
}

bool StatsTable::dropped(GroupIndex j) const {
    check(j);
    return dropped_[j];
}

PooledStats StatsTable::pooled(std::span<const GroupIndex> members) const {
    PooledStats pooled;
    for (GroupIndex j : members) {
        check(j);
        if (dropped_[j]) continue;
        pooled.members.push_back(j);
        pooled.n += groups_[j].n;
        pooled.sum += groups_[j].sum;
    }
    if (pooled.members.empty() || pooled.n == 0) {
        throw UndefinedEstimate("pooled mean of an empty subpopulation");
    }
    return pooled;
}

}  // namespace subpop
