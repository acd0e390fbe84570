#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subpop/environment.hpp"
#include "subpop/trial.hpp"

namespace subpop {

enum class RemovalMode { fut_only, fut_plus_pop };

std::string to_string(RemovalMode mode);
std::optional<RemovalMode> parse_removal_mode(const std::string& text);

/// True iff the pooled mean minus the radius at alpha/K is strictly positive.
/// K is the original group count, fixed for the whole trial.
bool identify_pooled(const Evidence& evidence, const PooledStats& pooled,
                     const TrialParams& params, std::size_t groups);

/// Population futility: when the pooled upper bound at level beta is below
/// theta_min, returns the active group with the smallest lower bound at
/// level alpha. At most one group per call.
std::optional<GroupIndex> remove_pop_futile(const Evidence& evidence,
                                            std::span<const GroupIndex> active,
                                            const PooledStats& pooled,
                                            const TrialParams& params);

struct GcpiState {
    std::vector<GroupIndex> active;
    std::uint64_t t = 0;
    std::optional<PooledStats> pooled;  // over active members' surviving samples
};

using GcpiObserver = std::function<void(const GcpiState&, const StatsTable&)>;

/// Adaptive good composite subpopulation identification.
///
/// Each round enrols one signal per active group (or K prevalence-weighted
/// draws when prevalences differ), tests the pooled active population, and
/// otherwise drops futile groups together with their samples. The first
/// round is n0 rounds long. A final round truncated by the budget only runs
/// the identification test. On success the active set is the output.
///
/// `observer` runs after the removal step of every full round.
TrialTrace run_adagcpi(const TrialParams& params, std::span<const SubgroupModel> models,
                       RemovalMode mode, const RngContract& rng,
                       const GcpiObserver& observer = {},
                       const ConfidenceRadius& radius = default_radius());

}  // namespace subpop
