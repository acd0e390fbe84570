#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subpop/environment.hpp"
#include "subpop/trial.hpp"

namespace subpop {

/// Sampling strategy for AdaGGI.
enum class Sampler { ucb, lcb, lucb, uniform, apt };

std::string to_string(Sampler sampler);
std::optional<Sampler> parse_sampler(const std::string& text);

// All selections break ties towards the lowest group index. `active` must be
// sorted ascending and non-empty, and every active group needs n >= 1.

/// argmax of mean + phi(n, alpha).
GroupIndex select_ucb(const Evidence& evidence, std::span<const GroupIndex> active,
                      double alpha);

/// argmax of mean - phi(n, alpha).
GroupIndex select_lcb(const Evidence& evidence, std::span<const GroupIndex> active,
                      double alpha);

/// {LCB pick, UCB pick}, collapsed to one id when they agree. With a single
/// unit of budget left only the LCB pick is returned.
std::vector<GroupIndex> select_lucb(const Evidence& evidence,
                                    std::span<const GroupIndex> active, double alpha,
                                    std::uint64_t remaining_budget);

/// Thresholding-bandit rule: argmin sqrt(n) * mean (signed, threshold 0).
GroupIndex select_apt(const StatsTable& stats, std::span<const GroupIndex> active);

/// Round-robin over the active set in ascending index order.
class RoundRobin {
   public:
    GroupIndex next(std::span<const GroupIndex> active);

   private:
    std::optional<GroupIndex> last_;
};

/// Active groups whose lower bound at level alpha/K is strictly positive.
std::vector<GroupIndex> identify_bf(const Evidence& evidence,
                                    std::span<const GroupIndex> candidates,
                                    const TrialParams& params, std::size_t groups);

/// Active groups whose upper bound at level beta falls strictly below theta_min.
std::vector<GroupIndex> remove_futile(const Evidence& evidence,
                                      std::span<const GroupIndex> candidates,
                                      const TrialParams& params);

/// Snapshot handed to observers after every iteration.
struct TrialState {
    std::vector<GroupIndex> active;
    std::vector<GroupIndex> identified;
    std::vector<GroupIndex> removed;
    std::uint64_t t = 0;
};

using GgiObserver = std::function<void(const TrialState&, const StatsTable&)>;

/// Adaptive good-subgroup identification.
///
/// Samples n0 signals per group, then repeatedly enrols per `sampler`, adds
/// groups passing identify_bf to the output set and drops groups failing
/// remove_futile (identification first). Stops when every group is
/// classified or the budget is spent; the verdict is true iff at least one
/// group was identified.
TrialTrace run_adaggi(const TrialParams& params, std::span<const SubgroupModel> models,
                      Sampler sampler, const RngContract& rng,
                      const GgiObserver& observer = {},
                      const ConfidenceRadius& radius = default_radius());

}  // namespace subpop
