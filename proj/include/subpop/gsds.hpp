#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "subpop/environment.hpp"
#include "subpop/trial.hpp"

namespace subpop {

/// Two-analysis group-sequential design for subgroups.
///
/// Boundaries and the maximum information level are inputs; the defaults are
/// those of the alpha = 0.025, beta = 0.1, theta_min = 0.2 design.
struct GsdsConfig {
    std::array<double, 2> lower{0.7962, 2.5204};
    std::array<double, 2> upper{2.7625, 2.5204};
    double i_max = 1495.5;
    std::uint64_t budget_pairs = 800;
    std::array<double, 2> analysis_fractions{0.5, 1.0};

    /// Default boundaries with the budget derived from i_max under `law`.
    static GsdsConfig standard(const OutcomeLaw& law);

    void validate(const OutcomeLaw& law) const;
};

/// Fisher information of `pairs` patient pairs: b / (2 p~(1-p~)) with
/// p~ = 0.5 for binary outcomes, b / (2 sigma^2) for normal ones.
double gsds_information(const OutcomeLaw& law, double pairs);

/// Pairs needed to reach `i_max`, rounded up to the next hundred.
std::uint64_t gsds_budget(const OutcomeLaw& law, double i_max);

/// Stage one enrols half the budget uniformly, keeps groups with z > l1, and
/// stops for efficacy if the pooled z exceeds u1 (futility if nothing is
/// kept). Otherwise stage two spends the rest on the kept groups and the
/// final pooled z is compared with u2.
TrialTrace run_gsds(const GsdsConfig& config, std::span<const SubgroupModel> models,
                    const RngContract& rng);

}  // namespace subpop
