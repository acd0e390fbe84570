#include "subpop/gsds.hpp"

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

namespace subpop {

namespace {

// Splits `pairs` across `members`: floor share each, remainder to the lowest
// indices.
std::vector<std::uint64_t> allocate(std::uint64_t pairs, std::size_t members) {
    std::vector<std::uint64_t> out(members, pairs / members);
    for (std::size_t i = 0; i < pairs % members; ++i) out[i] += 1;
    return out;
}

}  // namespace

double gsds_information(const OutcomeLaw& law, double pairs) {
    if (std::holds_alternative<PairedBernoulli>(law)) {
        constexpr double p = 0.5;
        return pairs / (2.0 * p * (1.0 - p));
    }
    if (const auto* normal = std::get_if<PairedNormal>(&law)) {
        return pairs / (2.0 * normal->sigma_sq);
    }
    throw std::invalid_argument("GSDS needs paired outcomes, got " + law_name(law));
}

std::uint64_t gsds_budget(const OutcomeLaw& law, double i_max) {
    const double per_pair = gsds_information(law, 1.0);
    return static_cast<std::uint64_t>(std::ceil(i_max / per_pair / 100.0)) * 100;
}

GsdsConfig GsdsConfig::standard(const OutcomeLaw& law) {
    GsdsConfig config;
    config.budget_pairs = gsds_budget(law, config.i_max);
    return config;
}

void GsdsConfig::validate(const OutcomeLaw& law) const {
    if (!(lower[0] < upper[0])) throw std::invalid_argument("GSDS: need l1 < u1");
    if (lower[1] != upper[1]) throw std::invalid_argument("GSDS: need l2 == u2");
    if (!(i_max > 0.0)) throw std::invalid_argument("GSDS: i_max must be positive");
    if (!(analysis_fractions[0] > 0.0 && analysis_fractions[0] < 1.0) ||
        analysis_fractions[1] != 1.0) {
        throw std::invalid_argument("GSDS: analysis fractions must be (f1 in (0,1), 1)");
    }
    const double derived = static_cast<double>(gsds_budget(law, i_max));
    if (std::abs(static_cast<double>(budget_pairs) - derived) > 0.01 * derived) {
        throw std::invalid_argument("GSDS: budget " + std::to_string(budget_pairs) +
                                    " inconsistent with i_max (expected " +
                                    std::to_string(static_cast<std::uint64_t>(derived)) + ")");
    }
}

TrialTrace run_gsds(const GsdsConfig& config, std::span<const SubgroupModel> models,
                    const RngContract& rng) {
    const std::size_t k = models.size();
    if (k == 0) throw std::invalid_argument("GSDS: no groups");
    config.validate(models.front().law);
    if (config.budget_pairs < 2 * k) throw std::invalid_argument("GSDS: budget below 2K");

    Environment env({models.begin(), models.end()}, rng);
    StatsTable stats(k);
    TrialTrace trace;
    std::uint64_t t = 0;

    auto enrol = [&](GroupIndex j, std::uint64_t pairs) {
        for (std::uint64_t i = 0; i < pairs; ++i) {
            const double x = env.draw(j);
            stats.record({j, x, ++t});
        }
    };
    auto information = [&](GroupIndex j) {
        return gsds_information(models[j].law, static_cast<double>(stats.group(j).n));
    };
    auto pooled_z = [&](const std::vector<GroupIndex>& members) {
        const PooledStats pooled = stats.pooled(members);
        double info = 0.0;
        for (GroupIndex j : members) info += information(j);
        return pooled.mean() * std::sqrt(info);
    };
    auto finish = [&](bool verdict, const std::vector<GroupIndex>& selected) {
        if (verdict) {
            trace.selected = selected;
            for (GroupIndex j : selected) trace.events.push_back({t, EventKind::identified, j, false});
        }
        trace.verdict = verdict;
        trace.t_stop = t;
        trace.events.push_back({t, EventKind::terminated, std::nullopt, verdict});
        return trace;
    };

    const auto stage_one_pairs = static_cast<std::uint64_t>(
        std::floor(static_cast<double>(config.budget_pairs) * config.analysis_fractions[0]));
    const auto first = allocate(stage_one_pairs, k);
    for (GroupIndex j = 0; j < k; ++j) enrol(j, first[j]);

    std::vector<GroupIndex> kept;
    for (GroupIndex j = 0; j < k; ++j) {
        const double z = stats.mean(j) * std::sqrt(information(j));
        if (z > config.lower[0]) {
            kept.push_back(j);
        } else {
            trace.events.push_back({t, EventKind::removed, j, false});
        }
    }
    if (kept.empty()) return finish(false, kept);
    if (pooled_z(kept) > config.upper[0]) return finish(true, kept);

    const auto second = allocate(config.budget_pairs - t, kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) enrol(kept[i], second[i]);
    return finish(pooled_z(kept) > config.upper[1], kept);
}

}  // namespace subpop
