#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "subpop/adagcpi.hpp"
#include "subpop/adaggi.hpp"

using namespace subpop;

namespace {

TrialParams gcpi_params() {
    TrialParams p;
    p.alpha = 0.05;
    p.beta = 0.1;
    p.theta_min = 0.5;
    p.n0 = 1;
    p.budget = Budget::capped();
    return p;
}

TrialParams trial_params(std::uint64_t budget) {
    TrialParams p;
    p.alpha = 0.025;
    p.beta = 0.1;
    p.theta_min = 0.2;
    p.n0 = 5;
    p.budget = Budget::bounded(budget);
    return p;
}

}  // namespace

TEST_CASE("removal mode names") {
    CHECK(to_string(RemovalMode::fut_only) == "fut");
    CHECK(to_string(RemovalMode::fut_plus_pop) == "fut+pop");
    CHECK(parse_removal_mode("fut_plus_pop") == RemovalMode::fut_plus_pop);
    CHECK(parse_removal_mode("fut") == RemovalMode::fut_only);
    CHECK_FALSE(parse_removal_mode("pop").has_value());
}

TEST_CASE("identify_pooled") {
    const std::vector<double> sigma{1.0};
    StatsTable stats(1);
    const Evidence ev(stats, sigma);
    const auto p = gcpi_params();
    CHECK(identify_pooled(ev, PooledStats{{0}, 100, 60.0}, p, 10));
    CHECK_FALSE(identify_pooled(ev, PooledStats{{0}, 100, 30.0}, p, 10));
    for (std::uint64_t n : {1ull, 100ull, 100000ull})
        CHECK_FALSE(identify_pooled(ev, PooledStats{{0}, n, 0.0}, p, 10));
}

TEST_CASE("remove_pop_futile") {
    const std::vector<double> sigma{1.0, 1.0};
    StatsTable stats(2);
    std::uint64_t t = 0;
    for (int i = 0; i < 60; ++i) stats.record({0, 0.2, ++t});
    for (int i = 0; i < 60; ++i) stats.record({1, -0.2, ++t});
    const Evidence ev(stats, sigma);
    const std::vector<GroupIndex> both{0, 1};
    const auto pooled = stats.pooled(both);
    CHECK(pooled.n == 120);
    CHECK(pooled.mean() + ev.pooled_radius(pooled, 0.1) ==
          doctest::Approx(0.34753606410795).epsilon(1e-9));
    CHECK(remove_pop_futile(ev, both, pooled, gcpi_params()) == GroupIndex{1});

    // early on the radius is too wide to fire
    StatsTable early(1);
    for (int i = 0; i < 10; ++i) early.record({0, 0.5, static_cast<std::uint64_t>(i + 1)});
    const std::vector<double> one_sigma{1.0};
    const Evidence ev_early(early, one_sigma);
    const std::vector<GroupIndex> solo{0};
    CHECK_FALSE(remove_pop_futile(ev_early, solo, early.pooled(solo), gcpi_params()).has_value());

    // a firing singleton removes its only member
    StatsTable lone(1);
    for (int i = 0; i < 200; ++i) lone.record({0, -1.0, static_cast<std::uint64_t>(i + 1)});
    const Evidence ev_lone(lone, one_sigma);
    CHECK(remove_pop_futile(ev_lone, solo, lone.pooled(solo), gcpi_params()) == GroupIndex{0});
}

TEST_CASE("run_adagcpi: all groups at theta_min are selected together") {
    const std::vector<SubgroupModel> models(3, {0.2, 1.0 / 3, PairedBernoulli{0.4}});
    int wins = 0;
    for (std::uint64_t r = 0; r < 50; ++r) {
        const auto trace = run_adagcpi(trial_params(800), models, RemovalMode::fut_plus_pop, {5, r});
        if (!trace.verdict) continue;
        ++wins;
        CHECK(trace.selected == std::vector<GroupIndex>{0, 1, 2});
        for (const auto& e : trace.events)
            if (e.kind == EventKind::identified) CHECK(e.t == trace.t_stop);
    }
    CHECK(wins >= 45);
}

TEST_CASE("run_adagcpi: null groups give a negative verdict") {
    const std::vector<SubgroupModel> models(3, {0.0, 1.0 / 3, PairedBernoulli{0.4}});
    for (std::uint64_t r = 0; r < 30; ++r) {
        const auto trace = run_adagcpi(trial_params(800), models, RemovalMode::fut_only, {6, r});
        CHECK_FALSE(trace.verdict);
        CHECK(trace.selected.empty());
        CHECK(trace.t_stop <= 800);
    }
}

TEST_CASE("run_adagcpi: determinism") {
    std::vector<SubgroupModel> models(10, {0.0, 0.1, DirectNormal{1.0}});
    for (int j = 0; j < 6; ++j) models[j].theta = 0.5;
    for (std::uint64_t r = 0; r < 10; ++r)
        CHECK(run_adagcpi(gcpi_params(), models, RemovalMode::fut_plus_pop, {3, r}) ==
              run_adagcpi(gcpi_params(), models, RemovalMode::fut_plus_pop, {3, r}));
}

TEST_CASE("run_adagcpi: pooled statistics match a rebuild after every round") {
    std::vector<SubgroupModel> models(10, {0.0, 0.1, DirectNormal{1.0}});
    for (int j = 0; j < 3; ++j) models[j].theta = 0.5;
    for (std::uint64_t r = 0; r < 10; ++r) {
        bool ok = true;
        std::vector<GroupIndex> last_active;
        auto check = [&](const GcpiState& st, const StatsTable& stats) {
            ok = ok && std::is_sorted(st.active.begin(), st.active.end());
            if (!last_active.empty())
                ok = ok && std::includes(last_active.begin(), last_active.end(), st.active.begin(),
                                         st.active.end());
            last_active = st.active;
            if (st.active.empty()) return;
            std::uint64_t n = 0;
            double sum = 0.0, scale = 0.0;
            for (const auto& s : stats.log()) {
                if (!std::binary_search(st.active.begin(), st.active.end(), s.group)) continue;
                ++n;
                sum += s.signal;
                scale += std::abs(s.signal);
            }
            ok = ok && st.pooled && st.pooled->n == n && std::abs(st.pooled->sum - sum) <= 1e-12 * scale;
            ok = ok && st.pooled->members == st.active;
        };
        run_adagcpi(gcpi_params(), models, RemovalMode::fut_plus_pop, {8, r}, check);
        CHECK(ok);
    }
}

TEST_CASE("run_adagcpi: budget cap and partial rounds") {
    const std::vector<SubgroupModel> models(3, {0.05, 1.0 / 3, PairedNormal{1.0}});
    for (std::uint64_t b : {15ull, 16ull, 17ull, 100ull}) {
        const auto trace = run_adagcpi(trial_params(b), models, RemovalMode::fut_plus_pop, {2, b});
        CHECK(trace.t_stop <= b);
    }
    CHECK_THROWS(run_adagcpi(trial_params(14), models, RemovalMode::fut_only, {2, 0}));
}

TEST_CASE("run_adagcpi: unequal prevalences draw K units per round") {
    const std::vector<SubgroupModel> models{{0.0, 0.5, DirectNormal{1.0}},
                                            {0.0, 0.3, DirectNormal{1.0}},
                                            {0.0, 0.2, DirectNormal{1.0}}};
    bool ok = true;
    auto observer = [&](const GcpiState& st, const StatsTable&) { ok = ok && st.t % 3 == 0; };
    const auto trace = run_adagcpi(gcpi_params(), models, RemovalMode::fut_only, {1, 0}, observer);
    CHECK(ok);
    CHECK(trace.t_stop % 3 == 0);
}
