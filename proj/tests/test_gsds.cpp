#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "subpop/gsds.hpp"

using namespace subpop;

namespace {

std::vector<SubgroupModel> binary(const std::vector<double>& theta) {
    std::vector<SubgroupModel> out;
    for (double th : theta) out.push_back({th, 1.0 / theta.size(), PairedBernoulli{0.4}});
    return out;
}

}  // namespace

TEST_CASE("information and budget") {
    const OutcomeLaw bin = PairedBernoulli{0.4};
    const OutcomeLaw norm = PairedNormal{1.0};
    CHECK(gsds_information(bin, 400) == 800.0);
    CHECK(gsds_information(norm, 3000) == 1500.0);
    CHECK(1495.5 / gsds_information(bin, 1.0) == doctest::Approx(747.75));
    CHECK(gsds_budget(bin, 1495.5) == 800);
    CHECK(gsds_budget(norm, 1495.5) == 3000);
    CHECK(GsdsConfig::standard(bin).budget_pairs == 800);
    CHECK(GsdsConfig::standard(norm).budget_pairs == 3000);
    CHECK_THROWS_AS(gsds_information(DirectNormal{1.0}, 10), std::invalid_argument);
}

TEST_CASE("interim z-score example") {
    const double z = 0.1 * std::sqrt(gsds_information(PairedBernoulli{0.4}, 133));
    CHECK(z == doctest::Approx(1.6309506430300).epsilon(1e-12));
    CHECK(z > GsdsConfig{}.lower[0]);
}

TEST_CASE("config validation") {
    const OutcomeLaw bin = PairedBernoulli{0.4};
    CHECK_NOTHROW(GsdsConfig::standard(bin).validate(bin));
    GsdsConfig c = GsdsConfig::standard(bin);
    c.lower[0] = 3.0;
    CHECK_THROWS_AS(c.validate(bin), std::invalid_argument);
    c = GsdsConfig::standard(bin);
    c.upper[1] = 2.6;
    CHECK_THROWS_AS(c.validate(bin), std::invalid_argument);
    c = GsdsConfig::standard(bin);
    c.budget_pairs = 3000;
    CHECK_THROWS_AS(c.validate(bin), std::invalid_argument);
    c.budget_pairs = 805;
    CHECK_NOTHROW(c.validate(bin));
    c = GsdsConfig::standard(bin);
    c.analysis_fractions = {1.0, 1.0};
    CHECK_THROWS_AS(c.validate(bin), std::invalid_argument);
}

TEST_CASE("terminates only at the analysis points") {
    const auto config = GsdsConfig::standard(PairedBernoulli{0.4});
    for (const auto& theta : {std::vector<double>{0, 0, 0}, {-0.2, 0, 0.2}, {0, 0.1, 0.3}, {0.2, 0.2, 0.2}}) {
        const auto models = binary(theta);
        for (std::uint64_t r = 0; r < 40; ++r) {
            const auto trace = run_gsds(config, models, {1, r});
            CHECK((trace.t_stop == 400 || trace.t_stop == 800));
            if (trace.verdict) {
                // the selected set is the interim set: everything not removed at t = 400
                std::vector<GroupIndex> kept;
                for (GroupIndex j = 0; j < 3; ++j) {
                    bool removed = false;
                    for (const auto& e : trace.events)
                        removed = removed || (e.kind == EventKind::removed && e.group == j);
                    if (!removed) kept.push_back(j);
                }
                CHECK(trace.selected == kept);
            }
            for (const auto& e : trace.events)
                if (e.kind == EventKind::removed) CHECK(e.t == 400);
        }
    }
}

TEST_CASE("large equal effects stop for efficacy at the interim") {
    const auto config = GsdsConfig::standard(PairedBernoulli{0.4});
    const auto models = binary({0.3, 0.3, 0.3});
    for (std::uint64_t r = 0; r < 100; ++r) {
        const auto trace = run_gsds(config, models, {2, r});
        CHECK(trace.verdict);
        CHECK(trace.t_stop == 400);
    }
}

TEST_CASE("input checks") {
    const auto config = GsdsConfig::standard(PairedBernoulli{0.4});
    CHECK_THROWS(run_gsds(config, std::vector<SubgroupModel>{}, {1, 0}));
    const std::vector<SubgroupModel> direct(2, {0.1, 0.5, DirectNormal{1.0}});
    CHECK_THROWS(run_gsds(config, direct, {1, 0}));
}
