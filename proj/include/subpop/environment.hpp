#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/random/mersenne_twister.hpp>

#include "subpop/core_stats.hpp"

namespace subpop {

/// Effect signal observed directly: Y ~ N(theta, sigma^2).
struct DirectNormal {
    double sigma_sq = 1.0;
};

/// Paired patients, Y^C ~ N(0, sigma^2), Y^T ~ N(theta, sigma^2).
struct PairedNormal {
    double sigma_sq = 1.0;
};

/// Paired patients, Y^C ~ B(mu0), Y^T ~ B(mu0 + theta).
struct PairedBernoulli {
    double mu0 = 0.4;
};

using OutcomeLaw = std::variant<DirectNormal, PairedNormal, PairedBernoulli>;

struct SubgroupModel {
    double theta = 0.0;
    double prevalence = 1.0;
    OutcomeLaw law = DirectNormal{};
};

std::string law_name(const OutcomeLaw& law);
bool is_paired(const OutcomeLaw& law);

/// Throws std::invalid_argument naming the offending group (one-based).
void validate_model(const SubgroupModel& model, GroupIndex index);
/// Per-group checks plus prevalences summing to one within 1e-9.
void validate_models(std::span<const SubgroupModel> models);

/// Proxy variance of one effect signal under the model's law.
double proxy_variance(const SubgroupModel& model);

/// Deterministic random stream: mt19937_64 seeded from (master seed,
/// replication, channel) through a splitmix64 finalizer.
class RngStream {
   public:
    using engine_type = boost::random::mt19937_64;

    RngStream(std::uint64_t master_seed, std::uint64_t replication,
              std::uint64_t channel);

    engine_type& engine() { return engine_; }

    double normal(double mean, double sd);
    bool bernoulli(double p);
    double uniform01();

   private:
    engine_type engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Identifies the randomness of one replication. Every group gets its own
/// channel so a group's signal sequence does not depend on which groups a
/// policy visits; one extra channel serves allocation draws.
struct RngContract {
    std::uint64_t master_seed = 0;
    std::uint64_t replication = 0;

    RngStream group_stream(GroupIndex j) const;
    RngStream allocation_stream() const;
};

double draw_effect_signal(const SubgroupModel& model, RngStream& rng);

/// Outcome generator for one trial run. Draws one effect signal (one unit of
/// budget) per call.
class Environment {
   public:
    Environment(std::vector<SubgroupModel> models, const RngContract& rng);

    std::size_t size() const { return models_.size(); }
    const SubgroupModel& model(GroupIndex j) const { return models_.at(j); }
    std::span<const SubgroupModel> models() const { return models_; }

    double draw(GroupIndex j);

    /// Index drawn from `active` with probability proportional to prevalence.
    GroupIndex draw_by_prevalence(std::span<const GroupIndex> active);

    /// Proxy variances, one per group.
    std::vector<double> proxy_variances() const;

   private:
    std::vector<SubgroupModel> models_;
    std::vector<RngStream> streams_;
    RngStream allocation_;
};

}  // namespace subpop
