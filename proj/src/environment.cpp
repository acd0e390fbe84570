#include "subpop/environment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace subpop {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::uint64_t kAllocationChannel = std::numeric_limits<std::uint64_t>::max();

std::string group_label(GroupIndex index) { return "group " + std::to_string(index + 1); }

}  // namespace

std::string law_name(const OutcomeLaw& law) {
    return std::visit(overloaded{
                          [](const DirectNormal&) { return std::string("direct_normal"); },
                          [](const PairedNormal&) { return std::string("paired_normal"); },
                          [](const PairedBernoulli&) { return std::string("paired_bernoulli"); },
                      },
                      law);
}

bool is_paired(const OutcomeLaw& law) { return !std::holds_alternative<DirectNormal>(law); }

void validate_model(const SubgroupModel& model, GroupIndex index) {
    if (!std::isfinite(model.theta)) {
        throw std::invalid_argument(group_label(index) + ": theta must be finite");
    }
    if (!(model.prevalence > 0.0 && model.prevalence <= 1.0)) {
        throw std::invalid_argument(group_label(index) + ": prevalence must lie in (0, 1]");
    }
    std::visit(overloaded{
                   [&](const DirectNormal& law) {
                       if (!(law.sigma_sq > 0.0) || !std::isfinite(law.sigma_sq))
                           throw std::invalid_argument(group_label(index) +
                                                       ": sigma_sq must be positive");
                   },
                   [&](const PairedNormal& law) {
                       if (!(law.sigma_sq > 0.0) || !std::isfinite(law.sigma_sq))
                           throw std::invalid_argument(group_label(index) +
                                                       ": sigma_sq must be positive");
                   },
                   [&](const PairedBernoulli& law) {
                       const double treated = law.mu0 + model.theta;
                       if (!(law.mu0 >= 0.0 && law.mu0 <= 1.0) || !(treated >= 0.0 && treated <= 1.0)) {
                           throw std::invalid_argument(
                               group_label(index) + ": Bernoulli rates out of range (mu0=" +
                               std::to_string(law.mu0) + ", mu0+theta=" + std::to_string(treated) +
                               ")");
                       }
                   },
               },
               model.law);
}

void validate_models(std::span<const SubgroupModel> models) {
    if (models.empty()) {
        throw std::invalid_argument("scenario needs at least one group");
    }
    double total = 0.0;
    for (GroupIndex j = 0; j < models.size(); ++j) {
        validate_model(models[j], j);
        total += models[j].prevalence;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("prevalences sum to " + std::to_string(total) +
                                    ", expected 1");
    }
}

double proxy_variance(const SubgroupModel& model) {
    return std::visit(overloaded{
                          [](const DirectNormal& law) { return law.sigma_sq; },
                          [](const PairedNormal& law) { return 2.0 * law.sigma_sq; },
                          // two 1/4-subgaussian outcomes
                          [](const PairedBernoulli&) { return 0.5; },
                      },
                      model.law);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t replication,
                     std::uint64_t channel)
    : engine_(splitmix64(splitmix64(splitmix64(master_seed) ^ replication) ^ channel)) {}

double RngStream::normal(double mean, double sd) {
    boost::random::normal_distribution<double> dist(mean, sd);
    return dist(engine_);
}

bool RngStream::bernoulli(double p) {
    boost::random::bernoulli_distribution<double> dist(p);
    return dist(engine_);
}

double RngStream::uniform01() {
    boost::random::uniform_01<double> dist;
    return dist(engine_);
}

RngStream RngContract::group_stream(GroupIndex j) const {
    return RngStream(master_seed, replication, static_cast<std::uint64_t>(j));
}

RngStream RngContract::allocation_stream() const {
    return RngStream(master_seed, replication, kAllocationChannel);
}

double draw_effect_signal(const SubgroupModel& model, RngStream& rng) {
    return std::visit(overloaded{
                          [&](const DirectNormal& law) {
                              return rng.normal(model.theta, std::sqrt(law.sigma_sq));
                          },
                          [&](const PairedNormal& law) {
                              const double sd = std::sqrt(law.sigma_sq);
                              const double control = rng.normal(0.0, sd);
                              const double treated = rng.normal(model.theta, sd);
                              return treated - control;
                          },
                          [&](const PairedBernoulli& law) {
                              const double control = rng.bernoulli(law.mu0) ? 1.0 : 0.0;
                              const double treated = rng.bernoulli(law.mu0 + model.theta) ? 1.0 : 0.0;
                              return treated - control;
                          },
                      },
                      model.law);
}

Environment::Environment(std::vector<SubgroupModel> models, const RngContract& rng)
    : models_(std::move(models)), allocation_(rng.allocation_stream()) {
    validate_models(models_);
    streams_.reserve(models_.size());
    for (GroupIndex j = 0; j < models_.size(); ++j) streams_.push_back(rng.group_stream(j));
}

double Environment::draw(GroupIndex j) {
    if (j >= models_.size()) {
        throw std::out_of_range("unknown group " + std::to_string(j + 1));
    }
    return draw_effect_signal(models_[j], streams_[j]);
}

GroupIndex Environment::draw_by_prevalence(std::span<const GroupIndex> active) {
    if (active.empty()) {
        throw std::invalid_argument("draw_by_prevalence: empty active set");
    }
    double total = 0.0;
    for (GroupIndex j : active) total += models_.at(j).prevalence;
    const double u = allocation_.uniform01() * total;
    double acc = 0.0;
    for (GroupIndex j : active) {
        acc += models_[j].prevalence;
        if (u < acc) return j;
    }
    return active.back();
}

std::vector<double> Environment::proxy_variances() const {
    std::vector<double> out;
    out.reserve(models_.size());
    for (const auto& m : models_) out.push_back(proxy_variance(m));
    return out;
}

}  // namespace subpop
