#include "subpop/cli/scenario_io.hpp"

#include <fstream>
#include <sstream>

namespace subpop::cli {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ScenarioError(where + ": missing field '" + key + "'");
    }
    return obj.at(key);
}

double number(const json& obj, const std::string& key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_number()) throw ScenarioError(where + "." + key + ": expected a number");
    return v.get<double>();
}

std::uint64_t count(const json& obj, const std::string& key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_number_unsigned()) {
        throw ScenarioError(where + "." + key + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string text(const json& obj, const std::string& key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_string()) throw ScenarioError(where + "." + key + ": expected a string");
    return v.get<std::string>();
}

template <std::size_t N>
std::array<double, N> pair_of(const json& obj, const std::string& key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_array() || v.size() != N) {
        throw ScenarioError(where + "." + key + ": expected " + std::to_string(N) + " numbers");
    }
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        if (!v[i].is_number()) throw ScenarioError(where + "." + key + ": expected numbers");
        out[i] = v[i].get<double>();
    }
    return out;
}

SubgroupModel group_from_json(const json& g, const std::string& where, double default_prevalence) {
    SubgroupModel model;
    model.theta = number(g, "theta", where);
    model.prevalence = g.contains("prevalence") ? number(g, "prevalence", where) : default_prevalence;
    const std::string law = text(g, "law", where);
    if (law == "direct_normal") {
        model.law = DirectNormal{g.contains("sigma_sq") ? number(g, "sigma_sq", where) : 1.0};
    } else if (law == "paired_normal") {
        model.law = PairedNormal{g.contains("sigma_sq") ? number(g, "sigma_sq", where) : 1.0};
    } else if (law == "paired_bernoulli") {
        model.law = PairedBernoulli{number(g, "mu0", where)};
    } else {
        throw ScenarioError(where + ".law: unknown law '" + law + "'");
    }
    return model;
}

json group_to_json(const SubgroupModel& m) {
    json g = {{"theta", m.theta}, {"prevalence", m.prevalence}, {"law", law_name(m.law)}};
    if (const auto* d = std::get_if<DirectNormal>(&m.law)) g["sigma_sq"] = d->sigma_sq;
    if (const auto* p = std::get_if<PairedNormal>(&m.law)) g["sigma_sq"] = p->sigma_sq;
    if (const auto* b = std::get_if<PairedBernoulli>(&m.law)) g["mu0"] = b->mu0;
    return g;
}

AlgorithmChoice algorithm_from_json(const json& a, const OutcomeLaw& law) {
    const std::string where = "algorithm";
    const std::string name = text(a, "name", where);
    if (name == "adaggi") {
        const std::string s = text(a, "sampler", where);
        const auto sampler = parse_sampler(s);
        if (!sampler) throw ScenarioError("algorithm.sampler: unknown sampler '" + s + "'");
        return AlgorithmChoice::adaggi(*sampler);
    }
    if (name == "adagcpi") {
        const std::string r = text(a, "removal", where);
        const auto mode = parse_removal_mode(r);
        if (!mode) throw ScenarioError("algorithm.removal: unknown removal mode '" + r + "'");
        return AlgorithmChoice::adagcpi(*mode);
    }
    if (name == "gsds") {
        if (!is_paired(law)) throw ScenarioError("algorithm: gsds needs paired outcomes");
        AlgorithmChoice choice = AlgorithmChoice::gsds_for(law);
        GsdsConfig& c = choice.gsds;
        if (a.contains("lower")) c.lower = pair_of<2>(a, "lower", where);
        if (a.contains("upper")) c.upper = pair_of<2>(a, "upper", where);
        if (a.contains("i_max")) c.i_max = number(a, "i_max", where);
        if (a.contains("budget_pairs")) c.budget_pairs = count(a, "budget_pairs", where);
        if (a.contains("analysis_fractions"))
            c.analysis_fractions = pair_of<2>(a, "analysis_fractions", where);
        return choice;
    }
    throw ScenarioError("algorithm.name: unknown algorithm '" + name + "'");
}

json algorithm_to_json(const AlgorithmChoice& a) {
    switch (a.family) {
        case Family::adaggi: return {{"name", "adaggi"}, {"sampler", to_string(a.sampler)}};
        case Family::adagcpi: return {{"name", "adagcpi"}, {"removal", to_string(a.removal)}};
        case Family::gsds:
            return {{"name", "gsds"},
                    {"lower", a.gsds.lower},
                    {"upper", a.gsds.upper},
                    {"i_max", a.gsds.i_max},
                    {"budget_pairs", a.gsds.budget_pairs},
                    {"analysis_fractions", a.gsds.analysis_fractions}};
    }
    return {};
}

}  // namespace

ScenarioSpec scenario_from_json(const json& doc) {
    if (!doc.is_object()) throw ScenarioError("scenario: expected a JSON object");
    ScenarioSpec spec;
    spec.scenario_id = text(doc, "scenario_id", "scenario");
    spec.replications = doc.contains("replications") ? count(doc, "replications", "scenario") : 1000;
    spec.master_seed = doc.contains("master_seed") ? count(doc, "master_seed", "scenario") : 1;

    const json& groups = field(doc, "groups", "scenario");
    if (!groups.is_array() || groups.empty()) {
        throw ScenarioError("scenario.groups: expected a non-empty list");
    }
    const double equal_share = 1.0 / static_cast<double>(groups.size());
    for (std::size_t j = 0; j < groups.size(); ++j) {
        spec.models.push_back(
            group_from_json(groups[j], "groups[" + std::to_string(j) + "]", equal_share));
    }

    const json& p = field(doc, "params", "scenario");
    spec.params.alpha = number(p, "alpha", "params");
    spec.params.beta = number(p, "beta", "params");
    spec.params.theta_min = number(p, "theta_min", "params");
    spec.params.n0 = p.contains("n0") ? count(p, "n0", "params") : 1;
    if (p.contains("bonferroni")) {
        if (!p.at("bonferroni").is_boolean()) throw ScenarioError("params.bonferroni: expected a boolean");
        spec.params.bonferroni = p.at("bonferroni").get<bool>();
    }
    const json& budget = field(p, "budget", "params");
    if (budget.is_number_unsigned()) {
        spec.params.budget = Budget::bounded(budget.get<std::uint64_t>());
    } else if (budget.is_object()) {
        spec.params.budget = Budget::capped(count(budget, "unbounded_cap", "params.budget"));
    } else {
        throw ScenarioError("params.budget: expected a pair count or {\"unbounded_cap\": N}");
    }

    spec.algorithm = doc.contains("algorithm")
                         ? algorithm_from_json(doc.at("algorithm"), spec.models.front().law)
                         : AlgorithmChoice::adaggi(Sampler::lcb);

    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string("invalid scenario '") + spec.scenario_id + "': " + e.what());
    } catch (const std::domain_error& e) {
        throw ScenarioError(std::string("invalid scenario '") + spec.scenario_id + "': " + e.what());
    }
    return spec;
}

json scenario_to_json(const ScenarioSpec& spec) {
    json groups = json::array();
    for (const auto& m : spec.models) groups.push_back(group_to_json(m));
    json params = {{"alpha", spec.params.alpha},
                   {"beta", spec.params.beta},
                   {"theta_min", spec.params.theta_min},
                   {"n0", spec.params.n0},
                   {"bonferroni", spec.params.bonferroni}};
    if (spec.params.budget.unbounded) {
        params["budget"] = {{"unbounded_cap", spec.params.budget.limit}};
    } else {
        params["budget"] = spec.params.budget.limit;
    }
    return {{"scenario_id", spec.scenario_id},
            {"replications", spec.replications},
            {"master_seed", spec.master_seed},
            {"groups", groups},
            {"params", params},
            {"algorithm", algorithm_to_json(spec.algorithm)}};
}

ScenarioSpec parse_scenario(const std::string& content) {
    json doc;
    try {
        doc = json::parse(content);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("parse error: ") + e.what());
    }
    return scenario_from_json(doc);
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot read scenario file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_scenario(buffer.str());
    } catch (const ScenarioError& e) {
        throw ScenarioError(path.string() + ": " + e.what());
    }
}

ScenarioSpec resolve_scenario(const std::string& name_or_path) {
    if (auto builtin = find_builtin(name_or_path)) return *builtin;
    if (std::filesystem::exists(name_or_path)) return load_scenario(name_or_path);
    throw ScenarioError("no builtin scenario or file named '" + name_or_path + "'");
}

}  // namespace subpop::cli
