#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "diana/domain.hpp"

namespace diana {

struct SiteSpec {
    std::string id;
    int cpus = 1;
    double capability = 1.0;  // jobs per hour
    double load = 0.0;        // background load, fraction of capacity
    double availability = 1.0;
    std::set<std::string> datasets;
    std::map<std::string, int> user_caps;  // per-user job cap, absent = unlimited
};

struct UserSpec {
    std::string id;
    double quota = 1.0;
};

struct JobSpec {
    std::string id;
    std::string owner;
    std::string origin;  // submitting site
    double submit = 0.0;
    double service = 0.0;
    int procs = 1;
    double input = 0.0;
    double output = 0.0;
    double exec = 0.0;
    std::string class_override;  // "", "compute", "data", "both"
};

struct GroupSpec {
    std::string id;
    std::string owner;
    std::string origin;
    double submit = 0.0;
    double service = 1.0;
    int size = 1;
    int procs = 1;
    int division_factor = 0;  // 0 = use config subgroup_size
    double input = 0.0;
    double output = 0.0;
    double exec = 0.0;
};

struct PoissonSpec {
    std::string name;
    std::vector<std::string> owners;  // cycled over generated jobs
    std::string origin;
    double rate = 1.0;  // arrivals per hour
    int count = 0;
    double start = 0.0;
    double service = 1.0;
    int procs = 1;
    double input = 0.0;
    double output = 0.0;
    double exec = 0.0;
};

struct ScenarioConfig {
    CostWeights weights;
    int subgroup_size = 100;
    double thrs = 0.5;
    double migration_boost = 0.25;
    bool aging = false;
    double aging_coefficient = 0.0;
    bool normalize_costs = false;
    int subgrid_min = 4;
    double heartbeat_interval = 1.0 / 60.0;
    int missed_beats = 3;
    bool heartbeats = false;  // engine-scheduled heartbeat rounds
    double data_ratio = 2.0;
    double compute_ratio = 2.0;
    int window_length = 100;
};

struct Scenario {
    std::string name;
    std::vector<SiteSpec> sites;
    std::vector<NetworkEdge> edges;
    std::vector<UserSpec> users;
    std::vector<JobSpec> jobs;
    std::vector<GroupSpec> groups;
    std::vector<PoissonSpec> poisson;
    ScenarioConfig config;
    std::vector<std::string> warnings;  // unknown keys, tolerated

    const SiteSpec* find_site(const std::string& id) const;
    const UserSpec* find_user(const std::string& id) const;

    // Referential and range checks; throws ValidationError naming the field.
    // The network matrix must cover every ordered pair of distinct sites.
    void validate() const;
};

// Parses the sectioned key = value format. Diagnostics carry file:line.
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& name = "<memory>");

// Canonical text form; parse_scenario_text(render(s)) is equivalent to s.
std::string render(const Scenario& s);

}  // namespace diana
