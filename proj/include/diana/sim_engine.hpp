#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "diana/domain.hpp"
#include "diana/scenario.hpp"

namespace diana {

enum class Policy { Diana, GreedyBestSite, FcfsSingleQueue };

const char* to_string(Policy p);
Policy policy_from_string(const std::string& s);  // diana / greedy / fcfs

enum class EventKind {
    JobArrival,
    GroupArrival,
    JobStart,
    JobComplete,
    MigrationDecision,
    Heartbeat,
    NodeCrash,
    MessageDelivery,
};

// Events run in (time, sequence) order; the sequence breaks every tie.
struct SimEvent {
    double time = 0.0;
    uint64_t sequence = 0;
    EventKind kind = EventKind::JobArrival;
    size_t payload = 0;
};

struct JobRecord {
    std::string id;
    std::string owner;
    std::string group_id;
    std::string origin;
    std::string first_site;  // initial placement
    std::string exec_site;   // where it actually ran
    int procs = 1;
    double submit_time = 0.0;
    double start_time = 0.0;
    double complete_time = 0.0;
    double priority_at_submit = 0.0;
    double priority_at_start = 0.0;
    int queue_at_submit = 0;  // 1..4; 0 when the policy has no ranged queues
    int queue_at_start = 0;
    double queue_time = 0.0;      // meta-scheduler plus local queue
    double execution_time = 0.0;  // transfer plus service, excludes queue
    double turnaround = 0.0;      // submission to completion
    double response_time = 0.0;   // submission to start
    bool migrated = false;
};

struct SiteSample {
    double time = 0.0;
    std::string site_id;
    int queue_length = 0;
    int running = 0;
    long imports = 0;
    long exports = 0;
    long completed = 0;  // cumulative
};

struct MigrationRecord {
    double time = 0.0;
    std::string job_id;
    std::string from;
    std::string to;
    int local_ahead = 0;
    int target_ahead = 0;
    double local_cost = 0.0;
    double target_cost = 0.0;
};

struct SiteTotals {
    long completed = 0;
    long imports = 0;
    long exports = 0;
    double busy_slot_hours = 0.0;
    double throughput = 0.0;   // jobs per hour over the makespan
    double utilization = 0.0;  // busy slot hours / (cpus * makespan)
};

struct Metrics {
    Policy policy = Policy::Diana;
    uint64_t seed = 0;
    std::vector<JobRecord> jobs;  // submission order
    std::vector<SiteSample> site_series;
    std::vector<MigrationRecord> migrations;
    std::map<std::string, SiteTotals> sites;
    std::map<std::string, double> group_makespan;
    double makespan = 0.0;
    double mean_queue_time = 0.0;
    double mean_execution_time = 0.0;
    double mean_turnaround = 0.0;
    double throughput = 0.0;
    // Global queued-count transitions (time, +1/-1), for Little's law.
    std::vector<std::pair<double, int>> queue_transitions;
};

// Runs one policy over the scenario's workload, deterministically for a
// given (scenario, policy, seed). max_jobs > 0 truncates the generated
// single-job stream to its first max_jobs arrivals (groups are untouched).
Metrics run(const Scenario& sc, Policy policy, uint64_t seed, int max_jobs = 0);

// N = R * W residual over the middle half of the run. The window must be
// steady: in-window completions within 5% of arrivals, else NotSteadyState.
double littles_check(const Metrics& m);

// Same materialized workload replayed under each policy. Needs >= 2.
std::vector<Metrics> compare(const Scenario& sc, const std::vector<Policy>& policies,
                             uint64_t seed, int max_jobs = 0);

}  // namespace diana
