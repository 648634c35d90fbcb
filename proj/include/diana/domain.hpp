#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "diana/errors.hpp"

namespace diana {

enum class JobState { Submitted, Queued, Running, Completed, Migrated };

const char* to_string(JobState s);

// Unit of work. Data volumes in MB, times in simulated hours.
struct Job {
    std::string id;
    std::string owner;
    int processors_required = 1;   // the per-job slot demand t
    double input_size = 0.0;       // MB
    double output_size = 0.0;      // MB
    double executable_size = 0.0;  // MB
    double service_time = 0.0;     // hours on one execution slot
    double priority = 0.0;         // Pr(n), meaningful while Queued
    double enqueue_timestamp = 0.0;
    bool migrated_flag = false;
    std::string origin_site;
    std::string current_site;
    std::string group_id;  // lineage; empty for single jobs, never changes
    JobState state = JobState::Submitted;

    void validate() const;
};

// Transitions the job state, rejecting Running -> Queued (non-preemption).
void set_state(Job& job, JobState next);

// Sets the migrated flag; it may rise exactly once and never reverts.
void mark_migrated(Job& job);

// A bulk submission treated as one schedulable unit.
struct JobGroup {
    std::string id;
    std::string owner;
    std::vector<Job> jobs;
    int declared_size = 0;
    int division_factor = 1;

    void validate() const;
};

// Snapshot of one site as the cost model and selector see it.
struct SiteState {
    std::string id;
    int cpu_count = 1;
    double compute_capability = 1.0;  // jobs per hour, P_i
    int waiting_queue_length = 0;     // Q_i
    double site_load = 0.0;           // utilization fraction in [0,1]
    bool alive = true;
    std::set<std::string> hosted_datasets;

    void validate() const;
};

// Directed link between two sites.
struct NetworkEdge {
    std::string source;
    std::string destination;
    double bandwidth = 1.0;  // MB/s
    double loss_rate = 0.0;  // fraction in [0,1)

    void validate() const;
};

struct CostWeights {
    double w5 = 1.0;
    double w6 = 1.0;
    double w7 = 1.0;

    void validate() const;
};

struct CostBreakdown {
    double network_cost = 0.0;
    double computation_cost = 0.0;
    double data_transfer_cost = 0.0;  // hours
    double total_cost = 0.0;

    void validate() const;
};

// Inputs of the priority threshold N = (q*T)/(Q*t) for one job.
struct PriorityContext {
    int n = 1;        // submitting user's jobs in all queues, incl. new
    int t = 1;        // processors required by the new job
    int T = 1;        // processors required by all queued jobs
    double q = 1.0;   // submitting user's quota
    double Q_sum = 1.0;  // quota sum over distinct users with queued jobs
    int L = 1;        // total jobs in all queues, incl. new
    double N_threshold = 1.0;

    PriorityContext() = default;
    PriorityContext(int n_, int t_, int T_, double q_, double Q_sum_, int L_);

    void validate() const;
};

// Observed steady-state triple for the N = R*W identity.
struct LittleCheck {
    double avg_queue_length = 0.0;  // N
    double arrival_rate = 0.0;      // R, jobs/hour
    double avg_wait = 0.0;          // W, hours
};

struct CongestionConfig {
    double thrs = 0.5;  // in [0,1]

    void validate() const;
};

}  // namespace diana
