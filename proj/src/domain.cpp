#include "diana/domain.hpp"

#include <cmath>

namespace diana {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

const char* to_string(JobState s) {
    switch (s) {
        case JobState::Submitted: return "submitted";
        case JobState::Queued: return "queued";
        case JobState::Running: return "running";
        case JobState::Completed: return "completed";
        case JobState::Migrated: return "migrated";
    }
    return "?";
}

void Job::validate() const {
    require(!id.empty(), "job id must be non-empty");
    require(processors_required >= 1, "job " + id + ": processors_required must be >= 1");
    require(finite_nonneg(input_size) && finite_nonneg(output_size) &&
                finite_nonneg(executable_size),
            "job " + id + ": data sizes must be non-negative");
    require(finite_nonneg(service_time), "job " + id + ": service_time must be non-negative");
    if (state == JobState::Queued) {
        require(priority > -1.0 && priority < 1.0,
                "job " + id + ": queued priority must lie in (-1, 1)");
    }
}

void set_state(Job& job, JobState next) {
    if (job.state == JobState::Running && next == JobState::Queued) {
        throw ValidationError("job " + job.id + ": Running -> Queued is forbidden");
    }
    job.state = next;
}

void mark_migrated(Job& job) {
    if (job.migrated_flag) {
        throw AlreadyMigrated("job " + job.id + " already migrated once");
    }
    job.migrated_flag = true;
}

void JobGroup::validate() const {
    require(!id.empty(), "group id must be non-empty");
    require(declared_size == static_cast<int>(jobs.size()),
            "group " + id + ": declared_size must equal the job count");
    require(division_factor >= 1, "group " + id + ": division_factor must be >= 1");
    for (const Job& j : jobs) {
        j.validate();
        require(j.owner == owner, "group " + id + ": all jobs must share the group owner");
    }
}

void SiteState::validate() const {
    require(!id.empty(), "site id must be non-empty");
    require(cpu_count >= 1, "site " + id + ": cpu_count must be >= 1");
    require(std::isfinite(compute_capability) && compute_capability > 0.0,
            "site " + id + ": compute_capability must be > 0");
    require(waiting_queue_length >= 0, "site " + id + ": waiting_queue_length must be >= 0");
    require(site_load >= 0.0 && site_load <= 1.0,
            "site " + id + ": site_load must lie in [0,1]");
}

void NetworkEdge::validate() const {
    require(bandwidth > 0.0, "edge " + source + "->" + destination + ": bandwidth must be > 0");
    require(loss_rate >= 0.0 && loss_rate < 1.0,
            "edge " + source + "->" + destination + ": loss_rate must lie in [0,1)");
}

void CostWeights::validate() const {
    require(finite_nonneg(w5) && finite_nonneg(w6) && finite_nonneg(w7),
            "cost weights must be non-negative");
}

void CostBreakdown::validate() const {
    require(finite_nonneg(network_cost) && finite_nonneg(computation_cost) &&
                finite_nonneg(data_transfer_cost) && finite_nonneg(total_cost),
            "cost components must be non-negative and finite");
    require(total_cost == network_cost + computation_cost + data_transfer_cost,
            "total_cost must equal the sum of its components");
}

PriorityContext::PriorityContext(int n_, int t_, int T_, double q_, double Q_sum_, int L_)
    : n(n_), t(t_), T(T_), q(q_), Q_sum(Q_sum_), L(L_) {
    N_threshold = (q * static_cast<double>(T)) / (Q_sum * static_cast<double>(t));
    validate();
}

void PriorityContext::validate() const {
    require(n >= 1, "priority context: n must be >= 1");
    require(L >= n, "priority context: L must be >= n");
    require(T >= t, "priority context: T must be >= t");
    require(t >= 1, "priority context: t must be >= 1");
    require(q > 0.0, "priority context: quota q must be > 0");
    require(Q_sum >= q, "priority context: Q_sum must be >= q");
    require(N_threshold > 0.0, "priority context: N must be > 0");
}

void CongestionConfig::validate() const {
    require(thrs >= 0.0 && thrs <= 1.0, "congestion threshold must lie in [0,1]");
}

}  // namespace diana
