#pragma once

#include <map>
#include <string>
#include <vector>

#include "diana/domain.hpp"
#include "diana/network.hpp"
#include "diana/site_selector.hpp"

namespace diana {

// Splits a group into ceil(size / subgroup_size) subgroups. Job order,
// owner and group lineage are preserved; every subgroup has subgroup_size
// jobs except possibly the last.
std::vector<JobGroup> partition(const JobGroup& group, int subgroup_size);

struct SubgroupAssignment {
    int subgroup_index = 0;
    std::string site_id;
    int job_count = 0;
};

struct GroupPlacement {
    std::string group_id;
    std::vector<SubgroupAssignment> assignments;
    double predicted_makespan_hours = 0.0;
    std::string aggregation_destination;

    // Distinct sites used, and total jobs placed per site.
    std::map<std::string, int> jobs_per_site() const;
};

// Fluid makespan of an assignment set: per site, assigned jobs times the
// uniform service time divided by cpu_count; the result is the maximum
// over sites. Non-integral on purpose; the event simulation lands within
// one service time of it.
double predicted_makespan(const std::vector<SubgroupAssignment>& assignments,
                          const std::vector<SiteState>& sites, double service_time);

// Places a whole group. Candidate (a) puts every subgroup on the single
// site the cost model picks for the group's representative job. Candidate
// (b) assigns subgroups greedily through the same selector, refreshing the
// chosen site's backlog after each assignment, then balances the job count
// across the chosen sites in proportion to their cpu counts. The candidate
// with the lower fluid makespan wins; ties go to fewer sites.
// user_caps bounds how many of this owner's jobs each site may take.
// Throws NoAliveSite when no site can run the jobs, CapacityExceeded when
// the caps cannot hold the whole group.
GroupPlacement schedule_group(const JobGroup& group, const std::vector<SiteState>& sites,
                              const NetworkMatrix& net, const CostWeights& weights,
                              int subgroup_size, const std::string& destination = "",
                              const std::map<std::string, int>& user_caps = {},
                              const ClassifierConfig& classifier = {});

struct SubgroupOutput {
    std::string subgroup_id;
    std::string group_id;  // parent group
    bool completed = false;
    std::string manifest;
};

struct AggregatedOutput {
    std::string group_id;
    std::string destination;
    std::vector<std::string> manifests;  // one per subgroup, input order
};

// Collects every subgroup's output manifest into one record at the
// requested destination. Throws IncompleteGroup when a subgroup has not
// completed, ValidationError when results span several parent groups.
AggregatedOutput aggregate(const std::vector<SubgroupOutput>& results,
                           const std::string& destination);

}  // namespace diana
