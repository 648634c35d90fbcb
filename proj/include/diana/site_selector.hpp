#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diana/cost_model.hpp"
#include "diana/domain.hpp"
#include "diana/network.hpp"

namespace diana {

enum class JobClass { ComputeIntensive, DataIntensive, Both };

const char* to_string(JobClass c);

struct ClassifierConfig {
    double data_dominance_ratio = 2.0;
    double compute_dominance_ratio = 2.0;
};

// Derives the job class from the ratio of estimated transfer time on the
// reference edge to service time. Throws Unclassifiable for a job with no
// service time and no data.
JobClass classify(const Job& job, const NetworkEdge& reference_edge,
                  const ClassifierConfig& config);

struct RankedSite {
    std::string site_id;
    CostBreakdown cost;
    bool alive = true;
    int cpu_count = 0;
};

// Sorts candidate sites ascending under the class's key:
//   ComputeIntensive -> (computation_cost, network_cost)
//   DataIntensive    -> (data_transfer_cost, network_cost)
//   Both             -> total_cost
// Remaining ties break on site id. Dead sites stay in the ranking, marked.
std::vector<RankedSite> rank_sites(const Job& job, JobClass cls,
                                   const std::vector<SiteState>& sites,
                                   const NetworkMatrix& net, const CostWeights& weights,
                                   bool normalize = false);

// First alive site in rank order. Throws NoAliveSite when every site is dead.
std::string select_site(const Job& job, JobClass cls, const std::vector<SiteState>& sites,
                        const NetworkMatrix& net, const CostWeights& weights,
                        bool normalize = false);

// Synthetic edge for classification: mean bandwidth and mean loss across
// the outgoing edges from `from` to the candidate sites. With no outgoing
// edge (single-site world) it degrades to the free self edge.
NetworkEdge reference_edge(const std::string& from, const std::vector<SiteState>& sites,
                           const NetworkMatrix& net);

}  // namespace diana
