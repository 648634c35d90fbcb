#include "diana/site_selector.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace diana {

const char* to_string(JobClass c) {
    switch (c) {
        case JobClass::ComputeIntensive: return "compute";
        case JobClass::DataIntensive: return "data";
        case JobClass::Both: return "both";
    }
    return "?";
}

JobClass classify(const Job& job, const NetworkEdge& reference_edge,
                  const ClassifierConfig& config) {
    const double transfer = data_transfer_cost(job, reference_edge);
    if (job.service_time == 0.0 && transfer == 0.0) {
        throw Unclassifiable("job " + job.id + ": no service time and no data to move");
    }
    if (job.service_time == 0.0) return JobClass::DataIntensive;
    const double r = transfer / job.service_time;
    if (r >= config.data_dominance_ratio) return JobClass::DataIntensive;
    if (r <= 1.0 / config.compute_dominance_ratio) return JobClass::ComputeIntensive;
    return JobClass::Both;
}

namespace {

// Sort key: (primary, secondary, site id). The Both class folds everything
// into the total, leaving the secondary slot unused.
std::tuple<double, double, const std::string*> sort_key(const RankedSite& rs, JobClass cls) {
    switch (cls) {
        case JobClass::ComputeIntensive:
            return {rs.cost.computation_cost, rs.cost.network_cost, &rs.site_id};
        case JobClass::DataIntensive:
            return {rs.cost.data_transfer_cost, rs.cost.network_cost, &rs.site_id};
        case JobClass::Both:
            return {rs.cost.total_cost, 0.0, &rs.site_id};
    }
    return {0.0, 0.0, &rs.site_id};
}

}  // namespace

std::vector<RankedSite> rank_sites(const Job& job, JobClass cls,
                                   const std::vector<SiteState>& sites,
                                   const NetworkMatrix& net, const CostWeights& weights,
                                   bool normalize) {
    const std::vector<CostBreakdown> costs = cost_table(job, sites, net, weights, normalize);
    std::vector<RankedSite> ranked;
    ranked.reserve(sites.size());
    for (size_t i = 0; i < sites.size(); ++i) {
        ranked.push_back({sites[i].id, costs[i], sites[i].alive, sites[i].cpu_count});
    }
    std::sort(ranked.begin(), ranked.end(), [cls](const RankedSite& a, const RankedSite& b) {
        const auto ka = sort_key(a, cls);
        const auto kb = sort_key(b, cls);
        if (std::get<0>(ka) != std::get<0>(kb)) return std::get<0>(ka) < std::get<0>(kb);
        if (std::get<1>(ka) != std::get<1>(kb)) return std::get<1>(ka) < std::get<1>(kb);
        return *std::get<2>(ka) < *std::get<2>(kb);
    });
    return ranked;
}

std::string select_site(const Job& job, JobClass cls, const std::vector<SiteState>& sites,
                        const NetworkMatrix& net, const CostWeights& weights,
                        bool normalize) {
    const std::vector<RankedSite> ranked = rank_sites(job, cls, sites, net, weights, normalize);
    for (const RankedSite& rs : ranked) {
        if (rs.alive) return rs.site_id;
    }
    throw NoAliveSite("no alive site for job " + job.id);
}

NetworkEdge reference_edge(const std::string& from, const std::vector<SiteState>& sites,
                           const NetworkMatrix& net) {
    double bw_sum = 0.0;
    double loss_sum = 0.0;
    int count = 0;
    for (const SiteState& s : sites) {
        if (s.id == from || !net.has(from, s.id)) continue;
        const NetworkEdge& e = net.edge(from, s.id);
        bw_sum += e.bandwidth;
        loss_sum += e.loss_rate;
        ++count;
    }
    if (count == 0) return net.edge(from, from);
    NetworkEdge mean;
    mean.source = from;
    mean.destination = "*";
    mean.bandwidth = bw_sum / count;
    mean.loss_rate = loss_sum / count;
    return mean;
}

}  // namespace diana
