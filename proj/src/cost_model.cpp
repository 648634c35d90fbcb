#include "diana/cost_model.hpp"

#include <algorithm>
#include <cmath>

namespace diana {

double network_cost(const NetworkEdge& edge) {
    if (std::isinf(edge.bandwidth)) return 0.0;
    return edge.loss_rate / edge.bandwidth;
}

double computation_cost(const SiteState& site, const CostWeights& weights) {
    if (site.compute_capability == 0.0) {
        throw ValidationError("site " + site.id + ": computation cost undefined for zero capability");
    }
    const double backlog = static_cast<double>(site.waiting_queue_length) / site.compute_capability;
    return backlog * weights.w5 + backlog * weights.w6 + site.site_load * weights.w7;
}

double data_transfer_cost(const Job& job, const NetworkEdge& edge) {
    const double volume = job.input_size + job.output_size + job.executable_size;
    if (volume == 0.0) return 0.0;
    const double effective_bw = edge.bandwidth * (1.0 - edge.loss_rate);  // MB/s
    const double seconds = volume / effective_bw;
    return seconds / 3600.0;
}

CostBreakdown total_cost(const Job& job, const SiteState& site, const NetworkEdge& edge,
                         const CostWeights& weights) {
    CostBreakdown c;
    c.network_cost = network_cost(edge);
    c.computation_cost = computation_cost(site, weights);
    c.data_transfer_cost = data_transfer_cost(job, edge);
    c.total_cost = c.network_cost + c.computation_cost + c.data_transfer_cost;
    return c;
}

namespace {

// Min-max scale a component across the candidate set; constant columns map to 0.
void normalize_component(std::vector<CostBreakdown>& table, double CostBreakdown::*field) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& c : table) {
        lo = std::min(lo, c.*field);
        hi = std::max(hi, c.*field);
    }
    const double span = hi - lo;
    for (auto& c : table) {
        c.*field = span > 0.0 ? (c.*field - lo) / span : 0.0;
    }
}

}  // namespace

std::vector<CostBreakdown> cost_table(const Job& job, const std::vector<SiteState>& sites,
                                      const NetworkMatrix& net, const CostWeights& weights,
                                      bool normalize) {
    std::vector<CostBreakdown> table;
    table.reserve(sites.size());
    for (const SiteState& site : sites) {
        const NetworkEdge edge = net.edge(job.current_site, site.id);
        CostBreakdown c;
        c.network_cost = network_cost(edge);
        c.computation_cost = computation_cost(site, weights);
        c.data_transfer_cost = data_transfer_cost(job, edge);
        table.push_back(c);
    }
    if (normalize && table.size() > 1) {
        normalize_component(table, &CostBreakdown::network_cost);
        normalize_component(table, &CostBreakdown::computation_cost);
        normalize_component(table, &CostBreakdown::data_transfer_cost);
    }
    for (auto& c : table) {
        c.total_cost = c.network_cost + c.computation_cost + c.data_transfer_cost;
    }
    return table;
}

}  // namespace diana
