#pragma once

#include <vector>

#include "diana/domain.hpp"
#include "diana/network.hpp"

namespace diana {

// Network cost of a link: losses over bandwidth.
double network_cost(const NetworkEdge& edge);

// Computation cost of a site: (Q/P)*w5 + (Q/P)*w6 + load*w7, as printed.
// Throws ValidationError when compute_capability is zero.
double computation_cost(const SiteState& site, const CostWeights& weights);

// Hours to move the job's input, output and executable across the edge.
// Effective bandwidth shrinks by the loss rate: size / (bw * (1 - loss)).
double data_transfer_cost(const Job& job, const NetworkEdge& edge);

// All three components plus their exact sum for one (job, site) pair.
CostBreakdown total_cost(const Job& job, const SiteState& site, const NetworkEdge& edge,
                         const CostWeights& weights);

// Breakdown per candidate site, edges taken from the job's current site.
// With normalize set, each component is min-max scaled to [0,1] across the
// candidate set before totals are formed (default off: raw sums, as the
// source formulas state them).
std::vector<CostBreakdown> cost_table(const Job& job, const std::vector<SiteState>& sites,
                                      const NetworkMatrix& net, const CostWeights& weights,
                                      bool normalize = false);

}  // namespace diana
