#include "diana/bulk_scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diana/cost_model.hpp"
#include "diana/errors.hpp"

namespace diana {

std::vector<JobGroup> partition(const JobGroup& group, int subgroup_size) {
    group.validate();
    if (subgroup_size < 1) throw ValidationError("subgroup_size must be >= 1");
    std::vector<JobGroup> out;
    int n = static_cast<int>(group.jobs.size());
    for (int start = 0; start < n; start += subgroup_size) {
        int end = std::min(start + subgroup_size, n);
        JobGroup sub;
        sub.id = group.id + "." + std::to_string(out.size());
        sub.owner = group.owner;
        sub.jobs.assign(group.jobs.begin() + start, group.jobs.begin() + end);
        sub.declared_size = end - start;
        sub.division_factor = 1;
        out.push_back(std::move(sub));
    }
    return out;
}

std::map<std::string, int> GroupPlacement::jobs_per_site() const {
    std::map<std::string, int> out;
    for (const auto& a : assignments) out[a.site_id] += a.job_count;
    return out;
}

double predicted_makespan(const std::vector<SubgroupAssignment>& assignments,
                          const std::vector<SiteState>& sites, double service_time) {
    if (service_time < 0.0) throw ValidationError("service_time must be non-negative");
    std::map<std::string, int> per_site;
    for (const auto& a : assignments) {
        if (a.job_count < 0) throw ValidationError("assignment job_count must be non-negative");
        per_site[a.site_id] += a.job_count;
    }
    double makespan = 0.0;
    for (const auto& [site_id, count] : per_site) {
        auto it = std::find_if(sites.begin(), sites.end(),
                               [&](const SiteState& s) { return s.id == site_id; });
        if (it == sites.end()) throw ValidationError("assignment names unknown site " + site_id);
        makespan = std::max(makespan, count * service_time / it->cpu_count);
    }
    return makespan;
}

namespace {

constexpr int kUncapped = std::numeric_limits<int>::max();

int cap_for(const std::map<std::string, int>& caps, const std::string& site_id) {
    auto it = caps.find(site_id);
    return it == caps.end() ? kUncapped : it->second;
}

// Splits `total` jobs across `pool` in proportion to cpu counts, largest
// remainder first, honoring per-site caps by fixing saturated sites and
// redistributing their excess.
std::map<std::string, int> proportional_counts(std::vector<const SiteState*> pool, int total,
                                               const std::map<std::string, int>& caps) {
    std::map<std::string, int> counts;
    while (total > 0) {
        if (pool.empty()) throw CapacityExceeded("job caps cannot absorb the group");
        long long cpu_total = 0;
        for (const auto* s : pool) cpu_total += s->cpu_count;
        std::vector<std::pair<const SiteState*, double>> shares;
        int assigned = 0;
        for (const auto* s : pool) {
            double exact = static_cast<double>(total) * s->cpu_count / cpu_total;
            int base = static_cast<int>(std::floor(exact));
            counts[s->id] += base;
            assigned += base;
            shares.emplace_back(s, exact - base);
        }
        std::sort(shares.begin(), shares.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            if (a.first->cpu_count != b.first->cpu_count)
                return a.first->cpu_count > b.first->cpu_count;
            return a.first->id < b.first->id;
        });
        for (int r = 0; r < total - assigned; ++r) counts[shares[r].first->id] += 1;
        total = 0;
        std::vector<const SiteState*> next;
        for (const auto* s : pool) {
            int cap = cap_for(caps, s->id);
            if (counts[s->id] > cap) {
                total += counts[s->id] - cap;
                counts[s->id] = cap;
            } else {
                next.push_back(s);
            }
        }
        pool = std::move(next);
    }
    return counts;
}

}  // namespace

GroupPlacement schedule_group(const JobGroup& group, const std::vector<SiteState>& sites,
                              const NetworkMatrix& net, const CostWeights& weights,
                              int subgroup_size, const std::string& destination,
                              const std::map<std::string, int>& user_caps,
                              const ClassifierConfig& classifier) {
    group.validate();
    if (group.jobs.empty()) throw ValidationError("cannot place an empty group");
    int n = static_cast<int>(group.jobs.size());
    int max_procs = 0;
    double service_sum = 0.0;
    for (const auto& j : group.jobs) {
        max_procs = std::max(max_procs, j.processors_required);
        service_sum += j.service_time;
    }
    double service = service_sum / n;

    // Usable = alive and wide enough for the widest job.
    std::vector<SiteState> usable;
    long long capacity = 0;
    for (const auto& s : sites) {
        if (!s.alive || s.cpu_count < max_procs) continue;
        usable.push_back(s);
        int cap = cap_for(user_caps, s.id);
        constexpr long long kMax = std::numeric_limits<long long>::max();
        if (cap == kUncapped) capacity = kMax;
        else if (capacity <= kMax - cap) capacity += cap;  // saturate, never wrap
    }
    if (usable.empty()) throw NoAliveSite("no alive site can run the group");
    if (capacity < n) throw CapacityExceeded("group of " + std::to_string(n) +
                                             " exceeds total capacity under job caps");

    Job rep = group.jobs.front();
    NetworkEdge ref = reference_edge(rep.current_site, usable, net);
    JobClass cls = classify(rep, ref, classifier);
    auto subgroups = partition(group, subgroup_size);

    GroupPlacement placement;
    placement.group_id = group.id;
    placement.aggregation_destination = destination.empty() ? rep.current_site : destination;

    // Candidate (a): the whole group on the selector's single choice.
    double makespan_single = std::numeric_limits<double>::infinity();
    std::string single_site;
    {
        std::vector<SiteState> masked = usable;
        for (auto& s : masked) s.alive = cap_for(user_caps, s.id) >= n;
        bool any = std::any_of(masked.begin(), masked.end(), [](const SiteState& s) { return s.alive; });
        if (any) {
            single_site = select_site(rep, cls, masked, net, weights);
            SubgroupAssignment whole{0, single_site, n};
            makespan_single = predicted_makespan({whole}, usable, service);
        }
    }

    // Candidate (b): greedy per-subgroup placement, backlog refreshed after
    // each assignment, then cpu-proportional balancing over the chosen set.
    std::vector<SiteState> working = usable;
    std::sort(working.begin(), working.end(), [](const SiteState& a, const SiteState& b) {
        if (a.cpu_count != b.cpu_count) return a.cpu_count > b.cpu_count;
        return a.id < b.id;
    });
    std::map<std::string, int> remaining;
    for (const auto& s : working) remaining[s.id] = cap_for(user_caps, s.id);
    std::vector<std::string> chosen_order;
    for (const auto& sub : subgroups) {
        std::vector<SiteState> masked = working;
        for (auto& s : masked) s.alive = remaining[s.id] > 0;
        std::string chosen = select_site(rep, cls, masked, net, weights);
        for (auto& s : working) {
            if (s.id == chosen) s.waiting_queue_length += static_cast<int>(sub.jobs.size());
        }
        if (remaining[chosen] != kUncapped)
            remaining[chosen] = std::max(0, remaining[chosen] - static_cast<int>(sub.jobs.size()));
        if (std::find(chosen_order.begin(), chosen_order.end(), chosen) == chosen_order.end())
            chosen_order.push_back(chosen);
    }
    std::vector<const SiteState*> pool;
    for (const auto& id : chosen_order) {
        for (const auto& s : usable) {
            if (s.id == id) pool.push_back(&s);
        }
    }
    auto counts = proportional_counts(pool, n, user_caps);

    // Fill sites in descending cpu order with consecutive subgroups; a
    // subgroup spanning a boundary splits across the two sites.
    std::vector<const SiteState*> fill_order = pool;
    std::sort(fill_order.begin(), fill_order.end(), [](const SiteState* a, const SiteState* b) {
        if (a->cpu_count != b->cpu_count) return a->cpu_count > b->cpu_count;
        return a->id < b->id;
    });
    std::vector<SubgroupAssignment> split;
    size_t site_idx = 0;
    int room = fill_order.empty() ? 0 : counts[fill_order[0]->id];
    for (size_t k = 0; k < subgroups.size(); ++k) {
        int left = static_cast<int>(subgroups[k].jobs.size());
        while (left > 0) {
            while (room == 0 && site_idx + 1 < fill_order.size()) {
                ++site_idx;
                room = counts[fill_order[site_idx]->id];
            }
            int take = std::min(left, room);
            if (take == 0) throw CapacityExceeded("balanced counts do not cover the group");
            split.push_back({static_cast<int>(k), fill_order[site_idx]->id, take});
            left -= take;
            room -= take;
        }
    }
    double makespan_split = predicted_makespan(split, usable, service);

    if (makespan_single <= makespan_split) {
        for (size_t k = 0; k < subgroups.size(); ++k) {
            placement.assignments.push_back(
                {static_cast<int>(k), single_site, static_cast<int>(subgroups[k].jobs.size())});
        }
        placement.predicted_makespan_hours = makespan_single;
    } else {
        placement.assignments = std::move(split);
        placement.predicted_makespan_hours = makespan_split;
    }
    return placement;
}

AggregatedOutput aggregate(const std::vector<SubgroupOutput>& results,
                           const std::string& destination) {
    if (results.empty()) throw ValidationError("aggregate needs at least one subgroup result");
    AggregatedOutput out;
    out.group_id = results.front().group_id;
    out.destination = destination;
    for (const auto& r : results) {
        if (r.group_id != out.group_id)
            throw ValidationError("results mix parent groups " + out.group_id + " and " + r.group_id);
        if (!r.completed) throw IncompleteGroup("subgroup " + r.subgroup_id + " has not completed");
        out.manifests.push_back(r.manifest);
    }
    return out;
}

}  // namespace diana
