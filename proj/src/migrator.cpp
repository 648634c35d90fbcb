#include "diana/migrator.hpp"

#include <algorithm>
#include <cmath>

#include "diana/errors.hpp"

namespace diana {

void PeerQueueReport::validate() const {
    if (queue_length < 0) throw ValidationError("queue_length must be non-negative");
    if (jobs_ahead < 0 || jobs_ahead > queue_length)
        throw ValidationError("jobs_ahead must lie in [0, queue_length]");
}

int jobs_ahead(const FeedbackQueueSet& queues, double candidate_priority) {
    return queues.jobs_ahead(candidate_priority);
}

PeerQueueReport make_report(const std::string& site_id, const FeedbackQueueSet& queues,
                            double candidate_priority, double total_cost, bool alive) {
    PeerQueueReport r;
    r.site_id = site_id;
    r.queue_length = queues.total_queued();
    r.jobs_ahead = queues.jobs_ahead(candidate_priority);
    r.total_cost = total_cost;
    r.alive = alive;
    r.validate();
    return r;
}

std::optional<std::string> select_target(const PeerQueueReport& local,
                                         const std::vector<PeerQueueReport>& peers) {
    const PeerQueueReport* best = nullptr;
    for (const auto& p : peers) {
        if (!p.alive) continue;
        if (!best || std::tie(p.jobs_ahead, p.total_cost, p.site_id) <
                         std::tie(best->jobs_ahead, best->total_cost, best->site_id)) {
            best = &p;
        }
    }
    if (!best) return std::nullopt;
    if (best->jobs_ahead < local.jobs_ahead && best->total_cost < local.total_cost)
        return best->site_id;
    return std::nullopt;
}

Job migrate(Job job, const std::string& target, FeedbackQueueSet& destination, double now,
            const MigrationConfig& cfg) {
    if (job.migrated_flag) throw AlreadyMigrated("job " + job.id + " has already migrated once");
    if (job.state == JobState::Running)
        throw JobRunning("job " + job.id + " is running and cannot migrate");
    mark_migrated(job);
    job.current_site = target;
    std::string id = job.id;
    destination.submit(std::move(job), now);
    destination.boost_priority(id, cfg.priority_boost);
    return *destination.find(id);
}

}  // namespace diana
