#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diana/domain.hpp"
#include "diana/queue_manager.hpp"

namespace diana {

// One site's queue pressure as seen by a migration decision.
struct PeerQueueReport {
    std::string site_id;
    int queue_length = 0;
    int jobs_ahead = 0;    // queued jobs with priority strictly above the candidate's
    double total_cost = 0.0;
    bool alive = true;

    void validate() const;
};

// Queued jobs with priority strictly greater than the candidate's.
int jobs_ahead(const FeedbackQueueSet& queues, double candidate_priority);

// Builds the local or peer report for one candidate job.
PeerQueueReport make_report(const std::string& site_id, const FeedbackQueueSet& queues,
                            double candidate_priority, double total_cost, bool alive = true);

// Minimum alive peer by (jobs_ahead, total_cost), ties on site id. The
// winner is returned only when it strictly improves on the local report in
// both keys; otherwise the job stays local and this returns nothing.
std::optional<std::string> select_target(const PeerQueueReport& local,
                                         const std::vector<PeerQueueReport>& peers);

struct MigrationConfig {
    double priority_boost = 0.25;  // one queue band
};

// Hands a job over to the target site: raises the migrated flag, enqueues
// it there (full reprioritization at the destination), then boosts its
// fresh priority, clamped below 1. The caller removes the job from its own
// queues first (FeedbackQueueSet::extract). A job may migrate exactly once
// (AlreadyMigrated) and never while Running (JobRunning).
Job migrate(Job job, const std::string& target, FeedbackQueueSet& destination, double now,
            const MigrationConfig& cfg = {});

}  // namespace diana
