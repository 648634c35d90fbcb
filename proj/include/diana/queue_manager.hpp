#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diana/domain.hpp"

namespace diana {

// Dynamic per-job threshold N = (q * T) / (Q_sum * t).
double threshold_N(const PriorityContext& ctx);

// Piecewise priority: (N - n) / N when n <= N, else (N - n) / n.
// The result lies in the open interval (-1, 1) and is non-negative iff n <= N.
double priority(int n, double N);

// Queue index 1..4 whose half-open range holds the priority:
//   Q1 [0.5, 1)   Q2 [0, 0.5)   Q3 [-0.5, 0)   Q4 [-1, -0.5)
// The formula never produces exactly -1 but the mapper accepts it.
// Throws OutOfRange outside [-1, 1).
int queue_for(double priority);

struct QueueConfig {
    bool aging_enabled = false;      // off: reprioritization replaces aging
    double aging_coefficient = 0.0;  // priority bonus per waited hour when on
};

// Sliding window over the most recent arrival and completion instants,
// used to estimate the queue's arrival and service rates.
class RateWindow {
  public:
    explicit RateWindow(size_t window_length = 100) : cap_(window_length) {}

    void record_arrival(double t) { push(arrivals_, t); }
    void record_service(double t) { push(services_, t); }

    double arrival_rate() const { return rate(arrivals_); }
    double service_rate() const { return rate(services_); }

    size_t window_length() const { return cap_; }

  private:
    void push(std::deque<double>& q, double t) {
        q.push_back(t);
        if (q.size() > cap_) q.pop_front();
    }
    static double rate(const std::deque<double>& q);

    size_t cap_;
    std::deque<double> arrivals_;
    std::deque<double> services_;
};

// True iff (arrival - service) / arrival exceeds the configured threshold.
// A non-positive arrival-rate estimate never counts as congestion.
bool detect_congestion(const RateWindow& window, const CongestionConfig& cfg);

// The four priority-ranged queues of one site plus reprioritization state.
// Every arrival recomputes every queued job's priority from the live
// context (T, L, Q_sum global; n per owner; t per job) and re-buckets.
// Removal for service never reprioritizes.
class FeedbackQueueSet {
  public:
    explicit FeedbackQueueSet(std::map<std::string, double> quotas, QueueConfig config = {});

    // Enqueues one job at time `now` and reprioritizes everything.
    void submit(Job job, double now);

    // Pre-orders one submission burst shortest-job-first (fewest processors
    // first, stable on ties) and submits each in that order.
    void submit_batch(std::vector<Job> burst, double now);

    // Head of the highest non-empty queue (Q1 first); nullopt if all empty.
    std::optional<Job> dequeue_next();

    // Same job dequeue_next would return, without removing it.
    const Job* peek_next() const;

    // Migration candidates: Q4 lowest priority first, then Q3.
    std::vector<Job> congestion_victims() const;

    // Queued jobs with priority strictly greater than the candidate's.
    int jobs_ahead(double candidate_priority) const;

    // Removes a queued job without serving it (migration hand-off).
    Job extract(const std::string& job_id);

    // Raises one job's priority by delta, clamped below 1, and re-buckets it.
    void boost_priority(const std::string& job_id, double delta);

    // Recomputes every queued job's priority and re-buckets; submit calls
    // this, and without a new arrival it is a fixed point.
    void reprioritize(double now);

    bool empty() const { return total_queued() == 0; }
    int total_queued() const;
    int total_processors_queued() const;
    int queue_size(int k) const;
    std::vector<const Job*> queue_jobs(int k) const;  // in queue order
    std::vector<const Job*> all_jobs() const;
    const Job* find(const std::string& job_id) const;
    const std::map<std::string, double>& quotas() const { return quotas_; }

  private:
    struct Entry {
        Job job;
        uint64_t seq = 0;
        bool live = false;
    };

    double quota_of(const std::string& owner) const;
    void bucket_all();

    std::map<std::string, double> quotas_;
    QueueConfig config_;
    std::vector<Entry> store_;
    std::vector<size_t> queues_[4];
    uint64_t next_seq_ = 0;
};

}  // namespace diana
