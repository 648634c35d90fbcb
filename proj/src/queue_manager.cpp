#include "diana/queue_manager.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diana/errors.hpp"

namespace diana {

double threshold_N(const PriorityContext& ctx) {
    return (ctx.q * ctx.T) / (ctx.Q_sum * ctx.t);
}

double priority(int n, double N) {
    if (n <= 0) throw ValidationError("priority: job count n must be positive");
    if (N <= 0.0) throw ValidationError("priority: threshold N must be positive");
    if (n <= N) return (N - n) / N;
    return (N - n) / n;
}

int queue_for(double priority) {
    if (priority < -1.0 || priority >= 1.0) throw OutOfRange("priority outside [-1, 1)");
    if (priority >= 0.5) return 1;
    if (priority >= 0.0) return 2;
    if (priority >= -0.5) return 3;
    return 4;
}

double RateWindow::rate(const std::deque<double>& q) {
    if (q.size() < 2) return 0.0;
    double span = q.back() - q.front();
    if (span <= 0.0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(q.size() - 1) / span;
}

bool detect_congestion(const RateWindow& window, const CongestionConfig& cfg) {
    double arrival = window.arrival_rate();
    double service = window.service_rate();
    if (arrival <= 0.0) return false;
    if (std::isinf(arrival)) {
        // Instantaneous burst: the ratio tends to 1 unless service keeps pace.
        return std::isinf(service) ? false : 1.0 > cfg.thrs;
    }
    return (arrival - service) / arrival > cfg.thrs;
}

FeedbackQueueSet::FeedbackQueueSet(std::map<std::string, double> quotas, QueueConfig config)
    : quotas_(std::move(quotas)), config_(config) {
    for (const auto& [owner, quota] : quotas_) {
        if (quota <= 0.0) throw ValidationError("quota for " + owner + " must be positive");
    }
}

double FeedbackQueueSet::quota_of(const std::string& owner) const {
    auto it = quotas_.find(owner);
    if (it == quotas_.end()) throw ValidationError("no quota configured for user " + owner);
    return it->second;
}

void FeedbackQueueSet::submit(Job job, double now) {
    job.validate();
    quota_of(job.owner);
    job.enqueue_timestamp = now;
    set_state(job, JobState::Queued);
    Entry entry;
    entry.job = std::move(job);
    entry.seq = next_seq_++;
    entry.live = true;
    store_.push_back(std::move(entry));
    reprioritize(now);
}

void FeedbackQueueSet::submit_batch(std::vector<Job> burst, double now) {
    std::stable_sort(burst.begin(), burst.end(), [](const Job& a, const Job& b) {
        return a.processors_required < b.processors_required;
    });
    // One reprioritization at the end lands on the same fixed point the
    // per-arrival recomputes would, without the quadratic cost.
    for (auto& job : burst) {
        job.validate();
        quota_of(job.owner);
        job.enqueue_timestamp = now;
        set_state(job, JobState::Queued);
        Entry entry;
        entry.job = std::move(job);
        entry.seq = next_seq_++;
        entry.live = true;
        store_.push_back(std::move(entry));
    }
    reprioritize(now);
}

void FeedbackQueueSet::reprioritize(double now) {
    // Buckets are rebuilt below, so served entries can be dropped here.
    std::erase_if(store_, [](const Entry& e) { return !e.live; });
    int T = 0;
    int L = 0;
    std::map<std::string, int> owner_count;
    std::map<std::string, bool> owner_seen;
    for (const auto& e : store_) {
        if (!e.live) continue;
        T += e.job.processors_required;
        L += 1;
        owner_count[e.job.owner] += 1;
    }
    if (L == 0) {
        bucket_all();
        return;
    }
    double Q_sum = 0.0;
    for (const auto& [owner, count] : owner_count) {
        (void)count;
        Q_sum += quota_of(owner);
    }
    for (auto& e : store_) {
        if (!e.live) continue;
        PriorityContext ctx(owner_count[e.job.owner], e.job.processors_required, T,
                            quota_of(e.job.owner), Q_sum, L);
        double pr = priority(ctx.n, ctx.N_threshold);
        if (config_.aging_enabled) {
            pr += config_.aging_coefficient * std::max(0.0, now - e.job.enqueue_timestamp);
            pr = std::min(pr, std::nextafter(1.0, 0.0));
        }
        e.job.priority = pr;
    }
    bucket_all();
}

void FeedbackQueueSet::bucket_all() {
    for (auto& q : queues_) q.clear();
    for (size_t i = 0; i < store_.size(); ++i) {
        if (!store_[i].live) continue;
        queues_[queue_for(store_[i].job.priority) - 1].push_back(i);
    }
    auto before = [this](size_t a, size_t b) {
        const Entry& ea = store_[a];
        const Entry& eb = store_[b];
        if (ea.job.priority != eb.job.priority) return ea.job.priority > eb.job.priority;
        if (ea.job.enqueue_timestamp != eb.job.enqueue_timestamp)
            return ea.job.enqueue_timestamp < eb.job.enqueue_timestamp;
        return ea.seq < eb.seq;
    };
    for (auto& q : queues_) {
        if (!std::is_sorted(q.begin(), q.end(), before)) std::sort(q.begin(), q.end(), before);
    }
}

std::optional<Job> FeedbackQueueSet::dequeue_next() {
    for (auto& q : queues_) {
        if (q.empty()) continue;
        size_t idx = q.front();
        q.erase(q.begin());
        store_[idx].live = false;
        return store_[idx].job;
    }
    return std::nullopt;
}

const Job* FeedbackQueueSet::peek_next() const {
    for (const auto& q : queues_) {
        if (!q.empty()) return &store_[q.front()].job;
    }
    return nullptr;
}

std::vector<Job> FeedbackQueueSet::congestion_victims() const {
    std::vector<Job> out;
    for (int k = 4; k >= 3; --k) {
        const auto& q = queues_[k - 1];
        for (auto it = q.rbegin(); it != q.rend(); ++it) out.push_back(store_[*it].job);
    }
    return out;
}

int FeedbackQueueSet::jobs_ahead(double candidate_priority) const {
    int count = 0;
    for (const auto& e : store_) {
        if (e.live && e.job.priority > candidate_priority) ++count;
    }
    return count;
}

Job FeedbackQueueSet::extract(const std::string& job_id) {
    for (size_t i = 0; i < store_.size(); ++i) {
        if (!store_[i].live || store_[i].job.id != job_id) continue;
        store_[i].live = false;
        auto& q = queues_[queue_for(store_[i].job.priority) - 1];
        q.erase(std::find(q.begin(), q.end(), i));
        return store_[i].job;
    }
    throw Error("extract: job " + job_id + " is not queued here");
}

void FeedbackQueueSet::boost_priority(const std::string& job_id, double delta) {
    for (auto& e : store_) {
        if (!e.live || e.job.id != job_id) continue;
        e.job.priority = std::min(e.job.priority + delta, std::nextafter(1.0, 0.0));
        bucket_all();
        return;
    }
    throw Error("boost_priority: job " + job_id + " is not queued here");
}

int FeedbackQueueSet::total_queued() const {
    int n = 0;
    for (const auto& e : store_) n += e.live ? 1 : 0;
    return n;
}

int FeedbackQueueSet::total_processors_queued() const {
    int t = 0;
    for (const auto& e : store_) t += e.live ? e.job.processors_required : 0;
    return t;
}

int FeedbackQueueSet::queue_size(int k) const {
    if (k < 1 || k > 4) throw OutOfRange("queue index must be 1..4");
    return static_cast<int>(queues_[k - 1].size());
}

std::vector<const Job*> FeedbackQueueSet::queue_jobs(int k) const {
    if (k < 1 || k > 4) throw OutOfRange("queue index must be 1..4");
    std::vector<const Job*> out;
    for (size_t idx : queues_[k - 1]) out.push_back(&store_[idx].job);
    return out;
}

std::vector<const Job*> FeedbackQueueSet::all_jobs() const {
    std::vector<const Job*> out;
    for (int k = 1; k <= 4; ++k) {
        auto jobs = queue_jobs(k);
        out.insert(out.end(), jobs.begin(), jobs.end());
    }
    return out;
}

const Job* FeedbackQueueSet::find(const std::string& job_id) const {
    for (const auto& e : store_) {
        if (e.live && e.job.id == job_id) return &e.job;
    }
    return nullptr;
}

}  // namespace diana
