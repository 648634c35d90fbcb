#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "diana/migrator.hpp"
#include "support/test_util.hpp"

using namespace diana;
using diana::test::make_job;

namespace {

PeerQueueReport report(std::string site, int queue_length, int ahead, double cost,
                       bool alive = true) {
    PeerQueueReport r;
    r.site_id = std::move(site);
    r.queue_length = queue_length;
    r.jobs_ahead = ahead;
    r.total_cost = cost;
    r.alive = alive;
    return r;
}

}  // namespace

TEST_CASE("report validation keeps jobs_ahead within the queue") {
    CHECK_NOTHROW(report("s1", 5, 3, 1.0).validate());
    CHECK_THROWS_AS(report("s1", 5, 6, 1.0).validate(), ValidationError);
    CHECK_THROWS_AS(report("s1", -1, 0, 1.0).validate(), ValidationError);
}

TEST_CASE("reports read queue pressure from the live queue set") {
    FeedbackQueueSet qs({{"A", 1000.0}});
    qs.submit(make_job("A1", "A", 5), 0.0);
    qs.submit(make_job("A2", "A", 5), 1.0);
    qs.submit(make_job("A3", "A", 1), 2.0);

    PeerQueueReport r = make_report("s1", qs, /*candidate_priority=*/-0.5, 2.5);
    CHECK(r.site_id == "s1");
    CHECK(r.queue_length == 3);
    CHECK(r.jobs_ahead == 3);  // all three sit above -0.5
    CHECK(r.total_cost == 2.5);
    CHECK(r.alive);
    CHECK(jobs_ahead(qs, -0.5) == 3);
    CHECK(jobs_ahead(qs, 0.99) == 0);
}

TEST_CASE("a target must beat the local site on both keys") {
    PeerQueueReport local = report("here", 10, 8, 5.0);

    // Shorter queue but costlier: stay.
    CHECK_FALSE(select_target(local, {report("p1", 3, 2, 9.0)}).has_value());
    // Cheaper but just as crowded: stay.
    CHECK_FALSE(select_target(local, {report("p1", 10, 8, 1.0)}).has_value());
    // Strictly better on both: go.
    auto target = select_target(local, {report("p1", 3, 2, 1.0)});
    REQUIRE(target.has_value());
    CHECK(*target == "p1");
}

TEST_CASE("the best peer is the lexicographically first of the minimal pair") {
    PeerQueueReport local = report("here", 10, 8, 5.0);
    auto t = select_target(local, {report("pz", 4, 2, 1.0), report("pa", 4, 2, 1.0)});
    REQUIRE(t.has_value());
    CHECK(*t == "pa");

    // Fewer jobs ahead dominates cost.
    auto u = select_target(local, {report("cheap", 4, 3, 0.5), report("short", 4, 1, 4.0)});
    REQUIRE(u.has_value());
    CHECK(*u == "short");
}

TEST_CASE("dead peers never win and an empty horizon keeps the job local") {
    PeerQueueReport local = report("here", 10, 8, 5.0);
    CHECK_FALSE(select_target(local, {}).has_value());
    CHECK_FALSE(select_target(local, {report("p1", 1, 0, 0.1, false)}).has_value());

    auto t = select_target(local, {report("p1", 1, 0, 0.1, false), report("p2", 2, 1, 1.0)});
    REQUIRE(t.has_value());
    CHECK(*t == "p2");
}

TEST_CASE("migration re-queues the job remotely with one band of boost") {
    FeedbackQueueSet plain({{"u", 100.0}});
    FeedbackQueueSet destination({{"u", 100.0}});
    plain.submit(make_job("j", "u", 1), 3.0);
    double fresh = plain.find("j")->priority;

    Job wanderer = make_job("j", "u", 1);
    Job landed = migrate(std::move(wanderer), "far", destination, 3.0);
    CHECK(landed.migrated_flag);
    CHECK(landed.current_site == "far");
    CHECK(landed.state == JobState::Queued);
    CHECK(landed.priority == doctest::Approx(fresh + 0.25));
    CHECK(destination.find("j") != nullptr);
}

TEST_CASE("the boost is clamped below the top of the interval") {
    FeedbackQueueSet destination({{"u", 100.0}});
    MigrationConfig cfg;
    cfg.priority_boost = 5.0;
    Job landed = migrate(make_job("j", "u", 1), "far", destination, 0.0, cfg);
    CHECK(landed.priority < 1.0);
    CHECK(queue_for(landed.priority) == 1);
}

TEST_CASE("a job migrates at most once and never while running") {
    FeedbackQueueSet destination({{"u", 100.0}});

    Job once = make_job("j1", "u", 1);
    once.migrated_flag = true;
    CHECK_THROWS_AS(migrate(std::move(once), "far", destination, 0.0), AlreadyMigrated);

    Job busy = make_job("j2", "u", 1);
    busy.state = JobState::Running;
    CHECK_THROWS_AS(migrate(std::move(busy), "far", destination, 0.0), JobRunning);

    // A hop out of the destination is itself refused.
    migrate(make_job("j3", "u", 1), "far", destination, 0.0);
    Job again = destination.extract("j3");
    FeedbackQueueSet elsewhere({{"u", 100.0}});
    CHECK_THROWS_AS(migrate(std::move(again), "next", elsewhere, 1.0), AlreadyMigrated);
}
