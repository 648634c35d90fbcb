#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "diana/site_selector.hpp"
#include "support/test_util.hpp"

using namespace diana;
using diana::test::make_edge;
using diana::test::make_job;
using diana::test::make_site;
using diana::test::mesh;
using diana::test::oracle_best_site;

TEST_CASE("classification follows the transfer-to-service ratio") {
    ClassifierConfig cfg;  // dominance ratios 2 and 2
    NetworkEdge ref = make_edge("s1", "*", 1.0, 0.0);  // 1 MB/s

    // 7200 MB over 1 MB/s = 2 h of transfer.
    Job heavy_data = make_job("d", "u", 1, /*service=*/1.0, /*input=*/7200.0);
    CHECK(classify(heavy_data, ref, cfg) == JobClass::DataIntensive);

    Job heavy_compute = make_job("c", "u", 1, /*service=*/10.0, /*input=*/7200.0);
    CHECK(classify(heavy_compute, ref, cfg) == JobClass::ComputeIntensive);

    Job balanced = make_job("b", "u", 1, /*service=*/2.0, /*input=*/7200.0);
    CHECK(classify(balanced, ref, cfg) == JobClass::Both);

    // Boundary cases: r == 2 is data, r == 0.5 is compute.
    Job at_data_boundary = make_job("db", "u", 1, 1.0, 7200.0);
    CHECK(classify(at_data_boundary, ref, cfg) == JobClass::DataIntensive);
    Job at_compute_boundary = make_job("cb", "u", 1, 4.0, 7200.0);
    CHECK(classify(at_compute_boundary, ref, cfg) == JobClass::ComputeIntensive);
}

TEST_CASE("a job with no service time classifies by its data alone") {
    NetworkEdge ref = make_edge("s1", "*", 1.0, 0.0);
    Job pure_data = make_job("d", "u", 1, 0.0, 100.0);
    CHECK(classify(pure_data, ref, {}) == JobClass::DataIntensive);

    Job nothing = make_job("n", "u", 1, 0.0, 0.0);
    CHECK_THROWS_AS(classify(nothing, ref, {}), Unclassifiable);
}

TEST_CASE("dominance ratios move the class boundaries") {
    NetworkEdge ref = make_edge("s1", "*", 1.0, 0.0);
    Job j = make_job("j", "u", 1, /*service=*/1.0, /*input=*/3600.0);  // r = 1
    CHECK(classify(j, ref, {2.0, 2.0}) == JobClass::Both);
    CHECK(classify(j, ref, {1.0, 2.0}) == JobClass::DataIntensive);
    CHECK(classify(j, ref, {2.0, 1.0}) == JobClass::ComputeIntensive);
}

TEST_CASE("ranking sorts by the class key and keeps dead sites marked") {
    std::vector<SiteState> sites = {
        make_site("s1", 4, 1.0, /*queue=*/4),          // backlog 4
        make_site("s2", 4, 4.0, /*queue=*/4),          // backlog 1
        make_site("s3", 4, 2.0, /*queue=*/4, 0.0, false),  // backlog 2, dead
    };
    NetworkMatrix net = mesh(sites, 10.0, 0.0);
    Job j = make_job("j", "u", 1, 1.0, 0.0);

    auto ranked = rank_sites(j, JobClass::ComputeIntensive, sites, net, {});
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].site_id == "s2");
    CHECK(ranked[1].site_id == "s3");
    CHECK(ranked[2].site_id == "s1");
    CHECK_FALSE(ranked[1].alive);

    // The dead middle site is skipped at selection time.
    CHECK(select_site(j, JobClass::ComputeIntensive, sites, net, {}) == "s2");
}

TEST_CASE("selection falls through dead sites and reports a dead world") {
    std::vector<SiteState> sites = {make_site("s1", 4, 1.0, 0, 0.0, false),
                                    make_site("s2", 4, 1.0, 0, 0.0, false)};
    NetworkMatrix net = mesh(sites);
    Job j = make_job("j");
    CHECK_THROWS_AS(select_site(j, JobClass::Both, sites, net, {}), NoAliveSite);
}

TEST_CASE("equal costs fall back to the site id") {
    std::vector<SiteState> sites = {make_site("sb", 4, 2.0, 2), make_site("sa", 4, 2.0, 2),
                                    make_site("sc", 4, 2.0, 2)};
    NetworkMatrix net = mesh(sites, 10.0, 0.0);
    Job j = make_job("j", "u", 1, 1.0, 0.0);
    j.origin_site = "sa";
    j.current_site = "sa";
    CHECK(select_site(j, JobClass::ComputeIntensive, sites, net, {}) == "sa");
}

TEST_CASE("the reference edge averages the outgoing links") {
    std::vector<SiteState> sites = {make_site("s1"), make_site("s2"), make_site("s3")};
    NetworkMatrix net;
    net.add(make_edge("s1", "s2", 4.0, 0.02));
    net.add(make_edge("s1", "s3", 8.0, 0.04));
    net.add(make_edge("s2", "s1", 1.0, 0.5));  // incoming, ignored

    NetworkEdge ref = reference_edge("s1", sites, net);
    CHECK(ref.bandwidth == doctest::Approx(6.0));
    CHECK(ref.loss_rate == doctest::Approx(0.03));
}

TEST_CASE("a lone site degrades the reference edge to the free self link") {
    std::vector<SiteState> sites = {make_site("s1")};
    NetworkMatrix net;
    NetworkEdge ref = reference_edge("s1", sites, net);
    CHECK(std::isinf(ref.bandwidth));
    CHECK(ref.loss_rate == 0.0);
}

TEST_CASE("selection agrees with a brute-force argmin on random instances") {
    std::mt19937_64 rng(20260816);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;

    for (int instance = 0; instance < 1000; ++instance) {
        int n_sites = 2 + int(rng() % 19);
        std::vector<SiteState> sites;
        for (int s = 0; s < n_sites; ++s) {
            SiteState site = make_site("site" + std::to_string(s));
            site.cpu_count = 1 + int(rng() % 64);
            site.compute_capability = 0.25 + 8.0 * unit(rng);
            site.waiting_queue_length = int(rng() % 50);
            site.site_load = unit(rng);
            site.alive = unit(rng) > 0.1;
            sites.push_back(site);
        }
        NetworkMatrix net;
        for (const auto& a : sites)
            for (const auto& b : sites)
                if (a.id != b.id)
                    net.add(make_edge(a.id, b.id, 0.5 + 20.0 * unit(rng), 0.3 * unit(rng)));

        Job j = make_job("j", "u", 1, 0.1 + 4.0 * unit(rng), 10000.0 * unit(rng));
        j.output_size = 5000.0 * unit(rng);
        j.current_site = sites[rng() % sites.size()].id;
        j.origin_site = j.current_site;
        CostWeights w{0.5 + unit(rng), 0.5 + unit(rng), 0.5 + unit(rng)};
        JobClass cls = static_cast<JobClass>(rng() % 3);

        std::string expect = oracle_best_site(j, cls, sites, net, w);
        if (expect.empty()) {
            CHECK_THROWS_AS(select_site(j, cls, sites, net, w), NoAliveSite);
        } else {
            CHECK(select_site(j, cls, sites, net, w) == expect);
        }
        ++checked;
    }
    CHECK(checked == 1000);
}
