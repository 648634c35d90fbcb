#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "diana/cost_model.hpp"
#include "support/test_util.hpp"

using namespace diana;
using diana::test::make_edge;
using diana::test::make_job;
using diana::test::make_site;
using diana::test::mesh;

TEST_CASE("network cost is losses over bandwidth") {
    CHECK(network_cost(make_edge("a", "b", 10.0, 0.01)) == doctest::Approx(0.001));
    CHECK(network_cost(make_edge("a", "b", 2.0, 0.5)) == doctest::Approx(0.25));
    CHECK(network_cost(make_edge("a", "b", 10.0, 0.0)) == 0.0);
}

TEST_CASE("computation cost weights backlog twice and load once") {
    SiteState s = make_site("s1", 4, 2.0, /*queue=*/6, /*load=*/0.5);
    CHECK(computation_cost(s, {1.0, 1.0, 1.0}) == doctest::Approx(6.5));
    CHECK(computation_cost(s, {2.0, 0.0, 4.0}) == doctest::Approx(8.0));
    CHECK(computation_cost(s, {0.0, 0.0, 0.0}) == 0.0);

    SiteState undefined = s;
    undefined.compute_capability = 0.0;
    CHECK_THROWS_AS(computation_cost(undefined, {}), ValidationError);
}

TEST_CASE("data transfer cost is volume over effective bandwidth, in hours") {
    Job j = make_job("j1", "u", 1, 1.0, /*input=*/7200.0);
    CHECK(data_transfer_cost(j, make_edge("a", "b", 1.0, 0.0)) == doctest::Approx(2.0));
    CHECK(data_transfer_cost(j, make_edge("a", "b", 2.0, 0.5)) == doctest::Approx(2.0));

    j.output_size = 3600.0;
    j.executable_size = 3600.0;
    CHECK(data_transfer_cost(j, make_edge("a", "b", 4.0, 0.0)) == doctest::Approx(1.0));
}

TEST_CASE("a data-free job moves for free") {
    Job j = make_job("j1");
    CHECK(data_transfer_cost(j, make_edge("a", "b", 0.001, 0.9)) == 0.0);
}

TEST_CASE("the local edge is free") {
    NetworkMatrix net;
    NetworkEdge self = net.edge("s1", "s1");
    Job j = make_job("j1", "u", 1, 1.0, 1e9);
    CHECK(network_cost(self) == 0.0);
    CHECK(data_transfer_cost(j, self) == 0.0);
}

TEST_CASE("total cost is the exact sum of its components") {
    Job j = make_job("j1", "u", 1, 1.0, 3600.0);
    SiteState s = make_site("s2", 4, 2.0, 4, 0.25);
    NetworkEdge e = make_edge("s1", "s2", 2.0, 0.1);
    CostBreakdown c = total_cost(j, s, e, {1.0, 1.0, 1.0});
    CHECK(c.network_cost == doctest::Approx(0.05));
    CHECK(c.computation_cost == doctest::Approx(4.25));
    CHECK(c.data_transfer_cost == doctest::Approx(3600.0 / 1.8 / 3600.0));
    CHECK(c.total_cost == c.network_cost + c.computation_cost + c.data_transfer_cost);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("cost table evaluates every candidate from the job's current site") {
    std::vector<SiteState> sites = {make_site("s1", 4, 1.0, 2), make_site("s2", 4, 2.0, 2),
                                    make_site("s3", 4, 4.0, 2)};
    NetworkMatrix net = mesh(sites, 10.0, 0.01);
    Job j = make_job("j1", "u", 1, 1.0, 3600.0);

    auto table = cost_table(j, sites, net, {1.0, 1.0, 1.0});
    REQUIRE(table.size() == 3);
    // Backlog halves as capability doubles; the self edge is free.
    CHECK(table[0].computation_cost == doctest::Approx(4.0));
    CHECK(table[1].computation_cost == doctest::Approx(2.0));
    CHECK(table[2].computation_cost == doctest::Approx(1.0));
    CHECK(table[0].network_cost == 0.0);
    CHECK(table[0].data_transfer_cost == 0.0);
    CHECK(table[1].network_cost == doctest::Approx(0.001));
    CHECK(table[1].data_transfer_cost == doctest::Approx(3600.0 / 9.9 / 3600.0));
    for (const auto& c : table) CHECK_NOTHROW(c.validate());
}

TEST_CASE("normalized table scales every component into the unit interval") {
    std::vector<SiteState> sites = {make_site("s1", 4, 1.0, 8), make_site("s2", 4, 1.0, 4),
                                    make_site("s3", 4, 1.0, 0)};
    NetworkMatrix net = mesh(sites, 10.0, 0.01);
    Job j = make_job("j1", "u", 1, 1.0, 3600.0);

    auto table = cost_table(j, sites, net, {1.0, 1.0, 1.0}, /*normalize=*/true);
    REQUIRE(table.size() == 3);
    // Raw computation costs 16, 8, 0 scale to 1, 0.5, 0.
    CHECK(table[0].computation_cost == doctest::Approx(1.0));
    CHECK(table[1].computation_cost == doctest::Approx(0.5));
    CHECK(table[2].computation_cost == doctest::Approx(0.0));
    // The self edge is the cheapest in both network terms, remote ties at 1.
    CHECK(table[0].network_cost == 0.0);
    CHECK(table[1].network_cost == doctest::Approx(1.0));
    CHECK(table[2].network_cost == doctest::Approx(1.0));
    for (const auto& c : table) {
        CHECK(c.total_cost ==
              c.network_cost + c.computation_cost + c.data_transfer_cost);
    }
}

TEST_CASE("normalization maps a constant component to zero") {
    std::vector<SiteState> sites = {make_site("s1", 4, 1.0, 5), make_site("s2", 4, 1.0, 5)};
    NetworkMatrix net = mesh(sites, 10.0, 0.0);
    Job j = make_job("j1");

    auto table = cost_table(j, sites, net, {1.0, 1.0, 1.0}, true);
    CHECK(table[0].computation_cost == 0.0);
    CHECK(table[1].computation_cost == 0.0);
}
