#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "diana/errors.hpp"
#include "diana/scenario.hpp"

using namespace diana;

namespace {

std::string scenario_path(const std::string& name) {
    return std::string(DIANA_SCENARIO_DIR) + "/" + name;
}

// Smallest text that passes validation; tests append sections to it.
const char* kMinimal = R"(
[site a]
cpus = 1

[user u]
quota = 10
)";

Scenario parse_with(const std::string& tail) {
    return parse_scenario_text(std::string(kMinimal) + tail, "inline");
}

}  // namespace

TEST_CASE("a stored scenario comes back with every field typed") {
    Scenario sc = parse_scenario(scenario_path("fig4.scenario"));
    CHECK(sc.name == "fig4");
    REQUIRE(sc.sites.size() == 4);
    CHECK(sc.sites[0].id == "A");
    CHECK(sc.sites[0].cpus == 100);
    CHECK(sc.sites[3].cpus == 600);
    CHECK(sc.sites[3].capability == 6.0);
    CHECK(sc.sites[3].load == 0.05);
    CHECK(sc.edges.size() == 12);  // full mesh over four sites
    REQUIRE(sc.groups.size() == 1);
    CHECK(sc.groups[0].id == "herd");
    CHECK(sc.groups[0].size == 10000);
    CHECK(sc.groups[0].division_factor == 2);
    CHECK(sc.config.subgroup_size == 5000);
    CHECK(sc.warnings.empty());
}

TEST_CASE("flags and owner lists parse into the config and generators") {
    Scenario sc = parse_scenario(scenario_path("sweep.scenario"));
    CHECK(sc.config.aging);
    CHECK(sc.config.aging_coefficient == 0.05);
    CHECK(sc.config.subgrid_min == 1);
    REQUIRE(sc.poisson.size() == 2);
    CHECK(sc.poisson[0].owners == std::vector<std::string>{"alice", "bob", "carol"});
    CHECK(sc.poisson[1].procs == 3);
}

TEST_CASE("absent keys fall back to their defaults") {
    Scenario sc = parse_with("");
    REQUIRE(sc.sites.size() == 1);
    CHECK(sc.sites[0].capability == 1.0);
    CHECK(sc.sites[0].load == 0.0);
    CHECK(sc.sites[0].availability == 1.0);
    CHECK(sc.config.thrs == 0.5);
    CHECK(sc.config.subgroup_size == 100);
    CHECK_FALSE(sc.config.aging);
    CHECK_FALSE(sc.config.heartbeats);
}

TEST_CASE("comments and stray spacing are invisible") {
    Scenario sc = parse_scenario_text(
        "# leading banner\n"
        "[site a]   # trailing comment\n"
        "  cpus   =   3  \n"
        "\n"
        "[user u]\n"
        "quota = 5 # why not\n",
        "inline");
    CHECK(sc.sites[0].cpus == 3);
    CHECK(sc.users[0].quota == 5.0);
    CHECK(sc.warnings.empty());
}

TEST_CASE("unknown keys warn but do not stop the parse") {
    Scenario sc = parse_with(R"(
[site b]
cpus = 1
color = mauve

[edge a b]
bandwidth = 1
loss = 0

[edge b a]
bandwidth = 1
loss = 0
)");
    REQUIRE(sc.warnings.size() == 1);
    CHECK(sc.warnings[0].find("unknown site key 'color'") != std::string::npos);
    CHECK(sc.warnings[0].find("inline:") != std::string::npos);
    CHECK(sc.sites.size() == 2);
}

TEST_CASE("syntax faults carry file and line") {
    auto expect_parse_error = [](const std::string& text, const std::string& needle) {
        try {
            parse_scenario_text(text, "bad");
            FAIL_CHECK("no ParseError for: " << needle);
        } catch (const ParseError& e) {
            std::string msg = e.what();
            CHECK(msg.find("bad:") != std::string::npos);
            CHECK(msg.find(needle) != std::string::npos);
        }
    };
    expect_parse_error("[site a\ncpus = 1\n", "unterminated section header");
    expect_parse_error("[]\n", "empty section header");
    expect_parse_error("[site]\n", "bad section header");
    expect_parse_error("[frobnicate x]\n", "bad section header");
    expect_parse_error("[edge a]\n", "bad section header");
    expect_parse_error("cpus = 1\n", "outside any section");
    expect_parse_error("[site a]\njust words\n", "expected 'key = value'");
    expect_parse_error("[site a]\n= 5\n", "empty key");
    expect_parse_error("[site a]\ncpus = many\n", "not a number: 'many'");
    expect_parse_error("[site a]\ncpus = 2.5\n", "not an integer: '2.5'");
    expect_parse_error("[config]\naging = maybe\n", "expected on/off: 'maybe'");

    try {
        parse_scenario_text("[site a]\ncpus = 1\n\n[site b]\ncpus = zero\n", "bad");
        FAIL_CHECK("no ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("bad:5:") != std::string::npos);
    }
}

TEST_CASE("semantic faults name the offending field") {
    auto expect_invalid = [](const std::string& tail, const std::string& needle) {
        try {
            parse_with(tail);
            FAIL_CHECK("no ValidationError for: " << needle);
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    CHECK_THROWS_AS(parse_scenario_text("[user u]\nquota = 1\n", "x"), ValidationError);

    expect_invalid("[site a]\ncpus = 1\n", "duplicate site 'a'");
    expect_invalid("[user u]\nquota = 2\n", "duplicate user 'u'");
    expect_invalid("[site b]\ncpus = 1\n[edge a b]\nbandwidth = 1\n",
                   "network matrix misses edge b -> a");
    expect_invalid("[site b]\ncpus = 1\n"
                   "[edge a b]\nbandwidth = 1\n[edge b a]\nbandwidth = 1\n"
                   "[edge a b]\nbandwidth = 9\n",
                   "duplicate edge a -> b");
    expect_invalid("[edge a ghost]\nbandwidth = 1\n", "edge to unknown site 'ghost'");
    expect_invalid("[job j]\nowner = ghost\norigin = a\nservice = 1\n", "unknown owner 'ghost'");
    expect_invalid("[job j]\nowner = u\norigin = ghost\nservice = 1\n",
                   "unknown origin site 'ghost'");
    expect_invalid("[job j]\nowner = u\norigin = a\nservice = 1\nclass = fast\n",
                   "class must be compute/data/both");
    expect_invalid("[job j]\nowner = u\norigin = a\nservice = -1\n", "service must be >= 0");
    expect_invalid("[job j]\nowner = u\norigin = a\nprocs = 0\n", "procs must be >= 1");
    expect_invalid("[group g]\nowner = u\norigin = a\nsize = 0\n", "size must be >= 1");
    expect_invalid("[poisson p]\nowners = u\norigin = a\nrate = 0\n", "rate must be > 0");
    expect_invalid("[poisson p]\norigin = a\nrate = 1\n", "owners must not be empty");
    expect_invalid("[user v]\nquota = 0\n", "quota must be > 0");
    expect_invalid("[site c]\ncpus = 0\n", "cpus must be >= 1");
    expect_invalid("[site c]\ncpus = 1\ncapability = 0\n", "capability must be > 0");
    expect_invalid("[site c]\ncpus = 1\nload = 1.5\n", "load");
    expect_invalid("[site c]\ncpus = 1\ncap.ghost = 3\n", "cap for unknown user 'ghost'");
    expect_invalid("[config]\nwindow_length = 1\n", "window_length must be >= 2");
    expect_invalid("[config]\nthrs = 1.5\n", "thrs");
    expect_invalid("[config]\nmissed_beats = 0\n", "missed_beats must be >= 1");

    // Loss of 1.0 means nothing ever crosses the link.
    expect_invalid("[site b]\ncpus = 1\n"
                   "[edge a b]\nbandwidth = 1\nloss = 1\n[edge b a]\nbandwidth = 1\n",
                   "loss");
}

TEST_CASE("rendering and reparsing is a fixed point") {
    for (const char* name :
         {"fig4.scenario", "fig6.scenario", "littles.scenario", "overload.scenario",
          "sweep.scenario", "underload.scenario"}) {
        Scenario sc = parse_scenario(scenario_path(name));
        std::string once = render(sc);
        Scenario back = parse_scenario_text(once, sc.name);
        CHECK(render(back) == once);
    }
}

TEST_CASE("rendering keeps the optional fields") {
    Scenario sc = parse_with(R"(
[site b]
cpus = 2
datasets = cms atlas
cap.u = 7

[edge a b]
bandwidth = 2.5
loss = 0.125

[edge b a]
bandwidth = 2.5
loss = 0.125

[job j]
owner = u
origin = a
service = 1
class = both

[poisson p]
owners = u
origin = b
rate = 3
count = 5
start = 0.5
)");
    std::string once = render(sc);
    CHECK(once.find("datasets = atlas cms") != std::string::npos);
    CHECK(once.find("cap.u = 7") != std::string::npos);
    CHECK(once.find("class = both") != std::string::npos);
    CHECK(once.find("owners = u") != std::string::npos);
    Scenario back = parse_scenario_text(once, "inline");
    CHECK(render(back) == once);
    CHECK(back.sites[1].datasets.count("cms") == 1);
    CHECK(back.sites[1].user_caps.at("u") == 7);
    CHECK(back.poisson[0].start == 0.5);
}
