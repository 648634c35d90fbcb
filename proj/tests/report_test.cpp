#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "diana/report.hpp"

using namespace diana;

namespace {

Metrics tiny_metrics(Policy p, uint64_t seed, double queue_time, size_t jobs) {
    Metrics m;
    m.policy = p;
    m.seed = seed;
    for (size_t i = 0; i < jobs; ++i) {
        JobRecord r;
        r.id = "j" + std::to_string(i);
        r.owner = "u";
        r.origin = "a";
        r.first_site = "a";
        r.exec_site = "b";
        r.procs = 1;
        r.submit_time = double(i);
        r.start_time = double(i) + queue_time;
        r.complete_time = r.start_time + 1.0;
        r.priority_at_submit = 0.25;
        r.queue_at_submit = 2;
        r.priority_at_start = 0.75;
        r.queue_at_start = 1;
        r.queue_time = queue_time;
        r.execution_time = 1.0;
        r.turnaround = queue_time + 1.0;
        r.migrated = (i % 2 == 1);
        m.jobs.push_back(r);
    }
    m.makespan = double(jobs) + queue_time;
    m.mean_queue_time = queue_time;
    m.mean_execution_time = 1.0;
    m.mean_turnaround = queue_time + 1.0;
    m.throughput = jobs / m.makespan;
    return m;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string line;
    while (std::getline(is, line)) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("numbers print to six significant digits") {
    CHECK(fmt(0.0) == "0");
    CHECK(fmt(10.0) == "10");
    CHECK(fmt(1.0 / 3.0) == "0.333333");
    CHECK(fmt(0.45864661654135338) == "0.458647");
    CHECK(fmt(16.666666666) == "16.6667");
    CHECK(fmt(1234567.0) == "1.23457e+06");
    CHECK(fmt(-0.63055555) == "-0.630556");
}

TEST_CASE("the per-job table carries placement, ranks and the migration bit") {
    Metrics m = tiny_metrics(Policy::Diana, 3, 0.5, 2);
    auto lines = lines_of(jobs_csv(m));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] ==
          "id,owner,group,origin,first_site,exec_site,procs,submit_time,start_time,"
          "complete_time,priority_at_submit,queue_at_submit,priority_at_start,"
          "queue_at_start,queue_time,execution_time,turnaround,migrated");
    CHECK(lines[1] == "j0,u,,a,a,b,1,0,0.5,1.5,0.25,2,0.75,1,0.5,1,1.5,0");
    CHECK(lines[2] == "j1,u,,a,a,b,1,1,1.5,2.5,0.25,2,0.75,1,0.5,1,1.5,1");
}

TEST_CASE("the site series table keeps its column order") {
    Metrics m;
    SiteSample s;
    s.time = 1.25;
    s.site_id = "a";
    s.queue_length = 3;
    s.running = 2;
    s.imports = 1;
    s.exports = 0;
    s.completed = 7;
    m.site_series.push_back(s);
    CHECK(sites_csv(m) ==
          "time,site,queue_length,running,imports,exports,completed\n"
          "1.25,a,3,2,1,0,7\n");
}

TEST_CASE("the summary is one labelled row") {
    Metrics m = tiny_metrics(Policy::GreedyBestSite, 11, 0.25, 4);
    m.sites["a"].exports = 2;
    m.sites["b"].imports = 2;
    auto lines = lines_of(summary_csv(m));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "policy,seed,jobs,makespan,mean_queue_time,mean_execution_time,mean_turnaround,"
          "throughput,migrations,exports,imports");
    CHECK(lines[1] == "greedy,11,4,4.25,0.25,1,1.25,0.941176,0,2,2");
}

TEST_CASE("the comparison keeps run rows and appends first-seen seed means") {
    std::vector<Metrics> runs;
    runs.push_back(tiny_metrics(Policy::Diana, 1, 0.4, 2));
    runs.push_back(tiny_metrics(Policy::FcfsSingleQueue, 1, 0.8, 2));
    runs.push_back(tiny_metrics(Policy::Diana, 2, 0.6, 2));
    runs.push_back(tiny_metrics(Policy::FcfsSingleQueue, 2, 1.0, 2));
    runs.push_back(tiny_metrics(Policy::Diana, 1, 0.1, 5));

    auto lines = lines_of(comparison_csv(runs));
    // header + 5 run rows + 3 (policy, jobs) means
    REQUIRE(lines.size() == 9);
    CHECK(lines[1].substr(0, 8) == "diana,1,");
    CHECK(lines[6] == "diana,mean,2,2.5,0.5,1,1.5,,,,");
    CHECK(lines[7] == "fcfs,mean,2,2.9,0.9,1,1.9,,,,");
    CHECK(lines[8] == "diana,mean,5,5.1,0.1,1,1.1,,,,");
}

TEST_CASE("a run report lands as three files on disk") {
    Metrics m = tiny_metrics(Policy::Diana, 5, 0.5, 3);
    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "diana_report_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());

    auto paths = write_run_report(m, dir.string());
    REQUIRE(paths.size() == 3);
    CHECK(paths[0].find("jobs.csv") != std::string::npos);
    CHECK(paths[1].find("sites.csv") != std::string::npos);
    CHECK(paths[2].find("summary.csv") != std::string::npos);

    std::ifstream in(paths[0], std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == jobs_csv(m));

    std::filesystem::remove_all(dir.parent_path());
}
