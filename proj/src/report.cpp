#include "diana/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "diana/errors.hpp"

namespace diana {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string jobs_csv(const Metrics& m) {
    std::ostringstream out;
    out << "id,owner,group,origin,first_site,exec_site,procs,submit_time,start_time,"
           "complete_time,priority_at_submit,queue_at_submit,priority_at_start,"
           "queue_at_start,queue_time,execution_time,turnaround,migrated\n";
    for (const auto& r : m.jobs) {
        out << r.id << ',' << r.owner << ',' << r.group_id << ',' << r.origin << ','
            << r.first_site << ',' << r.exec_site << ',' << r.procs << ','
            << fmt(r.submit_time) << ',' << fmt(r.start_time) << ',' << fmt(r.complete_time)
            << ',' << fmt(r.priority_at_submit) << ',' << r.queue_at_submit << ','
            << fmt(r.priority_at_start) << ',' << r.queue_at_start << ','
            << fmt(r.queue_time) << ',' << fmt(r.execution_time) << ',' << fmt(r.turnaround)
            << ',' << (r.migrated ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string sites_csv(const Metrics& m) {
    std::ostringstream out;
    out << "time,site,queue_length,running,imports,exports,completed\n";
    for (const auto& s : m.site_series) {
        out << fmt(s.time) << ',' << s.site_id << ',' << s.queue_length << ',' << s.running
            << ',' << s.imports << ',' << s.exports << ',' << s.completed << '\n';
    }
    return out.str();
}

namespace {

long total_imports(const Metrics& m) {
    long n = 0;
    for (const auto& [id, t] : m.sites) n += t.imports;
    return n;
}

long total_exports(const Metrics& m) {
    long n = 0;
    for (const auto& [id, t] : m.sites) n += t.exports;
    return n;
}

const char* summary_header =
    "policy,seed,jobs,makespan,mean_queue_time,mean_execution_time,mean_turnaround,"
    "throughput,migrations,exports,imports\n";

void summary_row(std::ostringstream& out, const Metrics& m) {
    out << to_string(m.policy) << ',' << m.seed << ',' << m.jobs.size() << ','
        << fmt(m.makespan) << ',' << fmt(m.mean_queue_time) << ','
        << fmt(m.mean_execution_time) << ',' << fmt(m.mean_turnaround) << ','
        << fmt(m.throughput) << ',' << m.migrations.size() << ',' << total_exports(m) << ','
        << total_imports(m) << '\n';
}

}  // namespace

std::string summary_csv(const Metrics& m) {
    std::ostringstream out;
    out << summary_header;
    summary_row(out, m);
    return out.str();
}

std::string comparison_csv(const std::vector<Metrics>& runs) {
    std::ostringstream out;
    out << summary_header;
    for (const auto& m : runs) summary_row(out, m);

    struct Acc {
        int n = 0;
        double queue = 0.0, exec = 0.0, turn = 0.0, makespan = 0.0;
        size_t jobs = 0;
    };
    std::map<std::pair<std::string, size_t>, Acc> agg;  // (policy, jobs) in run order
    std::vector<std::pair<std::string, size_t>> order;
    for (const auto& m : runs) {
        std::pair<std::string, size_t> key{to_string(m.policy), m.jobs.size()};
        if (!agg.count(key)) order.push_back(key);
        Acc& a = agg[key];
        a.n += 1;
        a.queue += m.mean_queue_time;
        a.exec += m.mean_execution_time;
        a.turn += m.mean_turnaround;
        a.makespan += m.makespan;
        a.jobs = m.jobs.size();
    }
    for (const auto& key : order) {
        const Acc& a = agg.at(key);
        out << key.first << ",mean," << a.jobs << ',' << fmt(a.makespan / a.n) << ','
            << fmt(a.queue / a.n) << ',' << fmt(a.exec / a.n) << ',' << fmt(a.turn / a.n)
            << ",,,,\n";
    }
    return out.str();
}

std::vector<std::string> write_run_report(const Metrics& m, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> paths;
    auto emit = [&](const std::string& name, const std::string& body) {
        std::filesystem::path p = std::filesystem::path(out_dir) / name;
        std::ofstream f(p, std::ios::binary);
        if (!f) throw Error("cannot write " + p.string());
        f << body;
        paths.push_back(p.string());
    };
    emit("jobs.csv", jobs_csv(m));
    emit("sites.csv", sites_csv(m));
    emit("summary.csv", summary_csv(m));
    return paths;
}

}  // namespace diana
