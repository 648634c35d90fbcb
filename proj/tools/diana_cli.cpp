#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "diana/errors.hpp"
#include "diana/report.hpp"
#include "diana/scenario.hpp"
#include "diana/sim_engine.hpp"

namespace {

std::string default_out_dir() {
    if (const char* env = std::getenv("DIANA_OUT_DIR")) return env;
    return "out";
}

void print_warnings(const diana::Scenario& sc) {
    for (const auto& w : sc.warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_run(const std::string& scenario_path, const std::string& policy_name, uint64_t seed,
            const std::string& out_dir, int max_jobs) {
    diana::Scenario sc = diana::parse_scenario(scenario_path);
    print_warnings(sc);
    diana::Policy policy = diana::policy_from_string(policy_name);
    diana::Metrics m = diana::run(sc, policy, seed, max_jobs);
    for (const auto& p : diana::write_run_report(m, out_dir)) std::cout << p << "\n";
    std::cout << "jobs " << m.jobs.size() << ", makespan " << diana::fmt(m.makespan)
              << " h, mean queue time " << diana::fmt(m.mean_queue_time) << " h, migrations "
              << m.migrations.size() << "\n";
    return 0;
}

int cmd_compare(const std::string& scenario_path, const std::vector<std::string>& policy_names,
                const std::vector<uint64_t>& seeds, const std::vector<int>& counts,
                const std::string& out_dir, int jobs) {
    diana::Scenario sc = diana::parse_scenario(scenario_path);
    print_warnings(sc);
    std::vector<diana::Policy> policies;
    for (const auto& n : policy_names) policies.push_back(diana::policy_from_string(n));

    // Task grid: one compare() per (count, seed); results keep grid order so
    // the CSV is deterministic no matter how many workers ran.
    std::vector<int> count_list = counts.empty() ? std::vector<int>{0} : counts;
    struct Task {
        int count;
        uint64_t seed;
    };
    std::vector<Task> tasks;
    for (int c : count_list)
        for (uint64_t s : seeds) tasks.push_back({c, s});
    std::vector<std::vector<diana::Metrics>> results(tasks.size());

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mu;
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size() || failed.load()) return;
            try {
                results[i] = diana::compare(sc, policies, tasks[i].seed, tasks[i].count);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mu);
                failed.store(true);
                error = e.what();
                return;
            }
        }
    };
    int workers = std::max(1, jobs);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) throw diana::Error(error);

    std::vector<diana::Metrics> flat;
    for (auto& r : results)
        for (auto& m : r) flat.push_back(std::move(m));
    std::filesystem::create_directories(out_dir);
    std::filesystem::path p = std::filesystem::path(out_dir) / "comparison.csv";
    std::ofstream f(p, std::ios::binary);
    if (!f) throw diana::Error("cannot write " + p.string());
    f << diana::comparison_csv(flat);
    std::cout << p.string() << "\n";
    std::cout << flat.size() << " runs over " << policies.size() << " policies, "
              << seeds.size() << " seeds, " << count_list.size() << " job counts\n";
    return 0;
}

int cmd_validate(const std::string& scenario_path) {
    diana::Scenario sc = diana::parse_scenario(scenario_path);
    print_warnings(sc);
    std::cout << scenario_path << ": ok (" << sc.sites.size() << " sites, " << sc.users.size()
              << " users, " << sc.jobs.size() << " jobs, " << sc.groups.size() << " groups, "
              << sc.poisson.size() << " generators)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic multi-site grid scheduling simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string policy = "diana";
    uint64_t seed = 1;
    std::string out_dir = default_out_dir();
    int max_jobs = 0;

    auto* run = app.add_subcommand("run", "Simulate one scenario under one policy");
    run->add_option("--scenario", scenario_path, "Scenario file")->required();
    run->add_option("--policy", policy, "diana, greedy or fcfs");
    run->add_option("--seed", seed, "Workload RNG seed");
    run->add_option("--out", out_dir, "Output directory (default $DIANA_OUT_DIR or ./out)");
    run->add_option("--max-jobs", max_jobs, "Truncate the single-job stream");

    std::vector<std::string> policies{"diana", "greedy", "fcfs"};
    std::vector<uint64_t> seeds{1};
    std::vector<int> counts;
    int jobs = 1;

    auto* cmp = app.add_subcommand("compare", "Replay one workload under several policies");
    cmp->add_option("--scenario", scenario_path, "Scenario file")->required();
    cmp->add_option("--policies", policies, "At least two of diana/greedy/fcfs")
        ->delimiter(',');
    cmp->add_option("--seeds", seeds, "Seeds to average over")->delimiter(',');
    cmp->add_option("--counts", counts, "Job-count sweep (truncations of the stream)")
        ->delimiter(',');
    cmp->add_option("--out", out_dir, "Output directory (default $DIANA_OUT_DIR or ./out)");
    cmp->add_option("--jobs", jobs, "Worker threads across (count, seed) tasks");

    auto* val = app.add_subcommand("validate", "Parse and validate a scenario file");
    val->add_option("--scenario", scenario_path, "Scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario_path, policy, seed, out_dir, max_jobs);
        if (cmp->parsed()) return cmd_compare(scenario_path, policies, seeds, counts, out_dir, jobs);
        if (val->parsed()) return cmd_validate(scenario_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
