#pragma once

#include <string>
#include <vector>

#include "diana/sim_engine.hpp"

namespace diana {

// Fixed-precision number formatting (6 significant digits) keeps CSV
// output byte-stable across runs and diffable across changes.
std::string fmt(double v);

std::string jobs_csv(const Metrics& m);
std::string sites_csv(const Metrics& m);
std::string summary_csv(const Metrics& m);

// One row per run plus one seed-averaged row per (policy, job count).
std::string comparison_csv(const std::vector<Metrics>& runs);

// Writes jobs.csv, sites.csv and summary.csv under out_dir (created on
// demand). Returns the paths written.
std::vector<std::string> write_run_report(const Metrics& m, const std::string& out_dir);

}  // namespace diana
