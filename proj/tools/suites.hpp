// Parameter grids for the command-line suites and a small worker pool.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sphc/indexsets.hpp"
#include "sphc/report.hpp"

namespace sphc::cli {

struct Options {
  std::optional<int> n, q, k, radius, samples;
  std::optional<std::string> I;  // comma list, "" for the empty set
  std::uint64_t seed = 42;
  std::int64_t mod = 0;
  int jobs = 1;
};

struct Task {
  std::string label;
  std::function<std::vector<CheckReport>()> run;
};

const std::vector<std::string>& suite_names();
// Throws std::invalid_argument for an unknown suite or inconsistent flags.
std::vector<Task> build_suite(const std::string& suite, const Options& o);
// Runs the tasks on `jobs` threads. Guard violations become skipped reports and
// other exceptions failed ones. Sorted by check name, then params.
std::vector<CheckReport> run_tasks(const std::vector<Task>& tasks, int jobs);

IndexSet parse_index_set(int n, const std::string& text);
bool all_passed(const std::vector<CheckReport>& reports);
// One line per non-passing report plus totals.
std::string summary(const std::vector<CheckReport>& reports);

}  // namespace sphc::cli
