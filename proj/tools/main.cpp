// sphc: batch verification front end.
//
//   sphc <suite> [--n N] [--q Q] [--k K] [--I 1,3] [--radius R] [--samples S]
//                [--seed 42] [--mod M] [--report PATH] [--dot PATH] [--jobs J]
//
// Writes a JSON array of reports (stdout by default) and exits 0 iff every
// report passes.
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "sphc/building.hpp"
#include "suites.hpp"

int main(int argc, char** argv) {
  using namespace sphc;
  CLI::App app{"Verification suites for Weyl-group cells, the Sp-model and harmonic cochains"};
  app.require_subcommand(1);

  int n = 0, q = 0, k = 0, radius = 0, samples = 0;
  std::string I, report_path, dot_path;
  cli::Options o;
  o.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  std::vector<CLI::App*> subs;
  for (const auto& name : cli::suite_names()) {
    auto* s = app.add_subcommand(name, name == "all" ? "run every suite" : "run the " + name + " suite");
    s->add_option("--n", n, "rank n (GL_{n+1})")->check(CLI::Range(1, 6));
    s->add_option("--q", q, "residue field size")->check(CLI::IsMember({2, 3, 5, 7}));
    s->add_option("--k", k, "cell dimension")->check(CLI::Range(0, 6));
    s->add_option("--I", I, "index set as a comma list, empty for the empty set");
    s->add_option("--radius", radius, "ball radius")->check(CLI::Range(0, 4));
    s->add_option("--samples", samples, "random samples per check")->check(CLI::PositiveNumber);
    s->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    s->add_option("--mod", o.mod, "coefficients in Z/M (0 for Z)")->check(CLI::NonNegativeNumber);
    s->add_option("--report", report_path, "write the JSON report here instead of stdout");
    s->add_option("--dot", dot_path, "write the 1-skeleton of a building ball as DOT");
    s->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    subs.push_back(s);
  }
  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = app.get_subcommands().front();
  const auto given = [&](const char* flag) { return chosen->count(flag) > 0; };
  if (given("--n")) o.n = n;
  if (given("--q")) o.q = q;
  if (given("--k")) o.k = k;
  if (given("--I")) o.I = I;
  if (given("--radius")) o.radius = radius;
  if (given("--samples")) o.samples = samples;
  if (o.mod == 1) {
    std::cerr << "--mod: use 0 for Z or a modulus >= 2\n";
    return 2;
  }

  std::vector<cli::Task> tasks;
  try {
    tasks = cli::build_suite(chosen->get_name(), o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  }

  if (!dot_path.empty()) {
    try {
      const int dn = o.n.value_or(1);
      const Ball b = ball(dn, o.q.value_or(2), o.radius.value_or(dn == 1 ? 3 : 1));
      std::ofstream(dot_path) << to_dot(b);
    } catch (const std::invalid_argument& e) {
      std::cerr << "--dot: " << e.what() << "\n";
      return 2;
    }
  }

  const auto reports = cli::run_tasks(tasks, o.jobs);
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) out.push_back(to_json(r));
  if (report_path.empty()) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::ofstream f(report_path);
    if (!f) {
      std::cerr << "cannot write " << report_path << "\n";
      return 2;
    }
    f << out.dump(2) << "\n";
  }
  std::cerr << cli::summary(reports);
  return cli::all_passed(reports) ? 0 : 1;
}
