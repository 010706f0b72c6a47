// Acceptance gate: one line per criterion, exit status 0 iff all pass.
//
//   acceptance <path to the sphc binary>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "sphc/building.hpp"
#include "sphc/cells.hpp"
#include "sphc/coxeter.hpp"
#include "sphc/harmonic.hpp"
#include "sphc/indexsets.hpp"
#include "sphc/spmodel.hpp"

namespace {

using namespace sphc;

// Collects failures for one criterion.
struct Gate {
  std::ostringstream why;
  bool ok = true;

  void require(bool cond, const std::string& msg) {
    if (cond) return;
    if (ok) why << msg;
    ok = false;
  }
  void report(const CheckReport& r) {
    require(r.passed(), r.check + " " + r.params.dump() + ": " + to_string(r.status) + " " + r.witness.value_or(""));
  }
};

std::vector<IndexSet> all_subsets(int n) {
  std::vector<IndexSet> out;
  for (unsigned m = 0; m < (1u << n); ++m) {
    std::vector<int> e;
    for (int i = 1; i <= n; ++i)
      if (m & (1u << (i - 1))) e.push_back(i);
    out.emplace_back(n, e);
  }
  return out;
}

std::int64_t power(int q, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= q;
  return r;
}

void weyl_identities(Gate& g) {
  for (int n = 1; n <= 5; ++n) {
    g.report(verify_coxeter_relations(n));
    g.report(verify_sw(n));
    g.report(verify_index_translation(n));
    g.report(verify_rotation_word(n));
    g.report(verify_wi_inverse_factorization(n));
  }
}

void coset_decompositions(Gate& g) {
  for (int n = 1; n <= 5; ++n) {
    g.report(verify_box_identities(n));
    const auto r = verify_coset_decompositions(n);
    g.report(r);
    g.require(r.counts.instances > 0, "no coset instances at n=" + std::to_string(n));
  }
}

void bruhat_correspondence(Gate& g) {
  for (auto [n, q] : {std::pair{1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 2}}) {
    const FiniteGL G(n, q);
    const auto B = parabolic_kappa(G, IndexSet::empty(n));
    std::map<WeylElement, std::int64_t> sizes;
    std::int64_t total = 0;
    for (auto x : enumerate_group(G)) {
      ++sizes[bruhat_class_kappa(G, x)];
      ++total;
    }
    const std::string at = " in GL_" + std::to_string(n + 1) + "(F_" + std::to_string(q) + ")";
    g.require(static_cast<std::int64_t>(sizes.size()) == static_cast<std::int64_t>(all_elements(n).size()),
              "class count" + at);
    for (const auto& [w, s] : sizes)
      g.require(s == power(q, w.length()) * static_cast<std::int64_t>(B.size()), "|BwB| != q^l(w)|B| for " + w.to_string() + at);
    g.require(total == G.order(), "classes do not cover the group" + at);
    g.report(verify_bruhat_bijection(n, q, IndexSet::empty(n), IndexSet::empty(n)));
    if (n == 2 && q == 2) g.require(sizes.size() == 6 && total == 168, "GL_3(F_2): expected 6 classes, 168 elements");
  }
}

void decomposition_of_CI(Gate& g) {
  for (auto [n, q] : {std::pair{1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 2}})
    for (const auto& I : all_subsets(n))
      if (I.size() < n) g.report(verify_decomp_CI(n, q, I));
  const auto r = verify_decomp_CI(2, 2, IndexSet(2, {2}));
  g.require(r.metrics["size"] == 72, "worked instance size " + r.metrics["size"].dump());
  auto cells = r.metrics["cell_sizes"].get<std::vector<int>>();
  std::sort(cells.begin(), cells.end());
  g.require(cells == std::vector<int>{24, 48}, "worked instance cells " + r.metrics["cell_sizes"].dump());
}

void iwasawa_normal_form(Gate& g) {
  for (auto [n, q] : {std::pair{1, 2}, {2, 2}, {2, 3}, {3, 2}}) {
    const auto r = verify_iwasawa(n, q, 1000, 100, 42);
    g.report(r);
    g.require(r.counts.instances >= 1000, "fewer than 1000 samples");
    for (const auto& I1 : all_subsets(n))
      for (const auto& I2 : all_subsets(n)) g.report(verify_bourbaki3_sampled(n, q, I1, I2, 500, 42, 2));
  }
}

void building_checks(Gate& g) {
  for (int n = 1; n <= 3; ++n) g.report(verify_lemma_wij(n, 2));
  for (int r = 1; r <= 4; ++r) {
    const Ball b = ball(1, 2, r);
    g.require(b.boundary_size() == 3 * (1 << (r - 1)), "tree boundary at radius " + std::to_string(r));
  }
  g.report(verify_ball_counts(1, 2, 4));
  g.report(verify_ball_counts(2, 2, 2));
  g.require(neighbors(standard_vertex(2, 0, 2)).size() == 14, "GL_3(F_2) link size");
  for (const auto& I : all_subsets(2)) {
    const int k = 2 - I.size();
    for (int j = 1; j <= k; ++j) g.report(verify_prov5(2, 2, I, j, 42));
  }
}

void sp_memberships(Gate& g) {
  for (int n = 1; n <= 4; ++n)
    for (int k = 1; k <= n; ++k) {
      g.report(verify_astuce0(n, k));
      if (k >= 2) g.report(verify_astuce_sweep(n, k));
      for (const auto& r : verify_sp_identities(n, k)) {
        g.report(r);
        if (r.counts.instances > 0)
          g.require(r.metrics.value("certificates_verified", 0) > 0, r.check + " passed without certificates");
      }
      g.report(sp_single_vector_control(n, k));
    }
}

void harmonic_tree(Gate& g) {
  for (int q : {2, 3}) {
    const auto r = verify_maintheorem_tree(q, 4, 20, 42);
    g.report(r);
    g.require(r.metrics["hc_instances"]["harmonic.hc2"].get<std::int64_t>() > 0, "no HC2 instances");
    const auto c = harmonic_corruption_control(q, 4, 42);
    g.report(c);
    g.require(c.metrics["inner_check"] == "harmonic.hc2", "corruption not seen by HC2");
  }
  const auto r = verify_conditionhc3_all(2, 2);
  g.report(r);
  g.require(r.metrics["m"].size() > 0, "multiplicity not reported");
  std::cout << "    m per (I, j) at n=2, q=2: " << r.metrics["m"].dump() << "\n";
}

// Runs the CLI and returns its exit status; the report goes to `path`.
int run_cli(const std::string& exe, const std::string& path) {
  const std::string cmd = "\"" + exe + "\" all --seed 42 --report \"" + path + "\" 2>/dev/null";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

nlohmann::json without_timing(const std::string& path) {
  std::ifstream f(path);
  auto j = nlohmann::json::parse(f);
  for (auto& r : j) r.erase("elapsed_ms");
  return j;
}

void full_grid(Gate& g, const std::string& exe) {
  const std::string a = "acceptance_all_1.json", b = "acceptance_all_2.json";
  const auto start = std::chrono::steady_clock::now();
  const int s1 = run_cli(exe, a);
  const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const int s2 = run_cli(exe, b);
  g.require(s1 == 0 && s2 == 0, "exit status " + std::to_string(s1) + ", " + std::to_string(s2));
  g.require(secs < 600, "first run took " + std::to_string(secs) + " s");
  const auto ja = without_timing(a), jb = without_timing(b);
  g.require(ja == jb, "reports differ between runs");
  g.require(ja.size() > 0, "empty report");
  std::cout << "    all --seed 42: " << ja.size() << " reports in " << static_cast<int>(secs) << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <sphc binary>\n";
    return 2;
  }
  const std::string exe = argv[1];
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no time limit
    std::function<void(Gate&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Weyl identities, n <= 5", 60, weyl_identities},
      {2, "coset decompositions, n <= 5", 300, coset_decompositions},
      {3, "Bruhat classes and cell sizes over F_q", 0, bruhat_correspondence},
      {4, "cell decomposition of C_I over F_q", 0, decomposition_of_CI},
      {5, "Iwasawa normal form and sampled double cosets", 0, iwasawa_normal_form},
      {6, "building: wij, ball counts, prov5", 0, building_checks},
      {7, "Sp-model memberships with certificates", 0, sp_memberships},
      {8, "harmonic cochains on the tree, conditionhc3", 0, harmonic_tree},
      {9, "full default grid via the CLI", 600, [&](Gate& g) { full_grid(g, exe); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Gate g;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(g);
    } catch (const std::exception& e) {
      g.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0) g.require(secs < c.limit_s, "over the time limit");
    std::printf("[%s] %d %s (%.1f s)%s%s\n", g.ok ? "PASS" : "FAIL", c.id, c.name, secs, g.ok ? "" : ": ",
                g.ok ? "" : g.why.str().c_str());
    std::fflush(stdout);
    if (!g.ok) ++failed;
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
