#include "suites.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sphc/building.hpp"
#include "sphc/cells.hpp"
#include "sphc/coxeter.hpp"
#include "sphc/harmonic.hpp"
#include "sphc/spmodel.hpp"

namespace sphc::cli {

namespace {

using Reports = std::vector<CheckReport>;
using NQ = std::pair<int, int>;

std::vector<int> range(int a, int b) {
  std::vector<int> out;
  for (int i = a; i <= b; ++i) out.push_back(i);
  return out;
}

std::vector<int> ranks(const Options& o, int lo, int hi) { return o.n ? std::vector<int>{*o.n} : range(lo, hi); }

// (n, q) grid filtered by --n and --q; both flags together give a single pair.
std::vector<NQ> fields(const Options& o, const std::vector<NQ>& grid) {
  if (o.n && o.q) return {{*o.n, *o.q}};
  std::vector<NQ> out;
  for (auto [n, q] : grid)
    if ((!o.n || n == *o.n) && (!o.q || q == *o.q)) out.emplace_back(n, q);
  return out;
}

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

// Proper subsets of {1..n}, or the one given by --I.
std::vector<IndexSet> proper_subsets(const Options& o, int n) {
  if (o.I) return {parse_index_set(n, *o.I)};
  std::vector<IndexSet> out;
  for (const auto& I : all_subsets(n))
    if (I.size() < n) out.push_back(I);
  return out;
}

bool far_apart(const IndexSet& a, const IndexSet& b) {
  for (int i : a.elements())
    for (int j : b.elements())
      if (std::abs(i - j) < 2) return false;
  return true;
}

void add(std::vector<Task>& t, std::string label, std::function<CheckReport()> f) {
  t.push_back({std::move(label), [f = std::move(f)] { return Reports{f()}; }});
}

void add_many(std::vector<Task>& t, std::string label, std::function<Reports()> f) {
  t.push_back({std::move(label), std::move(f)});
}

std::string tag(const char* what, int n, int q = 0) {
  std::string s = std::string(what) + " n=" + std::to_string(n);
  if (q) s += " q=" + std::to_string(q);
  return s;
}

// ------------------------------------------------------------------ suites

void weyl(const Options& o, std::vector<Task>& t) {
  const auto ns = ranks(o, 1, 5);
  for (int n : ns) {
    add(t, tag("coxeter_relations", n), [n] { return verify_coxeter_relations(n); });
    add(t, tag("sw", n), [n] { return verify_sw(n); });
    add(t, tag("index_translation", n), [n] { return verify_index_translation(n); });
    add(t, tag("rotation_word", n), [n] { return verify_rotation_word(n); });
    add(t, tag("wi_inverse", n), [n] { return verify_wi_inverse_factorization(n); });
  }
  const int nc = std::max(2, *std::max_element(ns.begin(), ns.end()));
  add(t, "weyl control", [nc] { return weyl_commutation_control(nc); });
}

void decomp(const Options& o, std::vector<Task>& t) {
  const auto ns = ranks(o, 1, 5);
  for (int n : ns) {
    add(t, tag("box_identities", n), [n] { return verify_box_identities(n); });
    add(t, tag("coset_decompositions", n), [n] { return verify_coset_decompositions(n); });
    if (o.I) {
      const IndexSet I = parse_index_set(n, *o.I);
      const auto comp = I.complement();
      if (comp.empty()) throw std::invalid_argument("--I must be a proper subset");
      for (int next = comp.back() + 1; next <= n + 1; ++next)
        add(t, tag("box_partitions", n), [I, next] { return verify_box_partitions(I, next); });
    }
  }
  const int nc = *std::max_element(ns.begin(), ns.end());
  add(t, "decomp control", [nc] { return decomp_short_box_control(nc); });
}

const std::vector<NQ> kFiniteGrid = {{1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 2}};

void finite(const Options& o, std::vector<Task>& t) {
  const auto grid = fields(o, kFiniteGrid);
  for (auto [n, q] : grid) {
    const auto subsets = o.I ? std::vector<IndexSet>{parse_index_set(n, *o.I)} : all_subsets(n);
    for (const auto& I1 : subsets)
      for (const auto& I2 : subsets) {
        add(t, tag("bruhat_bijection", n, q), [n, q, I1, I2] { return verify_bruhat_bijection(n, q, I1, I2); });
        if (!I1.elements().empty() && !I2.elements().empty() && far_apart(I1, I2))
          add(t, tag("remark_B", n, q), [n, q, I1, I2] { return verify_remark_B(n, q, I1, I2); });
      }
    for (const auto& I : proper_subsets(o, n)) {
      add(t, tag("decomp_CI", n, q), [n, q, I] { return verify_decomp_CI(n, q, I); });
      add(t, tag("parahoric_translates", n, q), [n, q, I] { return verify_parahoric_translates(n, q, I); });
    }
  }
  // The first (n, q, I) whose box can be cut.
  for (auto [n, q] : grid)
    for (const auto& I : proper_subsets(o, n)) {
      const auto b = box_C(I).bounds();
      if (b.empty() || b[0].second - b[0].first < 1) continue;
      add(t, "finite control", [n, q, I] { return finite_short_box_control(n, q, I); });
      return;
    }
  add(t, "finite control", [] { return finite_short_box_control(2, 2, IndexSet(2, {2})); });
}

void iwasawa(const Options& o, std::vector<Task>& t) {
  const int samples = o.samples.value_or(1000);
  const int triples = o.samples ? std::max(1, *o.samples / 2) : 500;
  const std::uint64_t seed = o.seed;
  for (auto [n, q] : fields(o, {{1, 2}, {2, 2}, {2, 3}, {3, 2}})) {
    add(t, tag("iwasawa", n, q), [=] { return verify_iwasawa(n, q, samples, 100, seed); });
    for (const auto& I1 : all_subsets(n))
      for (const auto& I2 : all_subsets(n))
        add(t, tag("bourbaki3", n, q), [=] { return verify_bourbaki3_sampled(n, q, I1, I2, triples, seed, 2); });
  }
  add(t, "iwasawa control", [seed] {
    return negative_control("iwasawa.negative_control", iwasawa_illegal_perturbation(2, 2, 20, seed));
  });
}

void building(const Options& o, std::vector<Task>& t) {
  const int q0 = o.q.value_or(2);
  const std::uint64_t seed = o.seed;
  for (int n : ranks(o, 1, 3)) add(t, tag("lemma_wij", n, q0), [n, q0] { return verify_lemma_wij(n, q0); });
  std::vector<std::tuple<int, int, int>> balls;
  if (o.radius || o.n || o.q) {
    const int n = o.n.value_or(1);
    balls.emplace_back(n, q0, o.radius.value_or(n == 1 ? 4 : 2));
  } else {
    balls = {{1, 2, 4}, {1, 3, 4}, {2, 2, 2}};
  }
  for (auto [n, q, r] : balls) add(t, tag("ball_counts", n, q), [n, q, r] { return verify_ball_counts(n, q, r); });
  for (auto [n, q] : fields(o, {{1, 2}, {1, 3}, {2, 2}})) {
    if (n > 2) continue;
    add(t, tag("building_invariants", n, q), [=] { return verify_building_invariants(n, q, 20, seed); });
    for (const auto& I : proper_subsets(o, n)) {
      const int k = n - I.size();
      for (int j = 1; j <= k; ++j) add(t, tag("prov5", n, q), [=] { return verify_prov5(n, q, I, j, seed); });
    }
  }
  add(t, "building control", [seed] {
    return negative_control("building.negative_control", building_wrong_group_orbit(2, 2, seed));
  });
}

void sp(const Options& o, std::vector<Task>& t) {
  const std::int64_t mod = o.mod;
  for (int n : ranks(o, 1, 4)) {
    const auto ks = o.k ? std::vector<int>{*o.k} : range(0, n);
    for (int k : ks) {
      add(t, tag("span_structure", n), [=] { return verify_span_structure(n, k, mod); });
      if (k == 0) continue;
      add(t, tag("astuce0", n), [=] { return verify_astuce0(n, k); });
      if (k >= 2) add(t, tag("astuce_sweep", n), [=] { return verify_astuce_sweep(n, k); });
      add_many(t, tag("sp_identities", n), [=] { return verify_sp_identities(n, k); });
      add(t, tag("maintheorem2", n), [=] { return verify_maintheorem2_reductions(n, k); });
      add(t, tag("sp control", n), [=] { return sp_single_vector_control(n, k); });
    }
    if (o.I) {
      const IndexSet I = parse_index_set(n, *o.I);
      const auto comp = I.complement();
      if (comp.empty()) throw std::invalid_argument("--I must be a proper subset");
      for (int next = comp.back() + 1; next <= n + 1; ++next) {
        add(t, tag("astuce2", n), [=] { return verify_astuce2_and_proprch1(n, I, next); });
        if (next <= n) add(t, tag("hc4_model", n), [=] { return verify_hc4_model(n, I, next); });
      }
      if (comp.back() == n) add(t, tag("hc2_model", n), [=] { return verify_hc2_model(n, I); });
    }
  }
  for (auto [n, q] : fields(o, kFiniteGrid))
    for (int k = 1; k <= n; ++k)
      if (!o.k || k == *o.k) add(t, tag("bruhat_twin", n, q), [=] { return verify_bruhat_twin(n, q, k); });
}

void harmonic(const Options& o, std::vector<Task>& t) {
  const auto qs = o.q ? std::vector<int>{*o.q} : std::vector<int>{2, 3};
  const int radius = o.radius.value_or(4);
  const int trials = o.samples.value_or(20);
  const std::uint64_t seed = o.seed;
  const std::int64_t mod = o.mod;
  for (int q : qs) {
    add(t, tag("maintheorem_tree", 1, q), [=] { return verify_maintheorem_tree(q, radius, trials, seed); });
    add(t, tag("corruption control", 1, q), [=] { return harmonic_corruption_control(q, radius, seed); });
    add_many(t, tag("checker controls", 1, q), [=] { return harmonic_checker_controls(q); });
    if (mod > 0)
      add_many(t, tag("tree mod", 1, q), [=] {
        std::mt19937_64 rng(seed);
        const Ball b = ball(1, q, radius);
        return check_all(measure_cochain(random_measure(q, 6, rng), b, mod), b);
      });
    for (int n : ranks(o, 1, 2)) {
      if (o.I) {
        const IndexSet I = parse_index_set(n, *o.I);
        const int k = n - I.size();
        for (int j = 1; j <= k; ++j)
          for (int l = j; l <= k; ++l)
            add(t, tag("conditionhc3", n, q), [=] { return verify_conditionhc3(n, q, I, j, l); });
      } else {
        add(t, tag("conditionhc3", n, q), [=] { return verify_conditionhc3_all(n, q); });
      }
      for (int k = 1; k <= n; ++k)
        if (!o.k || k == *o.k)
          add(t, tag("maintheorem1", n, q), [=] { return verify_maintheorem1_reductions(n, q, k); });
    }
  }
}

const std::map<std::string, void (*)(const Options&, std::vector<Task>&)>& registry() {
  static const std::map<std::string, void (*)(const Options&, std::vector<Task>&)> r = {
      {"weyl", weyl},       {"decomp", decomp}, {"finite", finite},     {"iwasawa", iwasawa},
      {"building", building}, {"sp", sp},       {"harmonic", harmonic},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"weyl", "decomp", "finite", "iwasawa",
                                                 "building", "sp", "harmonic", "all"};
  return names;
}

IndexSet parse_index_set(int n, const std::string& text) {
  std::vector<int> e;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size() || v < 1 || v > n)
      throw std::invalid_argument("--I: entry '" + item + "' is not in 1.." + std::to_string(n));
    e.push_back(v);
  }
  return IndexSet(n, e);
}

std::vector<Task> build_suite(const std::string& suite, const Options& o) {
  if (o.I && !o.n) throw std::invalid_argument("--I needs --n");
  std::vector<Task> tasks;
  if (suite == "all") {
    for (const auto& [name, f] : registry()) f(o, tasks);
    return tasks;
  }
  const auto it = registry().find(suite);
  if (it == registry().end()) throw std::invalid_argument("unknown suite " + suite);
  it->second(o, tasks);
  return tasks;
}

std::vector<CheckReport> run_tasks(const std::vector<Task>& tasks, int jobs) {
  std::vector<Reports> results(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i].run();
      } catch (const std::invalid_argument& e) {
        results[i] = {skipped_report(tasks[i].label, nlohmann::json::object(), e.what())};
      } catch (const std::out_of_range& e) {
        results[i] = {skipped_report(tasks[i].label, nlohmann::json::object(), e.what())};
      } catch (const std::exception& e) {
        CheckRecorder rec(tasks[i].label, nlohmann::json::object());
        rec.fail(std::string("exception: ") + e.what());
        results[i] = {rec.finish()};
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  Reports out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  std::stable_sort(out.begin(), out.end(), [](const CheckReport& a, const CheckReport& b) {
    if (a.check != b.check) return a.check < b.check;
    return a.params.dump() < b.params.dump();
  });
  return out;
}

bool all_passed(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed(); });
}

std::string summary(const std::vector<CheckReport>& reports) {
  std::map<Status, int> by;
  std::ostringstream os;
  for (const auto& r : reports) {
    ++by[r.status];
    if (!r.passed())
      os << to_string(r.status) << " " << r.check << " " << r.params.dump() << ": " << r.witness.value_or("") << "\n";
  }
  os << reports.size() << " reports: " << by[Status::kPass] << " pass, " << by[Status::kFail] << " fail, "
     << by[Status::kSkipped] << " skipped, " << by[Status::kInconclusive] << " inconclusive\n";
  return os.str();
}

}  // namespace sphc::cli
