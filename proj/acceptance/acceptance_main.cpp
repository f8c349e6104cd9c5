// Copyright 2026 The popnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance battery: one PASS/FAIL line per criterion. Arguments restrict
// the run to the listed criterion numbers.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "popnet/bn_io.hpp"
#include "popnet/errors.hpp"
#include "popnet/generator.hpp"
#include "popnet/inference.hpp"
#include "popnet/matching.hpp"
#include "popnet/metrics.hpp"
#include "popnet/transitivity.hpp"
#include "../tests/test_support.hpp"

namespace fs = std::filesystem;
using namespace popnet;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr std::size_t kSeeds = 10;

GenerationPlan kenya_plan(std::size_t n, std::uint64_t seed) {
  PlanOverrides o;
  o.population = n;
  o.seed = seed;
  return with_overrides(load_plan(testing::kenya_dir() / "kenya.plan"), o);
}

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

// Homophily compatibility, link-per-dyad and self-link audit of one store.
struct Audit {
  std::size_t homophily_links = 0;
  std::size_t incompatible = 0;
  std::size_t shared_dyads = 0;
  std::size_t self_links = 0;

  void add(const Audit& o) {
    homophily_links += o.homophily_links;
    incompatible += o.incompatible;
    shared_dyads += o.shared_dyads;
    self_links += o.self_links;
  }
  bool clean() const { return incompatible == 0 && shared_dyads == 0 && self_links == 0; }
};

Audit audit_links(const PopulationStore& store, const GenerationPlan& plan) {
  Audit a;
  std::map<LinkTypeId, HomophilyRule> rules;
  for (const PlanRule& r : plan.rules)
    if (const auto* h = std::get_if<HomophilyEntry>(&r.body))
      rules.emplace(store.link_type_id(h->link_type),
                    load_homophily_rule(h->network_file, store.attribute_bn()));
  std::unordered_set<std::uint64_t> dyads;
  for (const Link& l : store.links()) {
    if (l.source == l.target) ++a.self_links;
    auto lo = std::min(l.source, l.target), hi = std::max(l.source, l.target);
    if (!dyads.insert((std::uint64_t{lo} << 32) | hi).second) ++a.shared_dyads;
    auto it = rules.find(l.type);
    if (it == rules.end()) continue;
    ++a.homophily_links;
    const Agent& s = store.agent(l.source);
    const Agent& t = store.agent(l.target);
    bool directed = store.link_types()[l.type].directed;
    double c = compatibility(it->second, s, t);
    if (c == 0.0 && !directed) c = compatibility(it->second, t, s);
    if (!(c > 0.0)) ++a.incompatible;
  }
  return a;
}

// Shared between criteria 5, 6 and 7: homophily error means and link audits
// of the bundled plan at the two population sizes.
struct KenyaBattery {
  bool ran = false;
  std::map<std::size_t, std::map<std::string, double>> mean_error;  // N -> type -> mean
  Audit audit;
  std::size_t runs = 0;
  std::size_t open_after_closure = 0;
  std::size_t closure_checks = 0;
};

KenyaBattery& kenya_battery() {
  static KenyaBattery b;
  if (b.ran) return b;
  b.ran = true;
  for (std::size_t n : {std::size_t{500}, std::size_t{10000}}) {
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
      GenerationPlan plan = kenya_plan(n, seed);
      GenerationResult r = run_generation(plan, nullptr, false);
      for (const auto& [type, e] : r.report.errors.matching) b.mean_error[n][type] += e / kSeeds;
      b.audit.add(audit_links(r.store, plan));
      for (const PlanRule& pr : plan.rules)
        if (const auto* t = std::get_if<TransitivityRule>(&pr.body)) {
          if (t->probability != 1.0) continue;
          b.open_after_closure += enumerate_open_triads(r.store, *t).size();
          ++b.closure_checks;
        }
      ++b.runs;
    }
  }
  return b;
}

Outcome inference_exactness() {
  auto start = Clock::now();
  std::mt19937_64 rng(20260101);
  double worst = 0.0;
  std::size_t queries = 0;
  for (int n = 0; n < 200; ++n) {
    BayesianNetwork bn = testing::random_network(rng, {.max_variables = 10, .max_domain = 4});
    for (int trial = 0; trial < 3; ++trial) {
      Evidence ev = testing::random_evidence(rng, bn, 3);
      double pe = testing::oracle::evidence_probability(bn, ev);
      worst = std::max(worst, std::abs(probability_of_evidence(bn, ev) - pe));
      if (pe == 0.0) continue;
      auto all = testing::oracle::posteriors(bn, ev);
      for (VarId q = 0; q < bn.size(); ++q) {
        auto got = posterior(bn, ev, q);
        for (std::size_t k = 0; k < got.size(); ++k)
          worst = std::max(worst, std::abs(got[k] - all[q][k]));
        ++queries;
      }
    }
  }
  double t = seconds_since(start);
  return {worst <= 1e-9 && t < 60.0,
          std::to_string(queries) + " posteriors, max deviation " + fmt(worst, 3) + " (limit 1e-9), " +
              fmt(t, 3) + " s (limit 60 s)"};
}

Outcome marital_table_reproduction() {
  BayesianNetwork bn = load_bn_file(testing::kenya_dir() / "attributes.bn");
  double by_slice = posterior(bn,
                              Evidence::from_labels(bn, {{"gender", "male"}, {"ageSlices", "15-19"}}),
                              "maritalStatus")
                        .probabilities[1];
  double by_age =
      posterior(bn, Evidence::from_labels(bn, {{"gender", "male"}, {"ageDetail", "15"}}),
                "maritalStatus")
          .probabilities[1];
  bool pass = std::abs(by_slice - 0.019) < 1e-12 && std::abs(by_age - 0.019) < 1e-12;
  return {pass, "p(married | male, 15-19) = " + fmt(by_slice, 17) + ", with exact age 15 = " +
                    fmt(by_age, 17) + " (expected 0.019)"};
}

Outcome sampling_fidelity() {
  auto start = Clock::now();
  BayesianNetwork bn = testing::diamond_network();
  Evidence ev = Evidence::from_labels(bn, {{"D", "d1"}});
  auto c = testing::check_prototype_frequencies(bn, ev, 100000, 2026, 3.0);
  double t = seconds_since(start);
  return {c.outside == 0 && c.impossible_hits == 0 && t < 30.0,
          std::to_string(c.cells) + " states, " + std::to_string(c.outside) +
              " beyond 3 SE, worst " + fmt(c.worst_z, 3) + " SE, " + fmt(t, 3) + " s (limit 30 s)"};
}

Outcome distribution_error_trend() {
  BayesianNetwork bn = load_bn_file(testing::kenya_dir() / "attributes.bn");
  GenerationPlan plan = load_plan(testing::kenya_dir() / "kenya.plan");
  std::vector<double> means;
  std::string detail = "mean error";
  for (std::size_t n : {std::size_t{500}, std::size_t{2000}, std::size_t{10000}}) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
      RandomStream rng = RandomStream(seed).split("population");
      PopulationStore store = generate_population(bn, plan.declared_types(), n, rng);
      sum += distribution_error(store, bn).mean_absolute_error;
    }
    means.push_back(sum / kSeeds);
    detail += " N=" + std::to_string(n) + ": " + fmt(means.back());
  }
  return {means[0] > means[1] && means[1] > means[2], detail};
}

Outcome matching_error_threshold() {
  const KenyaBattery& b = kenya_battery();
  bool pass = true;
  std::string detail;
  for (const auto& [type, small] : b.mean_error.at(500)) {
    double large = b.mean_error.at(10000).at(type);
    pass = pass && large < small;
    detail += type + " " + fmt(small) + " -> " + fmt(large) + "; ";
  }
  GenerationPlan poly = load_plan(testing::fixtures_dir() / "polygyny.plan");
  detail += "mismatched spouses";
  for (std::size_t n : {std::size_t{500}, std::size_t{2000}, std::size_t{10000}}) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      PlanOverrides o;
      o.population = n;
      o.seed = seed;
      sum += run_generation(with_overrides(poly, o), nullptr, false)
                 .report.errors.matching.at("spouses");
    }
    pass = pass && sum / 3 > 0.1;
    detail += " N=" + std::to_string(n) + ": " + fmt(sum / 3);
  }
  return {pass, detail};
}

// Random plans over the bundled networks: a random subset and order of the
// homophily rules with random counting, retry and threshold settings.
Audit fuzzed_plan_audits(std::size_t plans) {
  struct Source {
    const char* type;
    const char* file;
  };
  const std::vector<Source> sources{{"spouses", "spouses.bn"},
                                    {"motherOf", "mother_of.bn"},
                                    {"friendship", "friendship.bn"},
                                    {"colleagues", "colleagues.bn"}};
  std::mt19937_64 gen(66);
  Audit total;
  for (std::size_t i = 0; i < plans; ++i) {
    GenerationPlan plan = load_plan(testing::kenya_dir() / "kenya.plan");
    plan.population = 50 + gen() % 1500;
    plan.seed = gen();
    plan.interaction.clear();
    plan.rules.clear();
    std::vector<Source> order = sources;
    std::shuffle(order.begin(), order.end(), gen);
    order.resize(1 + gen() % order.size());
    for (const Source& s : order) {
      HomophilyEntry h;
      h.link_type = s.type;
      h.network_file = testing::kenya_dir() / s.file;
      h.counts = std::vector<CountedEndpoints>{CountedEndpoints::Both, CountedEndpoints::Source,
                                               CountedEndpoints::Target}[gen() % 3];
      h.retries = static_cast<int>(gen() % 30);
      h.small_set = gen() % 200;
      if (gen() % 3 == 0) h.max_incoming = 1 + static_cast<int>(gen() % 3);
      plan.rules.push_back({h, 0});
    }
    if (gen() % 2)
      plan.rules.push_back({TransitivityRule{"siblings", "friendship", "friendship", 0.5,
                                             PivotRole::Any, PivotRole::Any},
                            0});
    GenerationResult r = run_generation(plan, nullptr, false);
    total.add(audit_links(r.store, plan));
  }
  return total;
}

Outcome link_audit() {
  const KenyaBattery& b = kenya_battery();
  Audit fuzz = fuzzed_plan_audits(25);
  Audit all = b.audit;
  all.add(fuzz);
  return {all.clean() && all.homophily_links > 0,
          std::to_string(b.runs) + " bundled runs and 25 fuzzed plans, " +
              std::to_string(all.homophily_links) + " homophily links, " +
              std::to_string(all.incompatible) + " incompatible, " +
              std::to_string(all.shared_dyads) + " shared dyads, " +
              std::to_string(all.self_links) + " self-links"};
}

Outcome transitivity_closure() {
  const KenyaBattery& b = kenya_battery();
  BayesianNetwork bn = parse_bn("variable g { m, f }\ncpt g { 0.5, 0.5 }\n");
  PopulationStore store(bn, {{"motherOf", true}, {"siblings", false}});
  for (int i = 0; i < 47; ++i) store.add_agent({i % 2});
  for (AgentId c = 1; c < 47; ++c) store.record_link(0, c, 0, CountedEndpoints::None);
  TransitivityRule half{"siblings", "motherOf", "motherOf", 0.5, PivotRole::Source,
                        PivotRole::Source};
  RandomStream rng(7);
  RuleReport r = run_transitivity_rule(store, half, rng);
  double mean = 0.5 * static_cast<double>(r.required);
  double sd = std::sqrt(0.25 * static_cast<double>(r.required));
  double z = std::abs(static_cast<double>(r.created) - mean) / sd;
  return {b.open_after_closure == 0 && b.closure_checks > 0 && z <= 3.0,
          std::to_string(b.open_after_closure) + " open triads left over " +
              std::to_string(b.closure_checks) + " certain closures; p=0.5 created " +
              std::to_string(r.created) + " of " + std::to_string(r.required) + " (" +
              fmt(z, 3) + " sd)"};
}

Outcome graph_statistics_correctness() {
  std::mt19937_64 rng(8);
  std::size_t mismatches = 0;
  double worst_path = 0.0;
  for (int i = 0; i < 50; ++i) {
    std::size_t n = 0;
    auto edges = testing::random_graph(rng, 300, n);
    NetworkStats s = graph_statistics(UndirectedGraph(n, edges));
    auto ref = testing::reference_statistics(n, edges);
    if (s.density != ref.density || s.average_degree != ref.average_degree ||
        s.clustering != ref.clustering || s.average_path_length.has_value() != ref.has_path_length)
      ++mismatches;
    if (ref.has_path_length && s.average_path_length)
      worst_path = std::max(worst_path, std::abs(*s.average_path_length - ref.average_path_length));
  }
  return {mismatches == 0 && worst_path <= 1e-9,
          "50 graphs, " + std::to_string(mismatches) +
              " density/degree/clustering mismatches, max path-length deviation " +
              fmt(worst_path, 3)};
}

// Full bundled run with statistics and export, shared by criteria 9 and 10.
struct FullRun {
  bool ran = false;
  double seconds = 0.0;
  NetworkStats stats;
  std::map<std::string, std::string> files;
};

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir))
    files[e.path().filename().string()] = read_text_file(e.path());
  return files;
}

FullRun full_run(const std::string& name) {
  FullRun out;
  fs::path dir = testing::scratch_dir("acceptance_" + name);
  GenerationPlan plan = load_plan(testing::kenya_dir() / "kenya.plan");
  auto start = Clock::now();
  GenerationResult r = run_generation(plan);
  export_generation(r, plan, dir);
  out.seconds = seconds_since(start);
  out.stats = r.report.collapsed;
  out.files = read_dir(dir);
  out.ran = true;
  return out;
}

FullRun& first_full_run() {
  static FullRun run = full_run("first");
  return run;
}

Outcome small_world() {
  const FullRun& run = first_full_run();
  double apl = run.stats.average_path_length.value_or(1e9);
  return {run.stats.clustering > 0.1 && apl < 10.0,
          "N=" + std::to_string(run.stats.nodes) + " clustering " + fmt(run.stats.clustering) +
              " (need > 0.1), average path length " + fmt(apl) + " (need < 10)"};
}

Outcome determinism_and_performance() {
  const FullRun& a = first_full_run();
  FullRun b = full_run("second");
  bool same = a.files == b.files;
  std::size_t differing = 0;
  for (const auto& [name, text] : a.files)
    differing += !b.files.contains(name) || b.files.at(name) != text;
  double slowest = std::max(a.seconds, b.seconds);
  return {same && slowest < 300.0,
          std::to_string(a.files.size()) + " files, " + std::to_string(differing) +
              " differ; slowest run " + fmt(slowest, 3) + " s (limit 300 s)"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"inference exactness", inference_exactness},
      {"marital table reproduction", marital_table_reproduction},
      {"sampling fidelity", sampling_fidelity},
      {"distribution error falls with population size", distribution_error_trend},
      {"matching error threshold behaviour", matching_error_threshold},
      {"link compatibility audit", link_audit},
      {"transitivity closure", transitivity_closure},
      {"graph statistics correctness", graph_statistics_correctness},
      {"small-world check (qualitative)", small_world},
      {"determinism and performance", determinism_and_performance}};

  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int number = static_cast<int>(i + 1);
    if (!only.empty() && !only.contains(number)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %2d %s: %s: %s\n", number, o.pass ? "PASS" : "FAIL",
                criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
