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

#include "popnet/plan.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "popnet/bn_io.hpp"
#include "popnet/errors.hpp"

namespace popnet {
namespace fs = std::filesystem;

const std::string& PlanRule::link_type() const {
  if (const auto* h = std::get_if<HomophilyEntry>(&body)) return h->link_type;
  return std::get<TransitivityRule>(body).closing_type;
}

std::vector<LinkType> GenerationPlan::declared_types() const {
  std::vector<LinkType> out;
  for (const PlanLinkType& t : link_types) out.push_back(t.type);
  return out;
}

namespace {

struct LineReader {
  std::vector<std::string> words;
  std::size_t line;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line, 1);
  }

  template <typename T>
  T number(std::string_view key, std::string_view text) const {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
      fail("invalid value '" + std::string(text) + "' for " + std::string(key));
    return value;
  }

  double probability(std::string_view key, std::string_view text) const {
    double p = number<double>(key, text);
    if (!(p >= 0.0 && p <= 1.0))
      fail(std::string(key) + " must be in [0,1], got '" + std::string(text) + "'");
    return p;
  }

  // key=value words from index `from`; every key must be in `allowed`.
  std::map<std::string, std::string> options(std::size_t from,
                                             const std::set<std::string>& allowed) const {
    std::map<std::string, std::string> kv;
    for (std::size_t i = from; i < words.size(); ++i) {
      auto eq = words[i].find('=');
      if (eq == std::string::npos) fail("expected key=value, found '" + words[i] + "'");
      std::string key = words[i].substr(0, eq);
      if (!allowed.contains(key)) fail("unknown option '" + key + "'");
      if (!kv.emplace(key, words[i].substr(eq + 1)).second)
        fail("option '" + key + "' given twice");
    }
    return kv;
  }

  const std::string& need(const std::map<std::string, std::string>& kv,
                          const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) fail("missing option '" + key + "='");
    return it->second;
  }
};

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

GenerationPlan parse_plan(std::string_view text, const fs::path& base_dir) {
  GenerationPlan plan;
  bool have_population = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    LineReader r{{}, line_no};
    std::istringstream words(raw);
    for (std::string w; words >> w;) r.words.push_back(w);
    if (r.words.empty()) continue;
    const std::string& head = r.words[0];

    if (head == "population") {
      if (have_population) r.fail("duplicate 'population' line");
      auto kv = r.options(1, {"N", "seed", "attributes"});
      plan.population = r.number<std::size_t>("N", r.need(kv, "N"));
      plan.seed = r.number<std::uint64_t>("seed", r.need(kv, "seed"));
      plan.attributes = resolve(base_dir, r.need(kv, "attributes"));
      have_population = true;
    } else if (head == "linktype") {
      if (r.words.size() != 3) r.fail("expected 'linktype <name> <directed|undirected>'");
      if (r.words[2] != "directed" && r.words[2] != "undirected")
        r.fail("link direction must be 'directed' or 'undirected'");
      plan.link_types.push_back({{r.words[1], r.words[2] == "directed"}, line_no});
    } else if (head == "rule") {
      if (r.words.size() < 3) r.fail("expected 'rule homophily|transitive <type> ...'");
      if (r.words[1] == "homophily") {
        auto kv = r.options(3, {"bn", "counts", "retries", "smallset", "max_in"});
        HomophilyEntry h;
        h.link_type = r.words[2];
        h.network_file = resolve(base_dir, r.need(kv, "bn"));
        try {
          h.counts = parse_counts(r.need(kv, "counts"));
        } catch (const ParseError&) {
          throw;
        } catch (const Error& e) {
          r.fail(e.what());
        }
        if (kv.contains("retries")) h.retries = r.number<int>("retries", kv["retries"]);
        if (kv.contains("smallset"))
          h.small_set = r.number<std::size_t>("smallset", kv["smallset"]);
        if (kv.contains("max_in")) h.max_incoming = r.number<int>("max_in", kv["max_in"]);
        plan.rules.push_back({std::move(h), line_no});
      } else if (r.words[1] == "transitive") {
        if (r.words.size() < 6 || r.words[3] != "from")
          r.fail("expected 'rule transitive <t3> from <t1> <t2> p=<prob> pattern=<r1>,<r2>'");
        auto kv = r.options(6, {"p", "pattern"});
        TransitivityRule t;
        t.closing_type = r.words[2];
        t.first_type = r.words[4];
        t.second_type = r.words[5];
        t.probability = r.probability("p", r.need(kv, "p"));
        const std::string& pattern = r.need(kv, "pattern");
        auto comma = pattern.find(',');
        if (comma == std::string::npos) r.fail("pattern must be '<role>,<role>'");
        try {
          t.pivot_in_first = parse_pivot_role(pattern.substr(0, comma));
          t.pivot_in_second = parse_pivot_role(pattern.substr(comma + 1));
        } catch (const Error& e) {
          r.fail(e.what());
        }
        plan.rules.push_back({std::move(t), line_no});
      } else {
        r.fail("unknown rule kind '" + r.words[1] + "'");
      }
    } else if (head == "interact") {
      if (r.words.size() != 3) r.fail("expected 'interact <type> p=<prob>'");
      auto kv = r.options(2, {"p"});
      if (!plan.interaction.emplace(r.words[1], r.probability("p", r.need(kv, "p"))).second)
        r.fail("duplicate interaction weight for '" + r.words[1] + "'");
    } else if (head == "matcher") {
      auto kv = r.options(1, {"retries", "smallset"});
      if (kv.contains("retries")) plan.retry_budget = r.number<int>("retries", kv["retries"]);
      if (kv.contains("smallset"))
        plan.small_set_threshold = r.number<std::size_t>("smallset", kv["smallset"]);
    } else if (head == "output") {
      if (r.words.size() != 2) r.fail("expected 'output <dir>'");
      plan.output = resolve(base_dir, r.words[1]);
    } else {
      r.fail("unknown directive '" + head + "'");
    }
  }
  if (!have_population) throw ParseError("missing 'population' line", line_no, 1);
  return plan;
}

GenerationPlan load_plan(const fs::path& path) {
  std::string text = read_text_file(path);
  try {
    return parse_plan(text, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  }
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out = d.severity == Severity::Error ? "error" : "warning";
  if (d.line > 0) out += ": line " + std::to_string(d.line);
  return out + ": " + d.message;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const Diagnostic& d : diagnostics)
    if (d.severity == Severity::Error) return true;
  return false;
}

namespace {

bool valid_type_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      return false;
  return true;
}

}  // namespace

std::vector<Diagnostic> validate_plan(const GenerationPlan& plan) {
  std::vector<Diagnostic> out;
  auto error = [&](std::size_t line, std::string msg) {
    out.push_back({Severity::Error, line, std::move(msg)});
  };
  auto warn = [&](std::size_t line, std::string msg) {
    out.push_back({Severity::Warning, line, std::move(msg)});
  };

  if (plan.population == 0) error(0, "population N must be positive");

  std::map<std::string, LinkType> declared;
  for (const PlanLinkType& t : plan.link_types) {
    if (!valid_type_name(t.type.name))
      error(t.line, "link type name '" + t.type.name +
                        "' may only use letters, digits, '_' and '-'");
    else if (t.type.name == "all")
      error(t.line, "link type name 'all' is reserved");
    if (!declared.emplace(t.type.name, t.type).second)
      error(t.line, "link type '" + t.type.name + "' declared more than once");
  }

  std::optional<BayesianNetwork> attributes;
  try {
    attributes = load_bn_file(plan.attributes);
  } catch (const Error& e) {
    error(0, "attribute network: " + std::string(e.what()));
  }
  std::optional<PopulationStore> empty_store;
  if (attributes) {
    for (const auto& v : attributes->variables()) {
      if (!v.name.starts_with(kRequiredCountPrefix)) continue;
      std::string type = v.name.substr(kRequiredCountPrefix.size());
      if (!declared.contains(type))
        warn(0, "attribute '" + v.name + "' names undeclared link type '" + type + "'");
    }
    try {
      empty_store.emplace(*attributes, plan.declared_types());
    } catch (const Error& e) {
      error(0, "attribute network: " + std::string(e.what()));
    }
  }

  std::set<std::string> created;
  for (const PlanRule& rule : plan.rules) {
    const std::string& type = rule.link_type();
    if (!declared.contains(type)) {
      error(rule.line, "rule references undeclared link type '" + type + "'");
      continue;
    }
    if (const auto* h = std::get_if<HomophilyEntry>(&rule.body)) {
      if (!attributes) continue;
      try {
        auto [header, body] = split_matching_document(read_text_file(h->network_file));
        if (header.link_type != type)
          error(rule.line, "matching network '" + h->network_file.string() +
                               "' is for link type '" + header.link_type +
                               "', not '" + type + "'");
        if (header.counts != h->counts)
          warn(rule.line, "plan counts=" + std::string(counts_name(h->counts)) +
                              " overrides matching header counts=" +
                              std::string(counts_name(header.counts)));
        HomophilyRule bound = make_homophily_rule(header, parse_bn(body), *attributes);
        bound.counts = h->counts;
        if (empty_store) {
          auto t = empty_store->link_type_id(type);
          if (!empty_store->count_variable(t))
            warn(rule.line, "no '" + std::string(kRequiredCountPrefix) + type +
                                "' attribute; no agent demands '" + type + "' links");
          try {
            derive_candidate_sets(bound, *empty_store);
          } catch (const ZeroEvidenceError&) {
            warn(rule.line, "rule for '" + type +
                                "' is vacuous: its link variable can never be yes");
          }
        }
      } catch (const Error& e) {
        error(rule.line, h->network_file.string() + ": " + e.what());
      }
    } else {
      const auto& t = std::get<TransitivityRule>(rule.body);
      bool ok = true;
      for (const std::string* input : {&t.first_type, &t.second_type}) {
        if (!declared.contains(*input)) {
          error(rule.line, "rule references undeclared link type '" + *input + "'");
          ok = false;
        } else if (!created.contains(*input)) {
          warn(rule.line, "transitive rule for '" + type + "' uses '" + *input +
                              "' before any rule creates it");
        }
      }
      if (ok && empty_store) {
        try {
          check_rule(*empty_store, t);
        } catch (const Error& e) {
          error(rule.line, e.what());
        }
      }
    }
    created.insert(type);
  }

  for (const auto& [type, p] : plan.interaction)
    if (!declared.contains(type))
      error(0, "interaction weight for undeclared link type '" + type + "'");
  if (!plan.interaction.empty())
    for (const std::string& type : created)
      if (!plan.interaction.contains(type))
        error(0, "no interaction weight for link type '" + type + "'");
  return out;
}

}  // namespace popnet
