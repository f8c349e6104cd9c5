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

#include "popnet/report.hpp"

#include <charconv>
#include <set>

#include "popnet/bn_io.hpp"
#include "popnet/errors.hpp"

namespace popnet {
namespace {

std::string kind_name(RuleKind k) {
  return k == RuleKind::Homophily ? "homophily" : "transitive";
}

template <typename T>
T parse_number(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw Error("report is missing key '" + key + "'");
  T value{};
  const std::string& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error("report key '" + key + "' has malformed value '" + s + "'");
  return value;
}

const std::string& lookup(const std::map<std::string, std::string>& kv,
                          const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw Error("report is missing key '" + key + "'");
  return it->second;
}

NetworkStats parse_stats(const std::map<std::string, std::string>& kv,
                         const std::string& scope) {
  std::string p = "stats." + scope + ".";
  NetworkStats s;
  s.nodes = parse_number<std::size_t>(kv, p + "nodes");
  s.links = parse_number<std::size_t>(kv, p + "links");
  s.density = parse_number<double>(kv, p + "density");
  s.average_degree = parse_number<double>(kv, p + "average_degree");
  s.clustering = parse_number<double>(kv, p + "clustering");
  s.triangles = parse_number<std::uint64_t>(kv, p + "triangles");
  s.connected_triples = parse_number<std::uint64_t>(kv, p + "connected_triples");
  s.components = parse_number<std::size_t>(kv, p + "components");
  s.largest_component = parse_number<std::size_t>(kv, p + "largest_component");
  if (lookup(kv, p + "average_path_length") != "absent")
    s.average_path_length = parse_number<double>(kv, p + "average_path_length");
  s.path_length_estimated = lookup(kv, p + "path_length_estimated") == "true";
  return s;
}

}  // namespace

std::string format_stats(std::string_view scope, const NetworkStats& s) {
  std::string p = "stats." + std::string(scope) + ".";
  std::string out;
  auto line = [&](const char* key, const std::string& value) {
    out += p + key + "=" + value + "\n";
  };
  line("nodes", std::to_string(s.nodes));
  line("links", std::to_string(s.links));
  line("density", format_double(s.density));
  line("average_degree", format_double(s.average_degree));
  line("clustering", format_double(s.clustering));
  line("triangles", std::to_string(s.triangles));
  line("connected_triples", std::to_string(s.connected_triples));
  line("components", std::to_string(s.components));
  line("largest_component", std::to_string(s.largest_component));
  line("average_path_length", s.average_path_length
                                  ? format_double(*s.average_path_length)
                                  : "absent");
  line("path_length_estimated", s.path_length_estimated ? "true" : "false");
  return out;
}

std::string format_report(const GenerationReport& r) {
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) {
    out += key + "=" + value + "\n";
  };
  line("population.size", std::to_string(r.population));
  line("population.seed", std::to_string(r.seed));
  line("rules.count", std::to_string(r.rules.size()));
  for (std::size_t i = 0; i < r.rules.size(); ++i) {
    const RuleReport& rr = r.rules[i];
    std::string p = "rule." + std::to_string(i) + ".";
    line(p + "kind", kind_name(rr.kind));
    line(p + "type", rr.link_type);
    line(p + "created", std::to_string(rr.created));
    line(p + "required", std::to_string(rr.required));
    line(p + "unfulfilled", std::to_string(rr.unfulfilled));
    line(p + "orphans", std::to_string(rr.orphans));
    line(p + "prototype_successes", std::to_string(rr.prototype_successes));
    line(p + "fallback_successes", std::to_string(rr.fallback_successes));
    line(p + "fallback_rejections", std::to_string(rr.fallback_rejections));
    line(p + "vacuous", rr.vacuous ? "true" : "false");
  }
  line("error.distribution", format_double(r.errors.distribution.mean_absolute_error));
  line("error.distribution.observed_rows",
       std::to_string(r.errors.distribution.observed_rows));
  line("error.distribution.unobserved_rows",
       std::to_string(r.errors.distribution.unobserved_rows));
  for (const auto& [type, rate] : r.errors.matching)
    line("error.matching." + type, format_double(rate));
  out += format_stats("all", r.collapsed);
  std::string scopes;
  for (const auto& [type, s] : r.per_type) scopes += (scopes.empty() ? "" : ",") + type;
  line("stats.types", scopes);
  for (const auto& [type, s] : r.per_type) out += format_stats(type, s);
  return out;
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::size_t pos = 0, line_no = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected key=value", line_no, 0);
    kv[std::string(line.substr(0, eq))] = std::string(line.substr(eq + 1));
  }
  return kv;
}

GenerationReport parse_report(std::string_view text) {
  auto kv = parse_key_values(text);
  GenerationReport r;
  r.population = parse_number<std::size_t>(kv, "population.size");
  r.seed = parse_number<std::uint64_t>(kv, "population.seed");
  auto count = parse_number<std::size_t>(kv, "rules.count");
  for (std::size_t i = 0; i < count; ++i) {
    std::string p = "rule." + std::to_string(i) + ".";
    RuleReport rr;
    const std::string& kind = lookup(kv, p + "kind");
    if (kind != "homophily" && kind != "transitive")
      throw Error("unknown rule kind '" + kind + "'");
    rr.kind = kind == "homophily" ? RuleKind::Homophily : RuleKind::Transitive;
    rr.link_type = lookup(kv, p + "type");
    rr.created = parse_number<std::size_t>(kv, p + "created");
    rr.required = parse_number<std::size_t>(kv, p + "required");
    rr.unfulfilled = parse_number<std::size_t>(kv, p + "unfulfilled");
    rr.orphans = parse_number<std::size_t>(kv, p + "orphans");
    rr.prototype_successes = parse_number<std::size_t>(kv, p + "prototype_successes");
    rr.fallback_successes = parse_number<std::size_t>(kv, p + "fallback_successes");
    rr.fallback_rejections = parse_number<std::size_t>(kv, p + "fallback_rejections");
    rr.vacuous = lookup(kv, p + "vacuous") == "true";
    r.rules.push_back(std::move(rr));
  }
  r.errors.distribution.mean_absolute_error = parse_number<double>(kv, "error.distribution");
  r.errors.distribution.observed_rows =
      parse_number<std::size_t>(kv, "error.distribution.observed_rows");
  r.errors.distribution.unobserved_rows =
      parse_number<std::size_t>(kv, "error.distribution.unobserved_rows");
  const std::string prefix = "error.matching.";
  for (const auto& [key, value] : kv)
    if (key.starts_with(prefix))
      r.errors.matching[key.substr(prefix.size())] = parse_number<double>(kv, key);
  r.collapsed = parse_stats(kv, "all");
  const std::string& types = lookup(kv, "stats.types");
  std::size_t pos = 0;
  while (pos < types.size()) {
    std::size_t end = types.find(',', pos);
    if (end == std::string::npos) end = types.size();
    std::string t = types.substr(pos, end - pos);
    r.per_type[t] = parse_stats(kv, t);
    pos = end + 1;
  }
  return r;
}

}  // namespace popnet
