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

#include "popnet/export.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <tuple>

#include "popnet/bn_io.hpp"
#include "popnet/errors.hpp"

namespace popnet {
namespace fs = std::filesystem;
namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = line.find(',', pos);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
}

AgentId parse_id(std::string_view s, std::size_t line) {
  AgentId id = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("invalid agent id '" + std::string(s) + "'", line, 0);
  return id;
}

std::vector<EdgeRecord> parse_edge_rows(std::string_view text, std::string_view header,
                                        const std::string* fixed_type) {
  auto lines = split_lines(text);
  if (lines.empty() || lines.front() != header)
    throw ParseError("expected header '" + std::string(header) + "'", 1, 1);
  std::size_t width = fixed_type ? 2 : 3;
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto f = split_fields(lines[i]);
    if (f.size() != width)
      throw ParseError("expected " + std::to_string(width) + " fields", i + 1, 1);
    edges.push_back({parse_id(f[0], i + 1), parse_id(f[1], i + 1),
                     fixed_type ? *fixed_type : std::string(f[2])});
  }
  return edges;
}

}  // namespace

std::vector<EdgeRecord> canonical_edges(const PopulationStore& store) {
  std::vector<EdgeRecord> edges;
  edges.reserve(store.links().size());
  for (const Link& l : store.links())
    edges.push_back({l.source, l.target, store.link_types()[l.type].name});
  std::sort(edges.begin(), edges.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
    return std::tie(a.type, a.source, a.target) < std::tie(b.type, b.source, b.target);
  });
  return edges;
}

std::string agents_csv(const PopulationStore& store) {
  const BayesianNetwork& bn = store.attribute_bn();
  std::vector<VarId> columns = store.attribute_variables();
  columns.insert(columns.end(), store.count_variables().begin(),
                 store.count_variables().end());
  std::string out = "id";
  for (VarId v : columns) out += "," + bn.variable(v).name;
  out += "\n";
  for (const Agent& a : store.agents()) {
    out += std::to_string(a.id);
    for (VarId v : columns)
      out += "," + bn.variable(v).domain[static_cast<std::size_t>(a.values[v])];
    out += "\n";
  }
  return out;
}

std::string edges_csv(const PopulationStore& store, LinkTypeId type) {
  const std::string& name = store.link_types().at(type).name;
  std::string out = "source,target\n";
  for (const EdgeRecord& e : canonical_edges(store))
    if (e.type == name)
      out += std::to_string(e.source) + "," + std::to_string(e.target) + "\n";
  return out;
}

std::string all_edges_csv(const PopulationStore& store) {
  std::string out = "source,target,type\n";
  for (const EdgeRecord& e : canonical_edges(store))
    out += std::to_string(e.source) + "," + std::to_string(e.target) + "," + e.type + "\n";
  return out;
}

// DOT forbids mixing `->` and `--` in one graph, so a network with any
// directed type becomes a digraph whose undirected links carry dir=none.
std::string graph_description(const PopulationStore& store) {
  bool any_directed = std::any_of(store.link_types().begin(), store.link_types().end(),
                                  [](const LinkType& t) { return t.directed; });
  std::map<std::string, bool> directed;
  for (const LinkType& t : store.link_types()) directed[t.name] = t.directed;
  std::string out = any_directed ? "digraph network {\n" : "graph network {\n";
  for (AgentId id = 0; id < store.size(); ++id) out += "  " + std::to_string(id) + ";\n";
  for (const EdgeRecord& e : canonical_edges(store)) {
    out += "  " + std::to_string(e.source) + (any_directed ? " -> " : " -- ") +
           std::to_string(e.target) + " [type=\"" + e.type + "\"";
    if (any_directed && !directed[e.type]) out += ", dir=none";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

std::string interaction_csv(const PopulationStore& store,
                            const InteractionWeights& weights) {
  for (const auto& [type, p] : weights)
    if (!(p >= 0.0 && p <= 1.0))
      throw Error("interaction weight for '" + type + "' is outside [0,1]");
  for (LinkTypeId t = 0; t < store.link_types().size(); ++t)
    if (store.link_count(t) > 0 && !weights.contains(store.link_types()[t].name))
      throw Error("no interaction weight for link type '" + store.link_types()[t].name +
                  "'");
  std::string out = "source,target,probability\n";
  for (const EdgeRecord& e : canonical_edges(store))
    out += std::to_string(e.source) + "," + std::to_string(e.target) + "," +
           format_double(weights.at(e.type)) + "\n";
  return out;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  out.close();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

namespace {

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw Error("cannot create output directory '" + dir.string() + "'");
}

}  // namespace

std::vector<fs::path> export_network(const PopulationStore& store, const fs::path& dir) {
  ensure_directory(dir);
  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    written.push_back(dir / name);
    write_text_file(written.back(), text);
  };
  emit("agents.csv", agents_csv(store));
  for (LinkTypeId t = 0; t < store.link_types().size(); ++t)
    emit("edges_" + store.link_types()[t].name + ".csv", edges_csv(store, t));
  emit("edges_all.csv", all_edges_csv(store));
  if (store.size() <= kGraphDescriptionLimit)
    emit("network.dot", graph_description(store));
  return written;
}

fs::path export_interaction_network(const PopulationStore& store,
                                    const InteractionWeights& weights,
                                    const fs::path& dir) {
  std::string text = interaction_csv(store, weights);
  ensure_directory(dir);
  fs::path path = dir / "interaction.csv";
  write_text_file(path, text);
  return path;
}

std::vector<fs::path> export_reports(const GenerationReport& report,
                                     const BayesianNetwork& learned,
                                     const fs::path& dir) {
  ensure_directory(dir);
  std::vector<fs::path> written{dir / "report.txt", dir / "learned_attributes.bn"};
  write_text_file(written[0], format_report(report));
  write_text_file(written[1], serialize_bn(learned));
  return written;
}

std::vector<EdgeRecord> parse_all_edges_csv(std::string_view text) {
  return parse_edge_rows(text, "source,target,type", nullptr);
}

std::vector<EdgeRecord> parse_edges_csv(std::string_view text, const std::string& type) {
  return parse_edge_rows(text, "source,target", &type);
}

ExportedNetwork read_exported_network(const fs::path& dir) {
  ExportedNetwork net;
  std::string agents_text = read_text_file(dir / "agents.csv");
  auto agent_lines = split_lines(agents_text);
  if (agent_lines.empty() || !agent_lines.front().starts_with("id"))
    throw ParseError("agents.csv: expected header starting with 'id'", 1, 1);
  for (std::size_t i = 1; i < agent_lines.size(); ++i)
    if (!agent_lines[i].empty()) ++net.agents;
  net.edges = parse_all_edges_csv(read_text_file(dir / "edges_all.csv"));
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.starts_with("edges_") && name.ends_with(".csv") && name != "edges_all.csv")
      net.types.push_back(name.substr(6, name.size() - 10));
  }
  std::sort(net.types.begin(), net.types.end());
  for (const EdgeRecord& e : net.edges)
    if (e.source >= net.agents || e.target >= net.agents)
      throw Error("edges_all.csv references agent " +
                  std::to_string(std::max(e.source, e.target)) + " beyond agents.csv");
  return net;
}

}  // namespace popnet
