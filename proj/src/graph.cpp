#include "raagsc/graph.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <json.hpp>

namespace raagsc {

namespace {

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

SimpleGraph::SimpleGraph(std::vector<std::string> names,
                         const std::vector<std::pair<std::string, std::string>>& edges)
    : names_(std::move(names)) {
  if (names_.size() > 0xFFFF) throw GraphError(GraphErrorKind::Malformed, "too many vertices");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!valid_name(names_[i]))
      throw GraphError(GraphErrorKind::InvalidName, "invalid vertex name '" + names_[i] + "'");
    if (!index_.emplace(names_[i], static_cast<VertexId>(i)).second)
      throw GraphError(GraphErrorKind::DuplicateVertex, "duplicate vertex '" + names_[i] + "'");
  }
  const std::size_t n = names_.size();
  adj_.assign(n * n, 0);
  for (const auto& [a, b] : edges) {
    auto ia = find(a), ib = find(b);
    if (!ia || !ib)
      throw GraphError(GraphErrorKind::UnknownEndpoint,
                       "edge {" + a + "," + b + "} has unknown endpoint '" + (ia ? b : a) + "'");
    if (*ia == *ib) throw GraphError(GraphErrorKind::LoopEdge, "loop edge at '" + a + "'");
    char& cell = adj_[*ia * n + *ib];
    if (cell) throw GraphError(GraphErrorKind::DuplicateEdge, "duplicate edge {" + a + "," + b + "}");
    cell = 1;
    adj_[*ib * n + *ia] = 1;
    edges_.emplace_back(std::min(*ia, *ib), std::max(*ia, *ib));
  }
  std::sort(edges_.begin(), edges_.end());
}

VertexId SimpleGraph::id(std::string_view name) const {
  auto v = find(name);
  if (!v) throw InvalidArgument("unknown vertex '" + std::string(name) + "'");
  return *v;
}

std::optional<VertexId> SimpleGraph::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool SimpleGraph::operator==(const SimpleGraph& other) const {
  return names_ == other.names_ && edges_ == other.edges_;
}

SimpleGraph parse_graph(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GraphError(GraphErrorKind::Malformed, std::string("malformed graph document: ") + e.what());
  }
  auto malformed = [](const std::string& why) { return GraphError(GraphErrorKind::Malformed, "malformed graph document: " + why); };
  if (!doc.is_object()) throw malformed("top level must be an object");
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) throw malformed("missing array 'vertices'");
  std::vector<std::string> names;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_string()) throw malformed("vertex names must be strings");
    names.push_back(v.get<std::string>());
  }
  std::vector<std::pair<std::string, std::string>> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw malformed("'edges' must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
        throw malformed("each edge must be a pair of vertex names");
      edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }
  return SimpleGraph(std::move(names), edges);
}

std::string graph_to_json(const SimpleGraph& g) {
  nlohmann::json doc;
  doc["vertices"] = g.names();
  doc["edges"] = nlohmann::json::array();
  for (auto [a, b] : g.edges()) doc["edges"].push_back({g.name(a), g.name(b)});
  return doc.dump();
}

SimpleGraph make_edgeless(std::vector<std::string> names) { return SimpleGraph(std::move(names), {}); }

SimpleGraph make_complete(std::vector<std::string> names) {
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j) edges.emplace_back(names[i], names[j]);
  return SimpleGraph(std::move(names), edges);
}

SimpleGraph make_path(std::vector<std::string> names) {
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 0; i + 1 < names.size(); ++i) edges.emplace_back(names[i], names[i + 1]);
  return SimpleGraph(std::move(names), edges);
}

std::vector<VertexId> neighbors(const SimpleGraph& g, VertexId v) {
  if (v >= g.size()) throw InvalidArgument("unknown vertex id " + std::to_string(v));
  std::vector<VertexId> out;
  for (VertexId w = 0; w < g.size(); ++w)
    if (g.adjacent(v, w)) out.push_back(w);
  return out;
}

std::vector<VertexId> neighbors(const SimpleGraph& g, std::string_view v) { return neighbors(g, g.id(v)); }

std::optional<std::size_t> ChannelIndex::shared(VertexId v, VertexId w) const {
  const auto key = std::make_pair(std::min(v, w), std::max(v, w));
  auto it = std::lower_bound(non_edges.begin(), non_edges.end(), key);
  if (it == non_edges.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - non_edges.begin());
}

ChannelIndex channel_index(const SimpleGraph& g) {
  ChannelIndex ci;
  ci.slices.resize(g.size());
  for (VertexId v = 0; v < g.size(); ++v)
    for (VertexId w = v + 1; w < g.size(); ++w)
      if (!g.adjacent(v, w)) {
        ci.slices[v].push_back(ci.non_edges.size());
        ci.slices[w].push_back(ci.non_edges.size());
        ci.non_edges.emplace_back(v, w);
      }
  return ci;
}

bool is_gamma_reduced(const SimpleGraph& g, std::span<const VertexId> seq) {
  for (VertexId v : seq)
    if (v >= g.size()) throw InvalidArgument("unknown vertex id " + std::to_string(v));
  for (std::size_t k = 0; k < seq.size(); ++k) {
    // Nearest earlier repeat suffices: any farther repeat's interval contains this one.
    for (std::size_t j = k; j-- > 0;) {
      if (seq[j] != seq[k]) continue;
      bool separated = false;
      for (std::size_t l = j + 1; l < k && !separated; ++l)
        separated = !g.adjacent(seq[j], seq[l]);
      if (!separated) return false;
      break;
    }
  }
  return true;
}

bool is_gamma_reduced(const SimpleGraph& g, const std::vector<std::string>& seq) {
  std::vector<VertexId> ids;
  ids.reserve(seq.size());
  for (const auto& s : seq) ids.push_back(g.id(s));
  return is_gamma_reduced(g, ids);
}

}  // namespace raagsc
