#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "raagsc/error.hpp"

namespace raagsc {

using VertexId = std::uint16_t;

enum class GraphErrorKind { Malformed, LoopEdge, UnknownEndpoint, DuplicateVertex, DuplicateEdge, InvalidName };

class GraphError : public InvalidArgument {
 public:
  GraphError(GraphErrorKind kind, const std::string& what) : InvalidArgument(what), kind_(kind) {}
  GraphErrorKind kind() const noexcept { return kind_; }

 private:
  GraphErrorKind kind_;
};

// Finite simple graph. Vertex order is the construction order and drives every
// canonical ordering downstream (letters, traces, channels).
class SimpleGraph {
 public:
  SimpleGraph(std::vector<std::string> names,
              const std::vector<std::pair<std::string, std::string>>& edges);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(VertexId v) const { return names_.at(v); }

  VertexId id(std::string_view name) const;  // throws InvalidArgument on unknown name
  std::optional<VertexId> find(std::string_view name) const;

  bool adjacent(VertexId v, VertexId w) const noexcept { return adj_[v * names_.size() + w] != 0; }
  // Sorted by (position of first endpoint, position of second endpoint), first < second.
  const std::vector<std::pair<VertexId, VertexId>>& edges() const noexcept { return edges_; }

  bool operator==(const SimpleGraph& other) const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, VertexId, std::less<>> index_;
  std::vector<char> adj_;
  std::vector<std::pair<VertexId, VertexId>> edges_;
};

using GraphPtr = std::shared_ptr<const SimpleGraph>;

SimpleGraph parse_graph(std::string_view text);
std::string graph_to_json(const SimpleGraph& g);

SimpleGraph make_edgeless(std::vector<std::string> names);
SimpleGraph make_complete(std::vector<std::string> names);
SimpleGraph make_path(std::vector<std::string> names);

// N(v) in vertex order; never contains v.
std::vector<VertexId> neighbors(const SimpleGraph& g, VertexId v);
std::vector<VertexId> neighbors(const SimpleGraph& g, std::string_view v);

// Non-edges F and the per-vertex slices F(v) (indices into non_edges).
struct ChannelIndex {
  std::vector<std::pair<VertexId, VertexId>> non_edges;
  std::vector<std::vector<std::size_t>> slices;

  const std::vector<std::size_t>& of(VertexId v) const { return slices.at(v); }
  // Position in non_edges of the channel shared by non-adjacent v != w.
  std::optional<std::size_t> shared(VertexId v, VertexId w) const;
};

ChannelIndex channel_index(const SimpleGraph& g);

bool is_gamma_reduced(const SimpleGraph& g, std::span<const VertexId> seq);
bool is_gamma_reduced(const SimpleGraph& g, const std::vector<std::string>& seq);

}  // namespace raagsc
