#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "forumnet/ingest.hpp"

namespace forumnet {

using NodeIndex = std::uint32_t;
using Weight = std::uint64_t;

enum class Mode { user, thread };
enum class Weighting { events, posts };

std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view name);
std::string_view to_string(Weighting w);
std::optional<Weighting> parse_weighting(std::string_view name);

struct Incidence {
  NodeIndex node;
  std::uint32_t posts;
};

/// User-by-thread incidence with post multiplicities. Node sets are sorted
/// and every node has at least one incidence.
class BipartiteNetwork {
public:
  BipartiteNetwork() = default;

  std::size_t user_count() const { return users_.size(); }
  std::size_t thread_count() const { return threads_.size(); }
  std::size_t incidence_count() const { return incidence_count_; }
  bool empty() const { return users_.empty(); }

  const std::vector<std::string>& user_nodes() const { return users_; }
  const std::vector<std::string>& thread_nodes() const { return threads_; }

  /// Threads of a user, ascending by thread index.
  std::span<const Incidence> threads_of(NodeIndex user) const { return user_threads_[user]; }
  /// Users of a thread, ascending by user index.
  std::span<const Incidence> users_of(NodeIndex thread) const { return thread_users_[thread]; }

  /// Posts by `user` in `thread`; 0 when there is no incidence.
  std::uint32_t incidence(std::string_view user, std::string_view thread) const;

  std::optional<NodeIndex> user_index(std::string_view id) const;
  std::optional<NodeIndex> thread_index(std::string_view id) const;

private:
  friend BipartiteNetwork build_bipartite(const ForumDataset& data);

  std::vector<std::string> users_;
  std::vector<std::string> threads_;
  std::vector<std::vector<Incidence>> user_threads_;
  std::vector<std::vector<Incidence>> thread_users_;
  std::size_t incidence_count_ = 0;
};

struct Edge {
  NodeIndex a; // a < b
  NodeIndex b;
  Weight weight;

  bool operator==(const Edge&) const = default;
};

struct Neighbor {
  NodeIndex node;
  Weight weight;
};

/// Undirected weighted graph without self-loops. Edges are kept sorted by
/// (a, b) and adjacency lists by neighbor index.
class OneModeNetwork {
public:
  OneModeNetwork() = default;

  /// Throws UsageError on self-loops, zero weights, duplicate node ids,
  /// duplicate edges, or endpoints out of range.
  OneModeNetwork(Mode mode, std::vector<std::string> nodes, std::vector<Edge> edges,
                 std::vector<std::int64_t> node_attr = {});

  /// Convenience constructor by node id; unknown endpoints throw UsageError.
  static OneModeNetwork from_edges(
      Mode mode, std::vector<std::string> nodes,
      const std::vector<std::tuple<std::string, std::string, Weight>>& edges,
      std::vector<std::int64_t> node_attr = {});

  Mode mode() const { return mode_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::int64_t>& node_attr() const { return attr_; }
  std::span<const Neighbor> neighbors(NodeIndex v) const { return adjacency_[v]; }
  std::size_t degree(NodeIndex v) const { return adjacency_[v].size(); }

  std::optional<NodeIndex> index_of(std::string_view id) const;
  /// 0 when the nodes are not adjacent.
  Weight weight(NodeIndex a, NodeIndex b) const;

private:
  Mode mode_ = Mode::user;
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::int64_t> attr_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::unordered_map<std::string, NodeIndex> index_;
};

BipartiteNetwork build_bipartite(const ForumDataset& data);

/// Co-participation projection. With `events` weighting a tie counts the
/// distinct shared threads (user mode) or users (thread mode). With `posts`
/// it counts the posts both endpoints contributed through those shared nodes.
OneModeNetwork project(const BipartiteNetwork& b, Mode mode,
                       Weighting weighting = Weighting::events);

/// Same topology with every weight set to 1.
OneModeNetwork binary_view(const OneModeNetwork& g);

/// `source,target,weight` and `id,attr` CSVs.
void write_edge_list(const OneModeNetwork& g, std::ostream& edges, std::ostream& nodes);
OneModeNetwork read_edge_list(Mode mode, std::string_view edges_csv, std::string_view nodes_csv);

} // namespace forumnet
