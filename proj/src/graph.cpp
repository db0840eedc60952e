#include "forumnet/graph.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>

#include "forumnet/csv.hpp"
#include "forumnet/error.hpp"

namespace forumnet {

std::string_view to_string(Mode m) { return m == Mode::user ? "user" : "thread"; }

std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "user") {
    return Mode::user;
  }
  if (name == "thread") {
    return Mode::thread;
  }
  return std::nullopt;
}

std::string_view to_string(Weighting w) { return w == Weighting::events ? "events" : "posts"; }

std::optional<Weighting> parse_weighting(std::string_view name) {
  if (name == "events") {
    return Weighting::events;
  }
  if (name == "posts") {
    return Weighting::posts;
  }
  return std::nullopt;
}

namespace {

std::optional<NodeIndex> find_sorted(const std::vector<std::string>& ids, std::string_view id) {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) {
    return std::nullopt;
  }
  return static_cast<NodeIndex>(it - ids.begin());
}

} // namespace

std::optional<NodeIndex> BipartiteNetwork::user_index(std::string_view id) const {
  return find_sorted(users_, id);
}

std::optional<NodeIndex> BipartiteNetwork::thread_index(std::string_view id) const {
  return find_sorted(threads_, id);
}

std::uint32_t BipartiteNetwork::incidence(std::string_view user, std::string_view thread) const {
  const auto u = user_index(user);
  const auto t = thread_index(thread);
  if (!u || !t) {
    return 0;
  }
  const auto& row = user_threads_[*u];
  auto it = std::lower_bound(row.begin(), row.end(), *t,
                             [](const Incidence& inc, NodeIndex v) { return inc.node < v; });
  return it != row.end() && it->node == *t ? it->posts : 0;
}

BipartiteNetwork build_bipartite(const ForumDataset& data) {
  std::map<std::pair<std::string_view, std::string_view>, std::uint32_t> counts;
  for (const auto& p : data.posts) {
    ++counts[{p.user_id, p.thread_id}];
  }
  BipartiteNetwork b;
  for (const auto& [key, n] : counts) {
    if (b.users_.empty() || b.users_.back() != key.first) {
      b.users_.emplace_back(key.first);
    }
    b.threads_.emplace_back(key.second);
  }
  std::sort(b.threads_.begin(), b.threads_.end());
  b.threads_.erase(std::unique(b.threads_.begin(), b.threads_.end()), b.threads_.end());

  b.user_threads_.resize(b.users_.size());
  b.thread_users_.resize(b.threads_.size());
  NodeIndex u = 0;
  for (const auto& [key, n] : counts) {
    while (b.users_[u] != key.first) {
      ++u;
    }
    const NodeIndex t = *find_sorted(b.threads_, key.second);
    b.user_threads_[u].push_back({t, n});
    b.thread_users_[t].push_back({u, n});
  }
  b.incidence_count_ = counts.size();
  return b;
}

OneModeNetwork::OneModeNetwork(Mode mode, std::vector<std::string> nodes, std::vector<Edge> edges,
                               std::vector<std::int64_t> node_attr)
    : mode_(mode), nodes_(std::move(nodes)), edges_(std::move(edges)), attr_(std::move(node_attr)) {
  if (attr_.empty()) {
    attr_.assign(nodes_.size(), 0);
  }
  if (attr_.size() != nodes_.size()) {
    throw UsageError("node_attr size does not match node count");
  }
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i], static_cast<NodeIndex>(i)).second) {
      throw UsageError("duplicate node id '" + nodes_[i] + "'");
    }
  }
  for (auto& e : edges_) {
    if (e.a >= nodes_.size() || e.b >= nodes_.size()) {
      throw UsageError("edge endpoint out of range");
    }
    if (e.a == e.b) {
      throw UsageError("self-loop on '" + nodes_[e.a] + "'");
    }
    if (e.weight == 0) {
      throw UsageError("edge weight must be >= 1");
    }
    if (e.a > e.b) {
      std::swap(e.a, e.b);
    }
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& x, const Edge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].a == edges_[i - 1].a && edges_[i].b == edges_[i - 1].b) {
      throw UsageError("duplicate edge " + nodes_[edges_[i].a] + "--" + nodes_[edges_[i].b]);
    }
  }
  adjacency_.resize(nodes_.size());
  for (const auto& e : edges_) {
    adjacency_[e.a].push_back({e.b, e.weight});
    adjacency_[e.b].push_back({e.a, e.weight});
  }
  for (auto& row : adjacency_) {
    std::sort(row.begin(), row.end(),
              [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
  }
}

OneModeNetwork OneModeNetwork::from_edges(
    Mode mode, std::vector<std::string> nodes,
    const std::vector<std::tuple<std::string, std::string, Weight>>& edges,
    std::vector<std::int64_t> node_attr) {
  std::unordered_map<std::string, NodeIndex> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    index.emplace(nodes[i], static_cast<NodeIndex>(i));
  }
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& [a, b, w] : edges) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end() || ib == index.end()) {
      throw UsageError("edge " + a + "--" + b + " references an unknown node");
    }
    out.push_back({ia->second, ib->second, w});
  }
  return OneModeNetwork(mode, std::move(nodes), std::move(out), std::move(node_attr));
}

std::optional<NodeIndex> OneModeNetwork::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

Weight OneModeNetwork::weight(NodeIndex a, NodeIndex b) const {
  const auto& row = adjacency_[a];
  auto it = std::lower_bound(row.begin(), row.end(), b,
                             [](const Neighbor& n, NodeIndex v) { return n.node < v; });
  return it != row.end() && it->node == b ? it->weight : 0;
}

namespace {

// Projects onto the "left" side of a bipartite adjacency given as
// left -> right incidences and right -> left incidences.
std::vector<Edge> project_side(const std::vector<std::span<const Incidence>>& left,
                               const std::vector<std::span<const Incidence>>& right,
                               Weighting weighting) {
  const std::size_t n = left.size();
  std::vector<Weight> acc(n, 0);
  std::vector<NodeIndex> touched;
  std::vector<Edge> edges;
  for (NodeIndex a = 0; a < n; ++a) {
    touched.clear();
    for (const auto& via : left[a]) {
      for (const auto& other : right[via.node]) {
        if (other.node <= a) {
          continue; // each pair once, no self-loops
        }
        if (acc[other.node] == 0) {
          touched.push_back(other.node);
        }
        acc[other.node] += weighting == Weighting::events
                               ? 1
                               : static_cast<Weight>(via.posts) + other.posts;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (const NodeIndex b : touched) {
      edges.push_back({a, b, acc[b]});
      acc[b] = 0;
    }
  }
  return edges;
}

} // namespace

OneModeNetwork project(const BipartiteNetwork& b, Mode mode, Weighting weighting) {
  std::vector<std::span<const Incidence>> users(b.user_count());
  std::vector<std::span<const Incidence>> threads(b.thread_count());
  for (NodeIndex u = 0; u < b.user_count(); ++u) {
    users[u] = b.threads_of(u);
  }
  for (NodeIndex t = 0; t < b.thread_count(); ++t) {
    threads[t] = b.users_of(t);
  }
  const auto& left = mode == Mode::user ? users : threads;
  const auto& right = mode == Mode::user ? threads : users;
  std::vector<std::int64_t> attr(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    attr[i] = static_cast<std::int64_t>(left[i].size());
  }
  return OneModeNetwork(mode, mode == Mode::user ? b.user_nodes() : b.thread_nodes(),
                        project_side(left, right, weighting), std::move(attr));
}

OneModeNetwork binary_view(const OneModeNetwork& g) {
  std::vector<Edge> edges = g.edges();
  for (auto& e : edges) {
    e.weight = 1;
  }
  return OneModeNetwork(g.mode(), g.nodes(), std::move(edges), g.node_attr());
}

void write_edge_list(const OneModeNetwork& g, std::ostream& edges, std::ostream& nodes) {
  edges << "source,target,weight\n";
  for (const auto& e : g.edges()) {
    edges << csv::escape(g.nodes()[e.a]) << ',' << csv::escape(g.nodes()[e.b]) << ',' << e.weight
          << '\n';
  }
  nodes << "id,attr\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    nodes << csv::escape(g.nodes()[i]) << ',' << g.node_attr()[i] << '\n';
  }
}

namespace {

template <typename Int>
Int parse_int(const std::string& s, const char* what) {
  Int value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError(std::string("edge list: bad ") + what + " '" + s + "'");
  }
  return value;
}

std::vector<csv::Record> read_table(std::string_view text, std::vector<std::string> header) {
  auto rows = csv::read_all(text);
  if (rows.empty() || rows.front().fields != header) {
    throw SchemaError("edge list: expected header " + csv::join(header));
  }
  rows.erase(rows.begin());
  std::erase_if(rows, [](const csv::Record& r) { return r.raw.empty() && r.fields.size() == 1; });
  for (const auto& r : rows) {
    if (!r.well_formed || r.fields.size() != header.size()) {
      throw InputError("edge list: malformed row '" + r.raw + "'");
    }
  }
  return rows;
}

} // namespace

OneModeNetwork read_edge_list(Mode mode, std::string_view edges_csv, std::string_view nodes_csv) {
  const auto node_rows = read_table(nodes_csv, {"id", "attr"});
  const auto edge_rows = read_table(edges_csv, {"source", "target", "weight"});
  std::vector<std::string> nodes;
  std::vector<std::int64_t> attr;
  for (const auto& r : node_rows) {
    nodes.push_back(r.fields[0]);
    attr.push_back(parse_int<std::int64_t>(r.fields[1], "attr"));
  }
  std::vector<std::tuple<std::string, std::string, Weight>> edges;
  for (const auto& r : edge_rows) {
    edges.emplace_back(r.fields[0], r.fields[1], parse_int<Weight>(r.fields[2], "weight"));
  }
  try {
    return OneModeNetwork::from_edges(mode, std::move(nodes), edges, std::move(attr));
  } catch (const UsageError& e) {
    throw InputError(std::string("edge list: ") + e.what());
  }
}

} // namespace forumnet
