#include "forumnet/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <queue>

namespace forumnet {

Components connected_components(const OneModeNetwork& g) {
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  Components c;
  c.label.assign(g.node_count(), unset);
  std::vector<NodeIndex> stack;
  for (NodeIndex s = 0; s < g.node_count(); ++s) {
    if (c.label[s] != unset) {
      continue;
    }
    const auto id = static_cast<std::uint32_t>(c.sizes.size());
    std::size_t size = 0;
    c.label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeIndex v = stack.back();
      stack.pop_back();
      ++size;
      for (const auto& nb : g.neighbors(v)) {
        if (c.label[nb.node] == unset) {
          c.label[nb.node] = id;
          stack.push_back(nb.node);
        }
      }
    }
    c.sizes.push_back(size);
    // strict comparison keeps the earliest (lowest-index) component on ties
    if (c.sizes[id] > c.sizes[c.largest]) {
      c.largest = id;
    }
  }
  return c;
}

double density(const OneModeNetwork& g) {
  const double n = static_cast<double>(g.node_count());
  if (g.node_count() <= 1) {
    return 0.0;
  }
  return 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1.0));
}

double degree_centralization(const OneModeNetwork& g) {
  const std::size_t n = g.node_count();
  if (n < 3) {
    return 0.0;
  }
  std::size_t dmax = 0;
  for (NodeIndex v = 0; v < n; ++v) {
    dmax = std::max(dmax, g.degree(v));
  }
  std::uint64_t total = 0;
  for (NodeIndex v = 0; v < n; ++v) {
    total += dmax - g.degree(v);
  }
  return static_cast<double>(total) / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
}

namespace {

struct PathStats {
  std::size_t diameter = 0;
  double avg_path_length = 0.0;
};

PathStats largest_component_paths(const OneModeNetwork& g, const Components& comps) {
  PathStats out;
  if (g.node_count() == 0) {
    return out;
  }
  const std::size_t k = comps.sizes[comps.largest];
  if (k < 2) {
    return out;
  }
  constexpr auto unreached = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(g.node_count(), unreached);
  std::vector<NodeIndex> frontier;
  frontier.reserve(k);
  std::uint64_t total = 0;
  std::uint32_t longest = 0;
  for (NodeIndex s = 0; s < g.node_count(); ++s) {
    if (comps.label[s] != comps.largest) {
      continue;
    }
    frontier.clear();
    frontier.push_back(s);
    dist[s] = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      const NodeIndex v = frontier[head];
      for (const auto& nb : g.neighbors(v)) {
        if (dist[nb.node] == unreached) {
          dist[nb.node] = dist[v] + 1;
          frontier.push_back(nb.node);
        }
      }
    }
    for (const NodeIndex v : frontier) {
      total += dist[v];
      longest = std::max(longest, dist[v]);
      dist[v] = unreached;
    }
  }
  // every unordered pair was counted from both ends
  const double pairs = static_cast<double>(k) * static_cast<double>(k - 1);
  out.diameter = longest;
  out.avg_path_length = static_cast<double>(total) / pairs;
  return out;
}

} // namespace

std::size_t diameter(const OneModeNetwork& g) {
  return largest_component_paths(g, connected_components(g)).diameter;
}

double avg_path_length(const OneModeNetwork& g) {
  return largest_component_paths(g, connected_components(g)).avg_path_length;
}

StructuralReport structural_report(const OneModeNetwork& g) {
  StructuralReport r;
  r.mode = g.mode();
  r.n = g.node_count();
  r.m = g.edge_count();
  r.density = density(g);
  r.centralization = degree_centralization(g);
  const Components comps = connected_components(g);
  const PathStats paths = largest_component_paths(g, comps);
  r.diameter = paths.diameter;
  r.avg_path_length = paths.avg_path_length;
  r.component_count = comps.sizes.size();
  r.largest_component_size = comps.sizes.empty() ? 0 : comps.sizes[comps.largest];
  r.isolate_count = static_cast<std::size_t>(std::count(comps.sizes.begin(), comps.sizes.end(), 1));
  return r;
}

double bipartite_density(const BipartiteNetwork& b) {
  if (b.empty()) {
    return 0.0;
  }
  return static_cast<double>(b.incidence_count()) /
         (static_cast<double>(b.user_count()) * static_cast<double>(b.thread_count()));
}

std::string format_structural_table(std::span<const StructuralReport> reports) {
  constexpr int label_width = 30;
  auto column_title = [](const StructuralReport& r) {
    std::string title = r.mode == Mode::user ? "User" : "Thread";
    return title + " (N=" + std::to_string(r.n) + ")";
  };
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-*s", label_width, "Network structural measure");
  out += buf;
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%16s", column_title(r).c_str());
    out += buf;
  }
  out += '\n';
  auto row = [&](const char* label, auto value_of) {
    std::snprintf(buf, sizeof buf, "%-*s", label_width, label);
    out += buf;
    for (const auto& r : reports) {
      std::snprintf(buf, sizeof buf, "%16.2f", value_of(r));
      out += buf;
    }
    out += '\n';
  };
  row("Density", [](const StructuralReport& r) { return r.density; });
  row("Centralisation", [](const StructuralReport& r) { return r.centralization; });
  row("Diameter", [](const StructuralReport& r) { return static_cast<double>(r.diameter); });
  row("Average path length", [](const StructuralReport& r) { return r.avg_path_length; });
  return out;
}

} // namespace forumnet
