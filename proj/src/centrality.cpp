#include "forumnet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "forumnet/error.hpp"

namespace forumnet {

std::vector<double> degree_centrality(const OneModeNetwork& g) {
  const std::size_t n = g.node_count();
  std::vector<double> out(n, 0.0);
  if (n < 2) {
    return out;
  }
  for (NodeIndex v = 0; v < n; ++v) {
    out[v] = static_cast<double>(g.degree(v)) / static_cast<double>(n - 1);
  }
  return out;
}

namespace {

constexpr auto kUnreached = std::numeric_limits<std::uint32_t>::max();

// One BFS per source feeding both closeness and Brandes accumulation.
struct Sweep {
  std::vector<double> closeness;
  std::vector<double> betweenness; // raw, ordered pairs
};

Sweep sweep(const OneModeNetwork& g, bool want_closeness, bool want_betweenness) {
  const std::size_t n = g.node_count();
  Sweep out;
  out.closeness.assign(n, 0.0);
  out.betweenness.assign(n, 0.0);
  if (n < 2) {
    return out;
  }
  std::vector<std::uint32_t> dist(n, kUnreached);
  std::vector<double> sigma(n, 0.0);
  std::vector<double> delta(n, 0.0);
  std::vector<NodeIndex> order; // BFS visiting order doubles as the stack
  order.reserve(n);
  for (NodeIndex s = 0; s < n; ++s) {
    order.clear();
    order.push_back(s);
    dist[s] = 0;
    sigma[s] = 1.0;
    std::uint64_t far = 0;
    for (std::size_t head = 0; head < order.size(); ++head) {
      const NodeIndex v = order[head];
      for (const auto& nb : g.neighbors(v)) {
        const NodeIndex w = nb.node;
        if (dist[w] == kUnreached) {
          dist[w] = dist[v] + 1;
          far += dist[w];
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
        }
      }
    }
    if (want_closeness && order.size() > 1) {
      const double reach = static_cast<double>(order.size() - 1);
      out.closeness[s] = (reach / static_cast<double>(n - 1)) * (reach / static_cast<double>(far));
    }
    if (want_betweenness) {
      for (std::size_t i = order.size(); i-- > 1;) {
        const NodeIndex w = order[i];
        const double share = (1.0 + delta[w]) / sigma[w];
        for (const auto& nb : g.neighbors(w)) {
          if (dist[nb.node] + 1 == dist[w]) {
            delta[nb.node] += sigma[nb.node] * share;
          }
        }
        out.betweenness[w] += delta[w];
      }
    }
    for (const NodeIndex v : order) {
      dist[v] = kUnreached;
      sigma[v] = 0.0;
      delta[v] = 0.0;
    }
  }
  return out;
}

double betweenness_scale(std::size_t n) {
  return n < 3 ? 0.0 : 2.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
}

} // namespace

std::vector<double> closeness_centrality(const OneModeNetwork& g) {
  return sweep(g, true, false).closeness;
}

std::vector<double> raw_betweenness(const OneModeNetwork& g) {
  auto raw = sweep(g, false, true).betweenness;
  for (auto& b : raw) {
    b /= 2.0;
  }
  return raw;
}

std::vector<double> betweenness_centrality(const OneModeNetwork& g) {
  auto values = raw_betweenness(g);
  const double scale = betweenness_scale(g.node_count());
  for (auto& b : values) {
    b *= scale;
  }
  return values;
}

std::vector<double> bipartite_degree_centrality(const BipartiteNetwork& b, Mode mode) {
  const bool users = mode == Mode::user;
  const std::size_t n = users ? b.user_count() : b.thread_count();
  const double opposite = static_cast<double>(users ? b.thread_count() : b.user_count());
  std::vector<double> out(n, 0.0);
  for (NodeIndex v = 0; v < n; ++v) {
    const std::size_t deg = users ? b.threads_of(v).size() : b.users_of(v).size();
    out[v] = static_cast<double>(deg) / opposite;
  }
  return out;
}

std::string_view to_string(Measure m) {
  switch (m) {
  case Measure::degree:
    return "degree";
  case Measure::closeness:
    return "closeness";
  case Measure::betweenness:
    return "betweenness";
  }
  return "";
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) {
    return s;
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return frac == 0.0 ? sorted[lo] : sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
  };
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  double total = 0.0;
  for (const double v : values) {
    total += v;
  }
  s.mean = total / static_cast<double>(values.size());
  return s;
}

double Histogram::bin_lo(std::size_t i) const {
  return static_cast<double>(i) / static_cast<double>(counts.size());
}

double Histogram::bin_hi(std::size_t i) const {
  return static_cast<double>(i + 1) / static_cast<double>(counts.size());
}

Histogram histogram(std::span<const double> values, std::size_t bins) {
  Histogram h;
  h.counts.assign(bins, 0);
  for (const double v : values) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    const auto bin = std::min(static_cast<std::size_t>(clamped * static_cast<double>(bins)), bins - 1);
    ++h.counts[bin];
  }
  return h;
}

double CentralityRow::value(Measure m) const {
  switch (m) {
  case Measure::degree:
    return degree;
  case Measure::closeness:
    return closeness;
  case Measure::betweenness:
    return betweenness;
  }
  return 0.0;
}

std::vector<double> CentralityTable::column(Measure m) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    out.push_back(r.value(m));
  }
  return out;
}

CentralityTable centrality_table(const OneModeNetwork& g) {
  CentralityTable t;
  t.mode = g.mode();
  const auto degree = degree_centrality(g);
  const auto swept = sweep(g, true, true);
  // ordered-pair sums halved, then normalized; same arithmetic as
  // betweenness_centrality so the two agree bit for bit
  const double scale = betweenness_scale(g.node_count());
  t.rows.reserve(g.node_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    t.rows.push_back({g.nodes()[v], degree[v], swept.closeness[v],
                      (swept.betweenness[v] / 2.0) * scale});
  }
  for (const Measure m : kMeasures) {
    const auto col = t.column(m);
    t.summaries[static_cast<std::size_t>(m)] = summarize(col);
    t.histograms[static_cast<std::size_t>(m)] = histogram(col);
  }
  return t;
}

std::string_view to_string(Role r) {
  switch (r) {
  case Role::moderator:
    return "moderator";
  case Role::core_member:
    return "core_member";
  case Role::unknown:
    return "unknown";
  }
  return "unknown";
}

std::optional<Role> parse_role(std::string_view name) {
  if (name == "moderator") {
    return Role::moderator;
  }
  if (name == "core_member") {
    return Role::core_member;
  }
  if (name == "unknown") {
    return Role::unknown;
  }
  return std::nullopt;
}

CoreSet core_set(const CentralityTable& table, double threshold,
                 const std::map<std::string, Role>* roles) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw UsageError("core threshold must lie in [0, 1]");
  }
  CoreSet core;
  core.mode = table.mode;
  core.threshold = threshold;
  for (const auto& row : table.rows) {
    if (row.degree >= threshold) {
      core.members.push_back(row.node_id);
      Role role = Role::unknown;
      if (roles) {
        if (auto it = roles->find(row.node_id); it != roles->end()) {
          role = it->second;
        }
      }
      core.roles.emplace(row.node_id, role);
    }
  }
  return core;
}

std::vector<SilentInitiator> silent_initiators(const BipartiteNetwork& b,
                                               const OneModeNetwork& g_user,
                                               std::size_t min_threads) {
  if (g_user.mode() != Mode::user) {
    throw UsageError("silent_initiators needs the user projection");
  }
  if (g_user.nodes() != b.user_nodes()) {
    throw UsageError("user network does not match the bipartite network");
  }
  std::vector<SilentInitiator> out;
  for (NodeIndex u = 0; u < b.user_count(); ++u) {
    const std::size_t threads = b.threads_of(u).size();
    if (threads >= min_threads && g_user.degree(u) == 0) {
      out.push_back({b.user_nodes()[u], threads});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const SilentInitiator& x, const SilentInitiator& y) {
    return x.thread_count > y.thread_count;
  });
  return out;
}

} // namespace forumnet
