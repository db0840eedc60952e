#include "forumnet/viz.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <set>

#include "forumnet/csv.hpp"
#include "forumnet/error.hpp"

namespace forumnet {

ThinningStats thinning_stats(const OneModeNetwork& g, const ThinningSpec& spec) {
  if (!(spec.k_sd >= 0.0)) {
    throw UsageError("k_sd must be >= 0");
  }
  ThinningStats s;
  s.edges_before = g.edge_count();
  s.edges_after = g.edge_count();
  const auto& edges = g.edges();
  if (edges.empty()) {
    return s;
  }
  double total = 0.0;
  for (const auto& e : edges) {
    total += static_cast<double>(e.weight);
  }
  s.mean = total / static_cast<double>(edges.size());
  if (edges.size() < 2) {
    return s;
  }
  double ss = 0.0;
  for (const auto& e : edges) {
    const double d = static_cast<double>(e.weight) - s.mean;
    ss += d * d;
  }
  s.sd = std::sqrt(ss / static_cast<double>(edges.size() - 1));
  s.cutoff = s.mean + spec.k_sd * s.sd;
  s.edges_after = static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [&](const Edge& e) {
    const double w = static_cast<double>(e.weight);
    return spec.strict ? w > *s.cutoff : w >= *s.cutoff;
  }));
  return s;
}

OneModeNetwork thin(const OneModeNetwork& g, const ThinningSpec& spec) {
  const ThinningStats stats = thinning_stats(g, spec);
  if (!stats.cutoff) {
    return g;
  }
  std::vector<Edge> kept;
  for (const auto& e : g.edges()) {
    const double w = static_cast<double>(e.weight);
    if (spec.strict ? w > *stats.cutoff : w >= *stats.cutoff) {
      kept.push_back(e);
    }
  }
  return OneModeNetwork(g.mode(), g.nodes(), std::move(kept), g.node_attr());
}

namespace {

struct LayoutInput {
  std::size_t n = 0;
  std::vector<std::pair<NodeIndex, NodeIndex>> edges;
};

// 53 random mantissa bits; independent of the standard library's
// distribution implementations.
double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<Point> spring_embed(const LayoutInput& in, std::uint64_t seed, std::size_t iterations) {
  const std::size_t n = in.n;
  std::vector<Point> pos(n);
  if (n == 1) {
    pos[0] = {0.5, 0.5};
    return pos;
  }
  std::mt19937_64 rng(seed);
  for (auto& p : pos) {
    p.x = unit_double(rng);
    p.y = unit_double(rng);
  }
  std::vector<double> degree(n, 0.0);
  for (const auto& [a, b] : in.edges) {
    degree[a] += 1.0;
    degree[b] += 1.0;
  }

  const double k = std::sqrt(1.0 / static_cast<double>(n));
  const double k2 = k * k;
  constexpr double gravity = 0.05;
  const double t0 = 0.1;
  std::vector<Point> disp(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    std::fill(disp.begin(), disp.end(), Point{});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double dx = pos[i].x - pos[j].x;
        double dy = pos[i].y - pos[j].y;
        double d2 = dx * dx + dy * dy;
        if (d2 < 1e-18) {
          // coincident points: separate along an index-dependent direction
          const double angle = static_cast<double>((i * 7919 + j * 104729) % 360) * (M_PI / 180.0);
          dx = 1e-6 * std::cos(angle);
          dy = 1e-6 * std::sin(angle);
          d2 = dx * dx + dy * dy;
        }
        // k^2/d along the unit vector
        const double f = k2 / d2;
        disp[i].x += dx * f;
        disp[i].y += dy * f;
        disp[j].x -= dx * f;
        disp[j].y -= dy * f;
      }
    }
    for (const auto& [a, b] : in.edges) {
      const double dx = pos[a].x - pos[b].x;
      const double dy = pos[a].y - pos[b].y;
      // d^2/k along the unit vector
      const double f = std::sqrt(dx * dx + dy * dy) / k;
      disp[a].x -= dx * f;
      disp[a].y -= dy * f;
      disp[b].x += dx * f;
      disp[b].y += dy * f;
    }
    Point centroid;
    for (const auto& p : pos) {
      centroid.x += p.x;
      centroid.y += p.y;
    }
    centroid.x /= static_cast<double>(n);
    centroid.y /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = centroid.x - pos[i].x;
      const double dy = centroid.y - pos[i].y;
      const double d = std::sqrt(dx * dx + dy * dy);
      if (d > 0.0) {
        const double f = gravity * k * (degree[i] + 1.0) / d;
        disp[i].x += dx * f;
        disp[i].y += dy * f;
      }
    }
    const double temperature =
        t0 * (1.0 - static_cast<double>(it) / static_cast<double>(iterations));
    for (std::size_t i = 0; i < n; ++i) {
      const double len = std::sqrt(disp[i].x * disp[i].x + disp[i].y * disp[i].y);
      if (len > 0.0) {
        const double step = std::min(len, temperature) / len;
        pos[i].x += disp[i].x * step;
        pos[i].y += disp[i].y * step;
      }
    }
  }

  // uniform scale of the bounding box into [0.05, 0.95]^2, centred
  double min_x = pos[0].x, max_x = pos[0].x, min_y = pos[0].y, max_y = pos[0].y;
  for (const auto& p : pos) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double span = std::max(max_x - min_x, max_y - min_y);
  const double scale = span > 0.0 ? 0.9 / span : 0.0;
  const double cx = (min_x + max_x) / 2.0;
  const double cy = (min_y + max_y) / 2.0;
  for (auto& p : pos) {
    p.x = 0.5 + (p.x - cx) * scale;
    p.y = 0.5 + (p.y - cy) * scale;
  }
  return pos;
}

void check_layout_args(std::size_t n, std::size_t iterations) {
  if (n == 0) {
    throw UsageError("layout needs at least one node");
  }
  if (iterations == 0) {
    throw UsageError("layout needs at least one iteration");
  }
}

} // namespace

LayoutResult layout(const OneModeNetwork& g, std::uint64_t seed, std::size_t iterations) {
  check_layout_args(g.node_count(), iterations);
  LayoutInput in;
  in.n = g.node_count();
  for (const auto& e : g.edges()) {
    in.edges.emplace_back(e.a, e.b);
  }
  LayoutResult r;
  r.ids = g.nodes();
  r.modes.assign(g.node_count(), g.mode());
  r.positions = spring_embed(in, seed, iterations);
  r.seed = seed;
  r.iterations = iterations;
  return r;
}

LayoutResult layout(const BipartiteNetwork& b, std::uint64_t seed, std::size_t iterations) {
  const std::size_t nu = b.user_count();
  check_layout_args(nu + b.thread_count(), iterations);
  LayoutInput in;
  in.n = nu + b.thread_count();
  for (NodeIndex u = 0; u < nu; ++u) {
    for (const auto& inc : b.threads_of(u)) {
      in.edges.emplace_back(u, static_cast<NodeIndex>(nu + inc.node));
    }
  }
  LayoutResult r;
  r.ids = b.user_nodes();
  r.ids.insert(r.ids.end(), b.thread_nodes().begin(), b.thread_nodes().end());
  r.modes.assign(nu, Mode::user);
  r.modes.resize(in.n, Mode::thread);
  r.positions = spring_embed(in, seed, iterations);
  r.seed = seed;
  r.iterations = iterations;
  return r;
}

namespace {

std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

} // namespace

void write_positions_csv(const LayoutResult& layout, std::ostream& out) {
  out << "id,mode,x,y\n";
  for (std::size_t i = 0; i < layout.ids.size(); ++i) {
    out << csv::escape(layout.ids[i]) << ',' << to_string(layout.modes[i]) << ','
        << shortest(layout.positions[i].x) << ',' << shortest(layout.positions[i].y) << '\n';
  }
}

std::optional<GraphFormat> parse_graph_format(std::string_view name) {
  if (name == "dot") {
    return GraphFormat::dot;
  }
  if (name == "graphml") {
    return GraphFormat::graphml;
  }
  if (name == "svg") {
    return GraphFormat::svg;
  }
  return std::nullopt;
}

std::string_view extension(GraphFormat f) {
  switch (f) {
  case GraphFormat::dot:
    return "dot";
  case GraphFormat::graphml:
    return "graphml";
  case GraphFormat::svg:
    return "svg";
  }
  return "";
}

namespace {

// Format-neutral view shared by the 1-mode and 2-mode exporters.
struct DrawGraph {
  std::string name;
  bool bipartite = false;
  std::vector<std::string> ids; // unique within the drawing
  std::vector<Mode> modes;
  std::vector<std::int64_t> size;
  std::vector<Edge> edges;
};

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
    }
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
    case '&':
      out += "&amp;";
      break;
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '"':
      out += "&quot;";
      break;
    case '\'':
      out += "&apos;";
      break;
    default:
      out.push_back(c);
    }
  }
  return out;
}

std::string to_dot(const DrawGraph& g, const LayoutResult* layout) {
  std::string out = "graph " + dot_quote(g.name) + " {\n";
  for (std::size_t i = 0; i < g.ids.size(); ++i) {
    out += "  " + dot_quote(g.ids[i]) + " [";
    if (g.bipartite) {
      out += std::string("mode=\"") + std::string(to_string(g.modes[i])) + "\", shape=" +
             (g.modes[i] == Mode::user ? "circle" : "box") + ", ";
    }
    out += "size=" + std::to_string(g.size[i]);
    if (layout) {
      out += ", pos=\"" + shortest(layout->positions[i].x) + "," + shortest(layout->positions[i].y) +
             "!\"";
    }
    out += "];\n";
  }
  for (const auto& e : g.edges) {
    out += "  " + dot_quote(g.ids[e.a]) + " -- " + dot_quote(g.ids[e.b]) +
           " [weight=" + std::to_string(e.weight) + "];\n";
  }
  out += "}\n";
  return out;
}

std::string to_graphml(const DrawGraph& g, const LayoutResult* layout) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                    "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
                    "  <key id=\"mode\" for=\"node\" attr.name=\"mode\" attr.type=\"string\"/>\n"
                    "  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"long\"/>\n";
  if (layout) {
    out += "  <key id=\"x\" for=\"node\" attr.name=\"x\" attr.type=\"double\"/>\n"
           "  <key id=\"y\" for=\"node\" attr.name=\"y\" attr.type=\"double\"/>\n";
  }
  out += "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n";
  out += "  <graph id=\"" + xml_escape(g.name) + "\" edgedefault=\"undirected\">\n";
  for (std::size_t i = 0; i < g.ids.size(); ++i) {
    out += "    <node id=\"" + xml_escape(g.ids[i]) + "\"><data key=\"mode\">" +
           std::string(to_string(g.modes[i])) + "</data><data key=\"size\">" +
           std::to_string(g.size[i]) + "</data>";
    if (layout) {
      out += "<data key=\"x\">" + shortest(layout->positions[i].x) + "</data><data key=\"y\">" +
             shortest(layout->positions[i].y) + "</data>";
    }
    out += "</node>\n";
  }
  for (const auto& e : g.edges) {
    out += "    <edge source=\"" + xml_escape(g.ids[e.a]) + "\" target=\"" + xml_escape(g.ids[e.b]) +
           "\"><data key=\"weight\">" + std::to_string(e.weight) + "</data></edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

std::string to_svg(const DrawGraph& g, const LayoutResult& layout, NodeSizing sizing) {
  constexpr double canvas = 1000.0;
  Weight max_weight = 1;
  for (const auto& e : g.edges) {
    max_weight = std::max(max_weight, e.weight);
  }
  std::int64_t max_size = 1;
  for (const auto s : g.size) {
    max_size = std::max(max_size, s);
  }
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" "
                    "width=\"1000\" height=\"1000\">\n";
  out += "<g stroke=\"#7a7a7a\" stroke-opacity=\"0.6\">\n";
  char buf[256];
  for (const auto& e : g.edges) {
    const Point& a = layout.positions[e.a];
    const Point& b = layout.positions[e.b];
    const double width = 0.5 + 3.5 * static_cast<double>(e.weight) / static_cast<double>(max_weight);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke-width=\"%.2f\"/>\n",
                  a.x * canvas, a.y * canvas, b.x * canvas, b.y * canvas, width);
    out += buf;
  }
  out += "</g>\n<g stroke=\"#222222\" stroke-width=\"0.5\">\n";
  for (std::size_t i = 0; i < g.ids.size(); ++i) {
    const Point& p = layout.positions[i];
    const double radius =
        sizing == NodeSizing::attr
            ? 2.0 + 10.0 * static_cast<double>(std::max<std::int64_t>(g.size[i], 0)) /
                        static_cast<double>(max_size)
            : 5.0;
    const std::string title = "<title>" + xml_escape(g.ids[i]) + "</title>";
    if (g.bipartite && g.modes[i] == Mode::thread) {
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"#e08a2c\">",
                    p.x * canvas - radius, p.y * canvas - radius, 2.0 * radius, 2.0 * radius);
      out += buf + title + "</rect>\n";
    } else {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"#3b75af\">",
                    p.x * canvas, p.y * canvas, radius);
      out += buf + title + "</circle>\n";
    }
  }
  out += "</g>\n</svg>\n";
  return out;
}

std::string render(const DrawGraph& g, const LayoutResult* layout, GraphFormat format,
                   NodeSizing sizing) {
  if (layout && layout->positions.size() != g.ids.size()) {
    throw UsageError("layout does not match the graph");
  }
  switch (format) {
  case GraphFormat::dot:
    return to_dot(g, layout);
  case GraphFormat::graphml:
    return to_graphml(g, layout);
  case GraphFormat::svg:
    if (!layout) {
      throw UsageError("svg export requires a layout");
    }
    return to_svg(g, *layout, sizing);
  }
  return {};
}

} // namespace

std::string export_graph(const OneModeNetwork& g, const LayoutResult* layout, GraphFormat format,
                         NodeSizing sizing) {
  DrawGraph d;
  d.name = std::string(to_string(g.mode()));
  d.ids = g.nodes();
  d.modes.assign(g.node_count(), g.mode());
  d.size = g.node_attr();
  d.edges = g.edges();
  return render(d, layout, format, sizing);
}

std::string export_graph(const BipartiteNetwork& b, const LayoutResult* layout, GraphFormat format,
                         NodeSizing sizing) {
  DrawGraph d;
  d.name = "bipartite";
  d.bipartite = true;
  const std::size_t nu = b.user_count();
  // prefix ids only when a user and a thread share one
  std::set<std::string_view> users(b.user_nodes().begin(), b.user_nodes().end());
  const bool clash = std::any_of(b.thread_nodes().begin(), b.thread_nodes().end(),
                                 [&](const std::string& t) { return users.count(t) > 0; });
  for (const auto& u : b.user_nodes()) {
    d.ids.push_back(clash ? "user:" + u : u);
  }
  for (const auto& t : b.thread_nodes()) {
    d.ids.push_back(clash ? "thread:" + t : t);
  }
  d.modes.assign(nu, Mode::user);
  d.modes.resize(d.ids.size(), Mode::thread);
  for (NodeIndex u = 0; u < nu; ++u) {
    d.size.push_back(static_cast<std::int64_t>(b.threads_of(u).size()));
    for (const auto& inc : b.threads_of(u)) {
      d.edges.push_back({u, static_cast<NodeIndex>(nu + inc.node), inc.posts});
    }
  }
  for (NodeIndex t = 0; t < b.thread_count(); ++t) {
    d.size.push_back(static_cast<std::int64_t>(b.users_of(t).size()));
  }
  return render(d, layout, format, sizing);
}

} // namespace forumnet
