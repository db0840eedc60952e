#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forumnet/graph.hpp"

namespace forumnet {

struct ThinningSpec {
  double k_sd = 1.0;
  bool strict = true; // keep weight > cutoff; false keeps weight >= cutoff
};

struct ThinningStats {
  std::size_t edges_before = 0;
  std::size_t edges_after = 0;
  double mean = 0.0;
  double sd = 0.0; // sample standard deviation
  std::optional<double> cutoff; // empty when fewer than 2 edges
};

ThinningStats thinning_stats(const OneModeNetwork& g, const ThinningSpec& spec);

/// Hides ties at or below mean + k_sd * sd of the tie weights. Nodes are
/// kept. Graphs with fewer than two edges come back unchanged.
OneModeNetwork thin(const OneModeNetwork& g, const ThinningSpec& spec);

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

/// Positions in the unit square, aligned with `ids`. Bipartite layouts list
/// users first, then threads.
struct LayoutResult {
  std::vector<std::string> ids;
  std::vector<Mode> modes;
  std::vector<Point> positions;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;

  bool operator==(const LayoutResult&) const = default;
};

/// Fruchterman-Reingold spring embedding with degree-weighted gravity toward
/// the centre and a linear cooling schedule, from a seeded random start.
/// Throws UsageError for an empty graph or zero iterations.
LayoutResult layout(const OneModeNetwork& g, std::uint64_t seed, std::size_t iterations);
LayoutResult layout(const BipartiteNetwork& b, std::uint64_t seed, std::size_t iterations);

/// `id,mode,x,y`, full precision.
void write_positions_csv(const LayoutResult& layout, std::ostream& out);

enum class GraphFormat { dot, graphml, svg };
std::optional<GraphFormat> parse_graph_format(std::string_view name);
std::string_view extension(GraphFormat f);

enum class NodeSizing { constant, attr };

/// DOT and GraphML carry ids, weights and node attributes; SVG needs a
/// layout (UsageError otherwise) and draws weight-scaled lines and circles.
std::string export_graph(const OneModeNetwork& g, const LayoutResult* layout, GraphFormat format,
                         NodeSizing sizing = NodeSizing::constant);

/// Users are circles and threads squares in SVG; edge weight is the post
/// count and node size the number of incident nodes.
std::string export_graph(const BipartiteNetwork& b, const LayoutResult* layout, GraphFormat format,
                         NodeSizing sizing = NodeSizing::constant);

} // namespace forumnet
