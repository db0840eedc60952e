#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "forumnet/error.hpp"
#include "forumnet/viz.hpp"
#include "oracles.hpp"

using namespace forumnet;

namespace {

OneModeNetwork weighted(const std::vector<Weight>& weights) {
  // disjoint edges a_i -- b_i so any weight vector is valid
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    nodes.push_back("a" + std::to_string(i));
    nodes.push_back("b" + std::to_string(i));
    edges.push_back({static_cast<NodeIndex>(2 * i), static_cast<NodeIndex>(2 * i + 1), weights[i]});
  }
  return OneModeNetwork(Mode::user, nodes, edges);
}

OneModeNetwork star(int leaves) {
  std::vector<std::string> nodes = {"hub"};
  std::vector<std::tuple<std::string, std::string, Weight>> edges;
  for (int i = 1; i <= leaves; ++i) {
    nodes.push_back("leaf" + std::to_string(i));
    edges.emplace_back("hub", nodes.back(), 1);
  }
  return OneModeNetwork::from_edges(Mode::user, nodes, edges);
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

using EdgeSet = std::map<std::pair<std::string, std::string>, Weight>;

EdgeSet edges_of(const OneModeNetwork& g) {
  EdgeSet out;
  for (const auto& e : g.edges()) {
    out[std::minmax(g.nodes()[e.a], g.nodes()[e.b])] = e.weight;
  }
  return out;
}

// Minimal readers for the two text formats, independent of the exporter.
EdgeSet parse_dot(const std::string& text) {
  EdgeSet out;
  const std::regex edge(R"re("([^"]*)" -- "([^"]*)" \[weight=(\d+)\])re");
  for (std::sregex_iterator it(text.begin(), text.end(), edge), end; it != end; ++it) {
    out[std::minmax((*it)[1].str(), (*it)[2].str())] = std::stoull((*it)[3].str());
  }
  return out;
}

EdgeSet parse_graphml(const std::string& text) {
  EdgeSet out;
  const std::regex edge(R"re(<edge[^>]*source="([^"]*)"[^>]*target="([^"]*)"[^>]*>\s*<data key="weight">(\d+)</data>)re");
  for (std::sregex_iterator it(text.begin(), text.end(), edge), end; it != end; ++it) {
    out[std::minmax((*it)[1].str(), (*it)[2].str())] = std::stoull((*it)[3].str());
  }
  return out;
}

double centroid_distance(const LayoutResult& r, std::size_t i) {
  double cx = 0.0;
  double cy = 0.0;
  for (const auto& p : r.positions) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(r.positions.size());
  cy /= static_cast<double>(r.positions.size());
  return std::hypot(r.positions[i].x - cx, r.positions[i].y - cy);
}

} // namespace

TEST_CASE("thinning the worked weight set") {
  const auto g = weighted({1, 1, 1, 5});
  const auto stats = thinning_stats(g, {});
  CHECK(stats.mean == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(stats.sd == doctest::Approx(2.0).epsilon(1e-12));
  REQUIRE(stats.cutoff);
  CHECK(*stats.cutoff == doctest::Approx(4.0).epsilon(1e-12));
  const auto t = thin(g, {});
  REQUIRE(t.edge_count() == 1);
  CHECK(t.edges()[0].weight == 5);
  CHECK(t.node_count() == g.node_count());
}

TEST_CASE("equal weights thin to nothing under strict cutoff") {
  const auto t = thin(weighted({3, 3, 3}), {1.0, true});
  CHECK(t.edge_count() == 0);
  CHECK(t.node_count() == 6);
  CHECK(thin(weighted({3, 3, 3}), {0.0, false}).edge_count() == 3);
}

TEST_CASE("k_sd = 0 non-strict keeps weights at or above the mean") {
  const auto t = thin(weighted({1, 2, 3, 6}), {0.0, false}); // mean 3
  std::vector<Weight> kept;
  for (const auto& e : t.edges()) {
    kept.push_back(e.weight);
  }
  CHECK(kept == std::vector<Weight>{3, 6});
}

TEST_CASE("thinning corner cases") {
  CHECK(thin(weighted({7}), {}).edge_count() == 1);
  CHECK_FALSE(thinning_stats(weighted({7}), {}).cutoff);
  CHECK(thin(OneModeNetwork{}, {}).edge_count() == 0);
  CHECK_THROWS_AS(thinning_stats(weighted({1, 2}), {-1.0, true}), UsageError);
  CHECK(thin(weighted({1, 2, 3, 100}), {1e6, true}).edge_count() == 0);
}

TEST_CASE("thinned edges are a subset of the original") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Weight> w(static_cast<std::size_t>(rng() % 30));
    for (auto& x : w) {
      x = 1 + rng() % 20;
    }
    const auto g = weighted(w);
    const ThinningSpec spec{static_cast<double>(rng() % 30) / 10.0, (rng() & 1) == 0};
    const auto t = thin(g, spec);
    const auto before = edges_of(g);
    for (const auto& [key, weight] : edges_of(t)) {
      REQUIRE(before.count(key));
      CHECK(before.at(key) == weight);
    }
    CHECK(t.nodes() == g.nodes());
    CHECK(t.edge_count() <= g.edge_count());
  }
}

TEST_CASE("single node layout sits at the centre") {
  const auto r = layout(OneModeNetwork(Mode::user, {"only"}, {}), 1, 10);
  REQUIRE(r.positions.size() == 1);
  CHECK(r.positions[0] == Point{0.5, 0.5});
}

TEST_CASE("layout is deterministic per seed and stays in the unit square") {
  std::mt19937_64 rng(6);
  const auto g = oracle::to_network(oracle::random_graph(rng, 30, 0.1));
  const auto a = layout(g, 99, 200);
  const auto b = layout(g, 99, 200);
  CHECK(a == b);
  std::ostringstream sa;
  std::ostringstream sb;
  write_positions_csv(a, sa);
  write_positions_csv(b, sb);
  CHECK(sa.str() == sb.str());
  CHECK_FALSE(layout(g, 100, 200) == a);
  for (const auto& p : a.positions) {
    CHECK(p.x >= 0.0);
    CHECK(p.x <= 1.0);
    CHECK(p.y >= 0.0);
    CHECK(p.y <= 1.0);
  }
  CHECK(sa.str().rfind("id,mode,x,y\n", 0) == 0);
}

TEST_CASE("layout pulls the hub of a star to the centroid") {
  const auto g = star(8);
  for (const std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    CAPTURE(seed);
    const auto r = layout(g, seed, 500);
    const double hub = centroid_distance(r, 0);
    for (std::size_t i = 1; i < r.positions.size(); ++i) {
      CHECK(hub < centroid_distance(r, i));
    }
  }
}

TEST_CASE("layout errors") {
  CHECK_THROWS_AS(layout(OneModeNetwork{}, 1, 10), UsageError);
  CHECK_THROWS_AS(layout(star(2), 1, 0), UsageError);
  CHECK_THROWS_AS(layout(BipartiteNetwork{}, 1, 10), UsageError);
}

TEST_CASE("bipartite layout lists users then threads") {
  const auto b = build_bipartite(fixtures::posts_of({{"u1", "t1"}, {"u2", "t1"}, {"u2", "t2"}}));
  const auto r = layout(b, 3, 50);
  CHECK(r.ids == std::vector<std::string>{"u1", "u2", "t1", "t2"});
  CHECK(r.modes == std::vector<Mode>{Mode::user, Mode::user, Mode::thread, Mode::thread});
}

TEST_CASE("DOT export of a single edge") {
  const auto g = OneModeNetwork::from_edges(Mode::user, {"a", "b"}, {{"a", "b", 3}});
  const auto dot = export_graph(g, nullptr, GraphFormat::dot);
  CHECK(count(dot, "\"a\" -- \"b\"") == 1);
  CHECK(count(dot, " -- ") == 1);
  CHECK(dot.find("weight=3") != std::string::npos);
  CHECK(dot.rfind("graph ", 0) == 0);
}

TEST_CASE("GraphML export of an empty graph") {
  const auto xml = export_graph(OneModeNetwork{}, nullptr, GraphFormat::graphml);
  CHECK(xml.find("<?xml") == 0);
  CHECK(xml.find("edgedefault=\"undirected\"") != std::string::npos);
  CHECK(count(xml, "<node ") == 0);
  CHECK(xml.find("</graphml>") != std::string::npos);
}

TEST_CASE("SVG export of a triangle") {
  const auto g = OneModeNetwork::from_edges(Mode::user, {"a", "b", "c"},
                                            {{"a", "b", 1}, {"b", "c", 1}, {"a", "c", 2}});
  const auto pos = layout(g, 7, 100);
  const auto svg = export_graph(g, &pos, GraphFormat::svg, NodeSizing::attr);
  CHECK(count(svg, "<circle") == 3);
  CHECK(count(svg, "<line") == 3);
  CHECK(svg.find("viewBox=\"0 0 1000 1000\"") != std::string::npos);
  CHECK_THROWS_AS(export_graph(g, nullptr, GraphFormat::svg), UsageError);
}

TEST_CASE("bipartite SVG draws threads as squares") {
  const auto b = build_bipartite(fixtures::posts_of({{"u1", "t1"}, {"u2", "t1"}, {"u2", "t2"}}));
  const auto pos = layout(b, 3, 50);
  const auto svg = export_graph(b, &pos, GraphFormat::svg);
  CHECK(count(svg, "<circle") == 2);
  CHECK(count(svg, "<rect") == 2);
  CHECK(count(svg, "<line") == 3);
}

TEST_CASE("DOT and GraphML round-trip topology and weights") {
  std::mt19937_64 rng(12);
  std::vector<std::pair<std::string, std::string>> posts;
  for (int i = 0; i < 150; ++i) {
    posts.emplace_back("u" + std::to_string(rng() % 20), "t" + std::to_string(rng() % 15));
  }
  const auto b = build_bipartite(fixtures::posts_of(posts));
  for (const Mode m : {Mode::user, Mode::thread}) {
    const auto g = project(b, m, Weighting::posts);
    const auto expected = edges_of(g);
    CHECK(parse_dot(export_graph(g, nullptr, GraphFormat::dot)) == expected);
    CHECK(parse_graphml(export_graph(g, nullptr, GraphFormat::graphml)) == expected);
  }
  const auto dot = export_graph(b, nullptr, GraphFormat::dot);
  CHECK(count(dot, " -- ") == b.incidence_count());
}

TEST_CASE("format names") {
  CHECK(parse_graph_format("graphml") == GraphFormat::graphml);
  CHECK_FALSE(parse_graph_format("png"));
  CHECK(extension(GraphFormat::svg) == "svg");
}
