#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forumnet/graph.hpp"

namespace forumnet {

/// Values are aligned with `g.nodes()` and normalized to [0, 1].
std::vector<double> degree_centrality(const OneModeNetwork& g);

/// (r/(n-1)) * (r/S) for a node reaching r others at total distance S.
/// Reduces to (n-1)/S on connected graphs; isolates score 0.
std::vector<double> closeness_centrality(const OneModeNetwork& g);

/// Brandes pair-dependency sums, each unordered pair counted once.
std::vector<double> raw_betweenness(const OneModeNetwork& g);

/// raw_betweenness / ((n-1)(n-2)/2); all zero for n < 3.
std::vector<double> betweenness_centrality(const OneModeNetwork& g);

/// Degree over the size of the opposite node set, for the `mode` side.
std::vector<double> bipartite_degree_centrality(const BipartiteNetwork& b, Mode mode);

enum class Measure { degree, closeness, betweenness };
inline constexpr std::array<Measure, 3> kMeasures = {Measure::degree, Measure::closeness,
                                                     Measure::betweenness};
std::string_view to_string(Measure m);

struct Summary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;

  bool operator==(const Summary&) const = default;
};

/// Quartiles by linear interpolation between order statistics, so the
/// median of an even count is the mean of the two middle values. All zero
/// for an empty input.
Summary summarize(std::span<const double> values);

inline constexpr std::size_t kHistogramBins = 50;

/// Fixed-width bins over [0, 1]; bin i covers [i/bins, (i+1)/bins) and the
/// last bin is closed.
struct Histogram {
  std::vector<std::size_t> counts;

  double bin_lo(std::size_t i) const;
  double bin_hi(std::size_t i) const;
};

Histogram histogram(std::span<const double> values, std::size_t bins = kHistogramBins);

struct CentralityRow {
  std::string node_id;
  double degree = 0.0;
  double closeness = 0.0;
  double betweenness = 0.0;

  double value(Measure m) const;
};

struct CentralityTable {
  Mode mode = Mode::user;
  std::vector<CentralityRow> rows; // g.nodes() order
  std::array<Summary, 3> summaries{};
  std::array<Histogram, 3> histograms{};

  const Summary& summary(Measure m) const { return summaries[static_cast<std::size_t>(m)]; }
  const Histogram& hist(Measure m) const { return histograms[static_cast<std::size_t>(m)]; }
  std::vector<double> column(Measure m) const;
};

CentralityTable centrality_table(const OneModeNetwork& g);

enum class Role { moderator, core_member, unknown };
std::string_view to_string(Role r);
std::optional<Role> parse_role(std::string_view name);

struct CoreSet {
  Mode mode = Mode::user;
  double threshold = 0.0;
  std::vector<std::string> members; // table order
  std::map<std::string, Role> roles;
};

/// Nodes with degree >= threshold. Throws UsageError unless threshold is in [0, 1].
CoreSet core_set(const CentralityTable& table, double threshold,
                 const std::map<std::string, Role>* roles = nullptr);

struct SilentInitiator {
  std::string user_id;
  std::size_t thread_count = 0;

  bool operator==(const SilentInitiator&) const = default;
};

/// Users in at least `min_threads` threads with no co-participant at all.
/// Sorted by thread count descending, then id. Throws UsageError when
/// `g_user` is not the user projection of `b`.
std::vector<SilentInitiator> silent_initiators(const BipartiteNetwork& b,
                                               const OneModeNetwork& g_user,
                                               std::size_t min_threads);

} // namespace forumnet
