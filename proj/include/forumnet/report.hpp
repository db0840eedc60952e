#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forumnet/centrality.hpp"
#include "forumnet/graph.hpp"
#include "forumnet/ingest.hpp"
#include "forumnet/metrics.hpp"
#include "forumnet/viz.hpp"
#include "json.hpp"

namespace forumnet {

enum class Figure { bipartite, user, thread };
std::string_view to_string(Figure f);
std::optional<Figure> parse_figure(std::string_view name);

/// Analysis options. JSON keys mirror the CLI flag names.
struct PipelineConfig {
  double core_threshold = 0.20;
  double thin_sd = 1.0;
  std::uint64_t layout_seed = 42;
  std::size_t layout_iterations = 500;
  Weighting weighting = Weighting::events;
  bool bipartite_norm = false;
  std::size_t silent_min_threads = 21;
  std::size_t top_posters_min = 200;
  Period period = Period::year;
  std::vector<Figure> figures = {Figure::bipartite, Figure::user, Figure::thread};
  std::vector<GraphFormat> formats = {GraphFormat::dot, GraphFormat::graphml, GraphFormat::svg};

  /// Throws ConfigError on out-of-range values.
  void validate() const;

  nlohmann::json to_json() const;
  /// Applies the keys present in `doc` on top of `base`; unknown keys and
  /// ill-typed values throw ConfigError.
  static PipelineConfig from_json(const nlohmann::json& doc, PipelineConfig base);
  static PipelineConfig from_json(const nlohmann::json& doc);
};

struct Provenance {
  std::string tool = "forumnet";
  std::string version = FORUMNET_VERSION;
  nlohmann::json config;
  std::vector<SourceDigest> inputs;
  std::string dataset_sha256; // digest of the serialized dataset

  nlohmann::json to_json() const;
};

struct BipartiteSummary {
  double density = 0.0;
  std::vector<double> user_degree;
  std::vector<double> thread_degree;
};

struct AnalysisBundle {
  ActivityOverview overview;
  std::vector<std::pair<std::string, std::size_t>> top_posters;
  StructuralReport user_report;
  StructuralReport thread_report;
  CentralityTable user_centrality;
  CentralityTable thread_centrality;
  CoreSet core;
  std::vector<SilentInitiator> silent;
  std::optional<BipartiteSummary> bipartite; // with bipartite_norm
  std::vector<std::filesystem::path> artifacts; // relative to the output directory
  Provenance provenance;
};

/// Computes everything except figure files.
AnalysisBundle analyze(const ForumDataset& data, const PipelineConfig& config,
                       const std::map<std::string, Role>* roles = nullptr);

/// Runs the analysis and writes every output under `out_dir`, replacing its
/// previous contents. Files are staged in a sibling directory that is
/// removed if anything fails.
AnalysisBundle run_pipeline(const ForumDataset& data, const PipelineConfig& config,
                            const std::filesystem::path& out_dir,
                            const std::map<std::string, Role>* roles = nullptr);

nlohmann::json to_json(const ActivityOverview& overview);
nlohmann::json to_json(const StructuralReport& report);
nlohmann::json to_json(const Summary& summary);

void write_centrality_csv(const CentralityTable& table, std::ostream& out);
void write_histogram_csv(const Histogram& histogram, std::ostream& out);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

} // namespace forumnet
