// forumnet: forum post logs to 2-mode / 1-mode interaction networks,
// structural measures, centrality tables and drawings.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "forumnet/centrality.hpp"
#include "forumnet/csv.hpp"
#include "forumnet/error.hpp"
#include "forumnet/graph.hpp"
#include "forumnet/ingest.hpp"
#include "forumnet/metrics.hpp"
#include "forumnet/report.hpp"
#include "forumnet/synth.hpp"
#include "forumnet/viz.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace forumnet;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitConfig = 2;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spill(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  out << bytes;
  out.close();
  if (!out) {
    throw InputError("cannot write " + path.string());
  }
}

fs::path sibling(const fs::path& file, const std::string& suffix) {
  fs::path p = file;
  p.replace_extension();
  p += suffix;
  return p;
}

ForumDataset load(const std::string& data, const std::string& users, const std::string& format) {
  InputFormat fmt = guess_format(data);
  if (!format.empty()) {
    fmt = *parse_input_format(format);
  }
  std::optional<fs::path> roster;
  if (!users.empty()) {
    roster = users;
  }
  return load_dataset(data, roster, fmt);
}

struct IngestArgs {
  std::string posts, users, format = "csv", out;
};

int run_ingest(const IngestArgs& a) {
  const ForumDataset data = load(a.posts, a.users, a.format);
  const fs::path dir = a.out;
  spill(dir / "dataset.json", serialize_dataset(data));
  nlohmann::json overview = to_json(activity_overview(data));
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& s : data.sources) {
    inputs.push_back({{"name", s.name}, {"sha256", s.sha256}, {"bytes", s.bytes}});
  }
  overview["inputs"] = inputs;
  overview["rejected_count"] = data.rejected.size();
  spill(dir / "overview.json", overview.dump(2) + "\n");
  std::ostringstream rejected;
  rejected << "raw,reason\n";
  for (const auto& r : data.rejected) {
    rejected << csv::escape(r.raw) << ',' << csv::escape(r.reason) << '\n';
  }
  spill(dir / "rejected.csv", rejected.str());
  std::cout << "posts: " << data.posts.size() << "\nusers: " << data.users.size()
            << "\nrejected: " << data.rejected.size() << '\n';
  return 0;
}

struct SynthArgs {
  SynthConfig cfg;
  std::string out;
};

int run_synth(const SynthArgs& a) {
  const SynthOutput gen = generate_with_truth(a.cfg);
  const fs::path posts = a.out;
  std::ostringstream p;
  write_posts_csv(gen.data, p);
  spill(posts, p.str());
  std::ostringstream u;
  write_users_csv(gen.data, u);
  spill(sibling(posts, ".users.csv"), u.str());
  std::ostringstream r;
  write_roles_csv(gen.roles, r);
  spill(sibling(posts, ".roles.csv"), r.str());
  std::cout << "wrote " << gen.data.posts.size() << " posts to " << posts.string() << '\n';
  return 0;
}

struct AnalyzeArgs {
  std::string data, users, roles, config, out, weighting, period;
  double core_threshold = 0.20;
  double thin_sd = 1.0;
  std::uint64_t layout_seed = 42;
  std::size_t layout_iterations = 500;
  std::size_t silent_min_threads = 21;
  bool bipartite_norm = false;
};

PipelineConfig resolve_config(const AnalyzeArgs& a, const CLI::App& cmd) {
  PipelineConfig cfg;
  if (!a.config.empty()) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(slurp(a.config));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config file: ") + e.what());
    }
    cfg = PipelineConfig::from_json(doc);
  }
  auto given = [&](const char* flag) { return cmd.count(flag) > 0; };
  if (given("--core-threshold")) {
    cfg.core_threshold = a.core_threshold;
  }
  if (given("--thin-sd")) {
    cfg.thin_sd = a.thin_sd;
  }
  if (given("--layout-seed")) {
    cfg.layout_seed = a.layout_seed;
  }
  if (given("--layout-iterations")) {
    cfg.layout_iterations = a.layout_iterations;
  }
  if (given("--silent-min-threads")) {
    cfg.silent_min_threads = a.silent_min_threads;
  }
  if (given("--weighting")) {
    cfg.weighting = *parse_weighting(a.weighting);
  }
  if (given("--period")) {
    cfg.period = *parse_period(a.period);
  }
  if (given("--bipartite-norm")) {
    cfg.bipartite_norm = a.bipartite_norm;
  }
  cfg.validate();
  return cfg;
}

int run_analyze(const AnalyzeArgs& a, const CLI::App& cmd) {
  const PipelineConfig cfg = resolve_config(a, cmd);
  const ForumDataset data = load(a.data, a.users, "");
  std::map<std::string, Role> roles;
  if (!a.roles.empty()) {
    roles = parse_roles_csv(slurp(a.roles));
  }
  const AnalysisBundle bundle = run_pipeline(data, cfg, a.out, &roles);
  const StructuralReport both[] = {bundle.user_report, bundle.thread_report};
  std::cout << format_structural_table(both);
  std::cout << "core members: " << bundle.core.members.size()
            << "  silent initiators: " << bundle.silent.size()
            << "  files: " << bundle.artifacts.size() << '\n';
  return 0;
}

struct MetricsArgs {
  std::string data, users, mode = "user", weighting = "events";
};

int run_metrics(const MetricsArgs& a) {
  const ForumDataset data = load(a.data, a.users, "");
  const auto g = project(build_bipartite(data), *parse_mode(a.mode), *parse_weighting(a.weighting));
  const StructuralReport report[] = {structural_report(g)};
  std::cout << format_structural_table(report);
  return 0;
}

struct VizArgs {
  std::string data, users, mode = "user", format = "svg", out, weighting = "events";
  std::optional<double> thin_sd;
  std::uint64_t layout_seed = 42;
  std::size_t iterations = 500;
};

int run_viz(const VizArgs& a) {
  const ForumDataset data = load(a.data, a.users, "");
  const GraphFormat fmt = *parse_graph_format(a.format);
  const BipartiteNetwork b = build_bipartite(data);
  const bool need_layout = fmt == GraphFormat::svg;
  if (need_layout && b.empty()) {
    throw InputError("viz: cannot lay out an empty network");
  }
  std::string bytes;
  if (a.mode == "bipartite") {
    std::optional<LayoutResult> lay;
    if (need_layout) {
      lay = layout(b, a.layout_seed, a.iterations);
    }
    bytes = export_graph(b, lay ? &*lay : nullptr, fmt, NodeSizing::attr);
  } else {
    OneModeNetwork g = project(b, *parse_mode(a.mode), *parse_weighting(a.weighting));
    if (a.thin_sd) {
      if (*a.thin_sd < 0.0) {
        throw ConfigError("--thin-sd must be >= 0");
      }
      g = thin(g, {*a.thin_sd, true});
    }
    std::optional<LayoutResult> lay;
    if (need_layout) {
      lay = layout(g, a.layout_seed, a.iterations);
    }
    bytes = export_graph(g, lay ? &*lay : nullptr, fmt, NodeSizing::attr);
  }
  spill(a.out, bytes);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"forumnet: forum post logs to interaction networks and SNA reports"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(FORUMNET_VERSION));

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate a post log and write the dataset and overview");
  ingest_cmd->add_option("--posts", ingest.posts, "Posts CSV or dataset JSON")->required();
  ingest_cmd->add_option("--users", ingest.users, "Users CSV (user_id,profession)");
  ingest_cmd->add_option("--format", ingest.format, "Input format")->check(CLI::IsMember({"csv", "json"}));
  ingest_cmd->add_option("--out", ingest.out, "Output directory")->required();

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic forum post log");
  synth_cmd->add_option("--users", synth.cfg.user_count, "Number of users")->required();
  synth_cmd->add_option("--threads", synth.cfg.thread_count, "Number of threads")->required();
  synth_cmd->add_option("--posts", synth.cfg.post_count, "Number of posts")->required();
  synth_cmd->add_option("--alpha", synth.cfg.skew_alpha, "Preferential-attachment exponent")->required();
  synth_cmd->add_option("--seed", synth.cfg.seed, "Random seed")->required();
  synth_cmd->add_option("--forums", synth.cfg.forum_count, "Number of forums")->capture_default_str();
  synth_cmd->add_option("--moderators", synth.cfg.moderator_count, "Number of moderators")->capture_default_str();
  synth_cmd->add_option("--silent", synth.cfg.silent_initiator_count, "Number of silent initiators")
      ->capture_default_str();
  synth_cmd->add_option("--silent-threads", synth.cfg.silent_threads_each, "Threads per silent initiator")
      ->capture_default_str();
  synth_cmd->add_option("--moderator-boost", synth.cfg.moderator_boost, "Extra posts credited to moderators during attachment")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Posts CSV; users and roles CSVs are written beside it")
      ->required();

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Run the full analysis into an output directory");
  analyze_cmd->add_option("--data", analyze.data, "Posts CSV or dataset JSON")->required();
  analyze_cmd->add_option("--users", analyze.users, "Users CSV");
  analyze_cmd->add_option("--roles", analyze.roles, "Roles CSV (user_id,role)");
  analyze_cmd->add_option("--config", analyze.config, "JSON config; flags override it");
  analyze_cmd->add_option("--out", analyze.out, "Output directory")->required();
  analyze_cmd->add_option("--core-threshold", analyze.core_threshold, "Degree threshold for core members")
      ->capture_default_str();
  analyze_cmd->add_option("--thin-sd", analyze.thin_sd, "Tie cutoff in standard deviations above the mean")
      ->capture_default_str();
  analyze_cmd->add_option("--layout-seed", analyze.layout_seed, "Layout seed")->capture_default_str();
  analyze_cmd->add_option("--layout-iterations", analyze.layout_iterations, "Layout iterations")
      ->capture_default_str();
  analyze_cmd->add_option("--silent-min-threads", analyze.silent_min_threads,
                          "Minimum threads for a silent initiator")
      ->capture_default_str();
  analyze_cmd->add_option("--weighting", analyze.weighting, "Tie weights")
      ->check(CLI::IsMember({"events", "posts"}));
  analyze_cmd->add_option("--period", analyze.period, "Overview period")
      ->check(CLI::IsMember({"year", "quarter", "month"}));
  analyze_cmd->add_flag("--bipartite-norm", analyze.bipartite_norm, "Also report 2-mode normalized measures");

  MetricsArgs metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "Print the structural measures of one network");
  metrics_cmd->add_option("--data", metrics.data, "Posts CSV or dataset JSON")->required();
  metrics_cmd->add_option("--users", metrics.users, "Users CSV");
  metrics_cmd->add_option("--mode", metrics.mode, "Network")->required()->check(CLI::IsMember({"user", "thread"}));
  metrics_cmd->add_option("--weighting", metrics.weighting, "Tie weights")
      ->check(CLI::IsMember({"events", "posts"}));

  VizArgs viz;
  auto* viz_cmd = app.add_subcommand("viz", "Export one network as DOT, GraphML or SVG");
  viz_cmd->add_option("--data", viz.data, "Posts CSV or dataset JSON")->required();
  viz_cmd->add_option("--users", viz.users, "Users CSV");
  viz_cmd->add_option("--mode", viz.mode, "Network")
      ->required()
      ->check(CLI::IsMember({"user", "thread", "bipartite"}));
  viz_cmd->add_option("--format", viz.format, "Output format")
      ->required()
      ->check(CLI::IsMember({"dot", "graphml", "svg"}));
  viz_cmd->add_option("--out", viz.out, "Output file")->required();
  viz_cmd->add_option("--thin-sd", viz.thin_sd, "Thin ties below mean + k sd before export");
  viz_cmd->add_option("--layout-seed", viz.layout_seed, "Layout seed")->capture_default_str();
  viz_cmd->add_option("--iterations", viz.iterations, "Layout iterations")->capture_default_str();
  viz_cmd->add_option("--weighting", viz.weighting, "Tie weights")->check(CLI::IsMember({"events", "posts"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*ingest_cmd) {
      return run_ingest(ingest);
    }
    if (*synth_cmd) {
      return run_synth(synth);
    }
    if (*analyze_cmd) {
      return run_analyze(analyze, *analyze_cmd);
    }
    if (*metrics_cmd) {
      return run_metrics(metrics);
    }
    if (*viz_cmd) {
      return run_viz(viz);
    }
  } catch (const InputError& e) {
    std::cerr << "forumnet: input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConfigError& e) {
    std::cerr << "forumnet: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UsageError& e) {
    std::cerr << "forumnet: usage error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "forumnet: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitConfig;
}
