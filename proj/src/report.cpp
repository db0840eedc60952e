#include "forumnet/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "forumnet/csv.hpp"
#include "forumnet/error.hpp"

namespace forumnet {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Figure f) {
  switch (f) {
  case Figure::bipartite:
    return "bipartite";
  case Figure::user:
    return "user";
  case Figure::thread:
    return "thread";
  }
  return "";
}

std::optional<Figure> parse_figure(std::string_view name) {
  if (name == "bipartite") {
    return Figure::bipartite;
  }
  if (name == "user") {
    return Figure::user;
  }
  if (name == "thread") {
    return Figure::thread;
  }
  return std::nullopt;
}

namespace {

std::string_view period_name(Period p) {
  switch (p) {
  case Period::year:
    return "year";
  case Period::quarter:
    return "quarter";
  case Period::month:
    return "month";
  }
  return "year";
}

} // namespace

void PipelineConfig::validate() const {
  if (!(core_threshold >= 0.0 && core_threshold <= 1.0)) {
    throw ConfigError("core-threshold must lie in [0, 1]");
  }
  if (!(thin_sd >= 0.0) || !std::isfinite(thin_sd)) {
    throw ConfigError("thin-sd must be a finite number >= 0");
  }
  if (layout_iterations == 0) {
    throw ConfigError("layout-iterations must be >= 1");
  }
}

json PipelineConfig::to_json() const {
  json figs = json::array();
  for (const auto f : figures) {
    figs.push_back(std::string(to_string(f)));
  }
  json fmts = json::array();
  for (const auto f : formats) {
    fmts.push_back(std::string(extension(f)));
  }
  return {{"core-threshold", core_threshold},
          {"thin-sd", thin_sd},
          {"thin-sd-convention", "sample"},
          {"layout-seed", layout_seed},
          {"layout-iterations", layout_iterations},
          {"weighting", std::string(forumnet::to_string(weighting))},
          {"bipartite-norm", bipartite_norm},
          {"silent-min-threads", silent_min_threads},
          {"top-posters-min", top_posters_min},
          {"period", std::string(period_name(period))},
          {"figures", figs},
          {"formats", fmts}};
}

PipelineConfig PipelineConfig::from_json(const json& doc, PipelineConfig cfg) {
  if (!doc.is_object()) {
    throw ConfigError("config file must hold a JSON object");
  }
  auto number = [](const json& v, const std::string& key) {
    if (!v.is_number()) {
      throw ConfigError("config: '" + key + "' must be a number");
    }
    return v.get<double>();
  };
  auto count = [](const json& v, const std::string& key) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw ConfigError("config: '" + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  };
  auto text = [](const json& v, const std::string& key) {
    if (!v.is_string()) {
      throw ConfigError("config: '" + key + "' must be a string");
    }
    return v.get<std::string>();
  };
  for (const auto& [key, v] : doc.items()) {
    if (key == "core-threshold") {
      cfg.core_threshold = number(v, key);
    } else if (key == "thin-sd") {
      cfg.thin_sd = number(v, key);
    } else if (key == "thin-sd-convention") {
      if (text(v, key) != "sample") {
        throw ConfigError("config: only the sample thin-sd-convention is supported");
      }
    } else if (key == "layout-seed") {
      cfg.layout_seed = count(v, key);
    } else if (key == "layout-iterations") {
      cfg.layout_iterations = count(v, key);
    } else if (key == "weighting") {
      const auto w = parse_weighting(text(v, key));
      if (!w) {
        throw ConfigError("config: weighting must be events or posts");
      }
      cfg.weighting = *w;
    } else if (key == "bipartite-norm") {
      if (!v.is_boolean()) {
        throw ConfigError("config: 'bipartite-norm' must be a boolean");
      }
      cfg.bipartite_norm = v.get<bool>();
    } else if (key == "silent-min-threads") {
      cfg.silent_min_threads = count(v, key);
    } else if (key == "top-posters-min") {
      cfg.top_posters_min = count(v, key);
    } else if (key == "period") {
      const auto p = parse_period(text(v, key));
      if (!p) {
        throw ConfigError("config: period must be year, quarter or month");
      }
      cfg.period = *p;
    } else if (key == "figures" || key == "formats") {
      if (!v.is_array()) {
        throw ConfigError("config: '" + key + "' must be an array");
      }
      if (key == "figures") {
        cfg.figures.clear();
        for (const auto& item : v) {
          const auto f = parse_figure(text(item, key));
          if (!f) {
            throw ConfigError("config: unknown figure '" + item.dump() + "'");
          }
          cfg.figures.push_back(*f);
        }
      } else {
        cfg.formats.clear();
        for (const auto& item : v) {
          const auto f = parse_graph_format(text(item, key));
          if (!f) {
            throw ConfigError("config: unknown format '" + item.dump() + "'");
          }
          cfg.formats.push_back(*f);
        }
      }
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

PipelineConfig PipelineConfig::from_json(const json& doc) { return from_json(doc, PipelineConfig{}); }

json Provenance::to_json() const {
  json in = json::array();
  for (const auto& s : inputs) {
    in.push_back({{"name", s.name}, {"sha256", s.sha256}, {"bytes", s.bytes}});
  }
  return {{"tool", tool},
          {"version", version},
          {"config", config},
          {"inputs", in},
          {"dataset_sha256", dataset_sha256}};
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

json to_json(const ActivityOverview& ov) {
  json per_user = json::object();
  for (const auto& [user, n] : ov.posts_per_user) {
    per_user[user] = n;
  }
  json cells = json::array();
  for (const auto& [key, n] : ov.posts_per_forum_per_period) {
    cells.push_back({{"forum_id", key.first}, {"period", key.second}, {"posts", n}});
  }
  json professions = json::object();
  for (const auto& [label, n] : ov.profession_breakdown) {
    professions[label] = n;
  }
  return {{"registered_user_count", ov.registered_user_count},
          {"posting_user_count", ov.posting_user_count},
          {"thread_count", ov.thread_count},
          {"post_count", ov.post_count},
          {"forum_count", ov.forum_count},
          {"period", std::string(period_name(ov.period))},
          {"posts_per_user", per_user},
          {"posts_per_forum_per_period", cells},
          {"profession_breakdown", professions}};
}

json to_json(const StructuralReport& r) {
  return {{"mode", std::string(to_string(r.mode))},
          {"n", r.n},
          {"m", r.m},
          {"density", r.density},
          {"centralization", r.centralization},
          {"diameter", r.diameter},
          {"avg_path_length", r.avg_path_length},
          {"component_count", r.component_count},
          {"largest_component_size", r.largest_component_size},
          {"isolate_count", r.isolate_count}};
}

json to_json(const Summary& s) {
  return {{"min", s.min},       {"q1", s.q1},   {"median", s.median},
          {"q3", s.q3},         {"max", s.max}, {"mean", s.mean}};
}

void write_centrality_csv(const CentralityTable& table, std::ostream& out) {
  out << "node_id,degree,closeness,betweenness\n";
  for (const auto& r : table.rows) {
    out << csv::escape(r.node_id) << ',' << format_double(r.degree) << ','
        << format_double(r.closeness) << ',' << format_double(r.betweenness) << '\n';
  }
}

void write_histogram_csv(const Histogram& h, std::ostream& out) {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out << format_double(h.bin_lo(i)) << ',' << format_double(h.bin_hi(i)) << ',' << h.counts[i]
        << '\n';
  }
}

namespace {

struct Networks {
  BipartiteNetwork bipartite;
  OneModeNetwork users;
  OneModeNetwork threads;
};

Networks build_networks(const ForumDataset& data, Weighting weighting) {
  Networks n;
  n.bipartite = build_bipartite(data);
  n.users = project(n.bipartite, Mode::user, weighting);
  n.threads = project(n.bipartite, Mode::thread, weighting);
  return n;
}

AnalysisBundle analyze_networks(const ForumDataset& data, const Networks& nets,
                                const PipelineConfig& config,
                                const std::map<std::string, Role>* roles) {
  AnalysisBundle b;
  b.provenance.config = config.to_json();
  b.provenance.inputs = data.sources;
  b.provenance.dataset_sha256 = sha256_hex(serialize_dataset(data));
  b.overview = activity_overview(data, config.period);
  b.top_posters = top_posters(data, config.top_posters_min);
  b.user_report = structural_report(nets.users);
  b.thread_report = structural_report(nets.threads);
  b.user_centrality = centrality_table(nets.users);
  b.thread_centrality = centrality_table(nets.threads);
  b.core = core_set(b.user_centrality, config.core_threshold, roles);
  b.silent = silent_initiators(nets.bipartite, nets.users, config.silent_min_threads);
  if (config.bipartite_norm) {
    b.bipartite = BipartiteSummary{bipartite_density(nets.bipartite),
                                   bipartite_degree_centrality(nets.bipartite, Mode::user),
                                   bipartite_degree_centrality(nets.bipartite, Mode::thread)};
  }
  return b;
}

class OutputDir {
public:
  explicit OutputDir(fs::path root) : root_(std::move(root)) {}

  void write(const fs::path& rel, const std::string& bytes) {
    const fs::path full = root_ / rel;
    fs::create_directories(full.parent_path());
    std::ofstream out(full, std::ios::binary);
    out << bytes;
    out.close();
    if (!out) {
      throw InputError("cannot write " + full.string());
    }
    written_.push_back(rel);
  }

  void write_json(const fs::path& rel, const json& doc) { write(rel, doc.dump(2) + "\n"); }

  std::vector<fs::path> written() const {
    auto out = written_;
    std::sort(out.begin(), out.end());
    return out;
  }

private:
  fs::path root_;
  std::vector<fs::path> written_;
};

json with_provenance(json doc, const Provenance& p) {
  doc["provenance"] = p.to_json();
  return doc;
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

void write_bundle(const AnalysisBundle& b, const Networks& nets, const PipelineConfig& config,
                  OutputDir& out) {
  const Provenance& prov = b.provenance;
  json overview = to_json(b.overview);
  json top = json::array();
  for (const auto& [user, n] : b.top_posters) {
    top.push_back({{"user_id", user}, {"posts", n}});
  }
  overview["top_posters"] = {{"min_posts", config.top_posters_min}, {"users", top}};
  out.write_json("overview.json", with_provenance(overview, prov));

  for (const auto* report : {&b.user_report, &b.thread_report}) {
    json doc = to_json(*report);
    if (b.bipartite) {
      doc["bipartite_density"] = b.bipartite->density;
    }
    out.write_json(std::string(to_string(report->mode)) + "_structural.json", with_provenance(doc, prov));
  }
  const StructuralReport both[] = {b.user_report, b.thread_report};
  out.write("structural_table.txt", format_structural_table(both));

  for (const auto* table : {&b.user_centrality, &b.thread_centrality}) {
    const std::string mode(to_string(table->mode));
    out.write(mode + "_centrality.csv", render([&](std::ostream& s) { write_centrality_csv(*table, s); }));
    json summaries = json::object();
    for (const Measure m : kMeasures) {
      summaries[std::string(to_string(m))] = to_json(table->summary(m));
      out.write(fs::path("histograms") / (mode + "_" + std::string(to_string(m)) + ".csv"),
                render([&](std::ostream& s) { write_histogram_csv(table->hist(m), s); }));
    }
    out.write_json(mode + "_centrality_summary.json",
                   with_provenance({{"mode", mode}, {"n", table->rows.size()}, {"summaries", summaries}}, prov));
  }

  json members = json::array();
  for (const auto& id : b.core.members) {
    const auto row = std::find_if(b.user_centrality.rows.begin(), b.user_centrality.rows.end(),
                                  [&](const CentralityRow& r) { return r.node_id == id; });
    members.push_back({{"node_id", id},
                       {"role", std::string(to_string(b.core.roles.at(id)))},
                       {"degree", row->degree}});
  }
  json silent = json::array();
  for (const auto& s : b.silent) {
    silent.push_back({{"user_id", s.user_id}, {"thread_count", s.thread_count}});
  }
  out.write_json("core.json", with_provenance({{"mode", std::string(to_string(b.core.mode))},
                                               {"threshold", b.core.threshold},
                                               {"members", members},
                                               {"silent_initiators",
                                                {{"min_threads", config.silent_min_threads},
                                                 {"users", silent}}}},
                                              prov));

  for (const auto* g : {&nets.users, &nets.threads}) {
    const std::string mode(to_string(g->mode()));
    std::ostringstream edges;
    std::ostringstream nodes;
    write_edge_list(*g, edges, nodes);
    out.write(mode + "_edges.csv", edges.str());
    out.write(mode + "_nodes.csv", nodes.str());
  }

  if (b.bipartite) {
    std::ostringstream s;
    s << "node_id,mode,degree\n";
    for (std::size_t i = 0; i < nets.bipartite.user_count(); ++i) {
      s << csv::escape(nets.bipartite.user_nodes()[i]) << ",user," << format_double(b.bipartite->user_degree[i]) << '\n';
    }
    for (std::size_t i = 0; i < nets.bipartite.thread_count(); ++i) {
      s << csv::escape(nets.bipartite.thread_nodes()[i]) << ",thread,"
        << format_double(b.bipartite->thread_degree[i]) << '\n';
    }
    out.write("bipartite_degree.csv", s.str());
  }

  if (nets.bipartite.empty()) {
    return; // no figures for an empty dataset
  }
  json thinning = json::object();
  const ThinningSpec spec{config.thin_sd, true};
  auto emit = [&](const std::string& name, const LayoutResult& lay, auto&& draw) {
    out.write(fs::path("figures") / (name + "_positions.csv"),
              render([&](std::ostream& s) { write_positions_csv(lay, s); }));
    for (const auto fmt : config.formats) {
      out.write(fs::path("figures") / (name + "." + std::string(extension(fmt))), draw(fmt));
    }
  };
  for (const auto fig : config.figures) {
    if (fig == Figure::bipartite) {
      const auto lay = layout(nets.bipartite, config.layout_seed, config.layout_iterations);
      emit("bipartite", lay, [&](GraphFormat f) {
        return export_graph(nets.bipartite, &lay, f, NodeSizing::attr);
      });
      continue;
    }
    const OneModeNetwork& g = fig == Figure::user ? nets.users : nets.threads;
    const ThinningStats stats = thinning_stats(g, spec);
    const OneModeNetwork shown = thin(g, spec);
    json entry = {{"edges_before", stats.edges_before},
                  {"edges_after", stats.edges_after},
                  {"mean", stats.mean},
                  {"sd", stats.sd},
                  {"sd_convention", "sample"},
                  {"k_sd", spec.k_sd},
                  {"strict", spec.strict}};
    entry["cutoff"] = stats.cutoff ? json(*stats.cutoff) : json();
    thinning[std::string(to_string(fig))] = entry;
    const auto lay = layout(shown, config.layout_seed, config.layout_iterations);
    emit(std::string(to_string(fig)), lay,
         [&](GraphFormat f) { return export_graph(shown, &lay, f, NodeSizing::attr); });
  }
  if (!thinning.empty()) {
    out.write_json(fs::path("figures") / "thinning.json", with_provenance({{"networks", thinning}}, prov));
  }
}

} // namespace

AnalysisBundle analyze(const ForumDataset& data, const PipelineConfig& config,
                       const std::map<std::string, Role>* roles) {
  config.validate();
  const Networks nets = build_networks(data, config.weighting);
  return analyze_networks(data, nets, config, roles);
}

AnalysisBundle run_pipeline(const ForumDataset& data, const PipelineConfig& config,
                            const fs::path& out_dir, const std::map<std::string, Role>* roles) {
  config.validate();
  fs::path target = fs::absolute(out_dir).lexically_normal();
  if (target.filename().empty()) {
    target = target.parent_path();
  }
  fs::path staging = target;
  staging += ".partial";
  std::error_code ec;
  fs::remove_all(staging, ec);
  try {
    fs::create_directories(staging);
    const Networks nets = build_networks(data, config.weighting);
    AnalysisBundle bundle = analyze_networks(data, nets, config, roles);
    OutputDir out(staging);
    write_bundle(bundle, nets, config, out);
    bundle.artifacts = out.written();
    fs::remove_all(target);
    fs::rename(staging, target);
    return bundle;
  } catch (const fs::filesystem_error& e) {
    fs::remove_all(staging, ec);
    throw InputError(std::string("output: ") + e.what());
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
}

} // namespace forumnet
