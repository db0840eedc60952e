#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "forumnet/graph.hpp"

namespace forumnet {

/// Network-level measures of a 1-mode network. Path measures cover the
/// largest connected component only; ties go to the component holding the
/// lowest node index.
struct StructuralReport {
  Mode mode = Mode::user;
  std::size_t n = 0;
  std::size_t m = 0;
  double density = 0.0;
  double centralization = 0.0;
  std::size_t diameter = 0;
  double avg_path_length = 0.0;
  std::size_t component_count = 0;
  std::size_t largest_component_size = 0;
  std::size_t isolate_count = 0;
};

struct Components {
  std::vector<std::uint32_t> label; // per node
  std::vector<std::size_t> sizes;   // per label; labels ordered by lowest member
  std::uint32_t largest = 0;
};

Components connected_components(const OneModeNetwork& g);

/// 2m / (n(n-1)); 0 for n <= 1.
double density(const OneModeNetwork& g);

/// Freeman degree centralization, sum(d_max - d_i) / ((n-1)(n-2)); 0 for n < 3.
double degree_centralization(const OneModeNetwork& g);

std::size_t diameter(const OneModeNetwork& g);
double avg_path_length(const OneModeNetwork& g);

StructuralReport structural_report(const OneModeNetwork& g);

/// Incidences over n_user * n_thread; the 2-mode normalized density.
double bipartite_density(const BipartiteNetwork& b);

/// Measure rows by mode columns, two decimals.
std::string format_structural_table(std::span<const StructuralReport> reports);

} // namespace forumnet
