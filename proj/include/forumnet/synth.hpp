#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "forumnet/centrality.hpp"
#include "forumnet/ingest.hpp"

namespace forumnet {

struct SynthConfig {
  std::size_t user_count = 621;
  std::size_t thread_count = 723;
  std::size_t post_count = 7089;
  double skew_alpha = 1.5;
  std::size_t forum_count = 40;
  std::size_t moderator_count = 3;
  std::size_t silent_initiator_count = 1;
  std::size_t silent_threads_each = 21; // threads started by every silent initiator
  double moderator_boost = 5.0;         // head start, in posts, for moderators
  std::uint64_t seed = 1;
  Timestamp window_start = std::chrono::sys_days{std::chrono::year{2009} / 1 / 1};
  Timestamp window_end = std::chrono::sys_days{std::chrono::year{2015} / 1 / 1};

  /// Throws ConfigError when the configuration cannot be generated.
  void validate() const;
};

struct SynthOutput {
  ForumDataset data;
  std::map<std::string, Role> roles; // moderators only
  std::vector<std::string> silent_initiators;
};

/// Users u*, threads t*, forums f*, posts p* numbered in time order. Each
/// thread gets one starting post; every other post picks its author with
/// probability proportional to (posts so far + 1)^alpha, moderators counting
/// `moderator_boost` extra posts, and lands in a uniformly chosen shared thread.
/// Silent initiators only ever post the first message of their own threads.
SynthOutput generate_with_truth(const SynthConfig& cfg);
ForumDataset generate(const SynthConfig& cfg);

void write_roles_csv(const std::map<std::string, Role>& roles, std::ostream& out);
std::map<std::string, Role> parse_roles_csv(std::string_view text);

} // namespace forumnet
