#pragma once

#include <string>
#include <utility>
#include <vector>

#include "forumnet/ingest.hpp"

namespace fixtures {

inline forumnet::ParseOptions fixed_window() {
  forumnet::ParseOptions o;
  o.valid_until = std::chrono::sys_days{std::chrono::year{2030} / 1 / 1};
  return o;
}

/// One post per (user, thread) pair, one minute apart, in forum f1.
inline forumnet::ForumDataset posts_of(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::string csv = "post_id,thread_id,user_id,forum_id,timestamp\n";
  int i = 0;
  for (const auto& [user, thread] : pairs) {
    char stamp[32];
    std::snprintf(stamp, sizeof stamp, "2012-03-04T%02d:%02d:00Z", i / 60, i % 60);
    csv += "p" + std::to_string(1000 + i) + "," + thread + "," + user + ",f1," + stamp + "\n";
    ++i;
  }
  return forumnet::parse_posts(std::string_view(csv), forumnet::InputFormat::csv, fixed_window());
}

} // namespace fixtures
