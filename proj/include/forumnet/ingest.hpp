#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "forumnet/timeutil.hpp"

namespace forumnet {

struct PostRecord {
  std::string post_id;
  std::string thread_id;
  std::string user_id;
  std::string forum_id;
  Timestamp timestamp{};
  bool is_thread_start = false;

  bool operator==(const PostRecord&) const = default;
};

struct UserProfile {
  std::string user_id;
  std::optional<std::string> profession;

  bool operator==(const UserProfile&) const = default;
};

struct RejectedRow {
  std::string raw;
  std::string reason;

  bool operator==(const RejectedRow&) const = default;
};

/// Digest of bytes that were actually read to build a dataset.
struct SourceDigest {
  std::string name;
  std::string sha256;
  std::size_t bytes = 0;
};

/// Validated post log. Posts are ordered by (timestamp, post_id); users are
/// ordered by user_id and cover every poster. Immutable once built.
struct ForumDataset {
  std::vector<PostRecord> posts;
  std::vector<UserProfile> users;
  std::vector<RejectedRow> rejected;
  std::vector<SourceDigest> sources; // not serialized

  /// Compares posts, users and rejected rows; sources are ignored.
  bool same_content(const ForumDataset& other) const;
};

enum class InputFormat { csv, json };

std::optional<InputFormat> parse_input_format(std::string_view name);

struct ParseOptions {
  Timestamp valid_from = std::chrono::sys_days{std::chrono::year{1990} / 1 / 1};
  std::optional<Timestamp> valid_until; // defaults to the time of parsing
};

/// Parses a posts CSV or a serialized dataset JSON. Per-row problems go to
/// `rejected`; an unreadable stream throws InputError and a bad header or
/// document shape throws SchemaError.
ForumDataset parse_posts(std::istream& source, InputFormat format, const ParseOptions& options = {});
ForumDataset parse_posts(std::string_view bytes, InputFormat format, const ParseOptions& options = {});

/// Merges a `user_id,profession` roster into the dataset. Duplicate roster
/// rows are rejected; posters absent from the roster keep an empty profile.
void attach_users(ForumDataset& data, std::string_view users_csv);

/// Reads files from disk and records their digests in `sources`.
ForumDataset load_dataset(const std::filesystem::path& posts,
                          const std::optional<std::filesystem::path>& users, InputFormat format,
                          const ParseOptions& options = {});

/// Picks the format from the extension (`.json` or anything else as CSV).
InputFormat guess_format(const std::filesystem::path& path);

std::string serialize_dataset(const ForumDataset& data);
void write_posts_csv(const ForumDataset& data, std::ostream& out);
void write_users_csv(const ForumDataset& data, std::ostream& out);

struct ActivityOverview {
  std::size_t registered_user_count = 0;
  std::size_t posting_user_count = 0;
  std::size_t thread_count = 0;
  std::size_t post_count = 0;
  std::size_t forum_count = 0;
  Period period = Period::year;
  std::map<std::string, std::size_t> posts_per_user;
  std::map<std::pair<std::string, std::string>, std::size_t> posts_per_forum_per_period;
  std::map<std::string, std::size_t> profession_breakdown; // "unknown" for no label
};

ActivityOverview activity_overview(const ForumDataset& data, Period period = Period::year);

/// Users with at least `min_posts` posts, by count descending then id.
std::vector<std::pair<std::string, std::size_t>> top_posters(const ForumDataset& data,
                                                             std::size_t min_posts);

std::string sha256_hex(std::string_view bytes);

} // namespace forumnet
