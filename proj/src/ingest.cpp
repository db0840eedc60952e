#include "forumnet/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <openssl/evp.h>

#include "forumnet/csv.hpp"
#include "forumnet/error.hpp"
#include "json.hpp"

namespace forumnet {

using nlohmann::json;

namespace {

constexpr std::string_view kPostsHeader[] = {"post_id", "thread_id", "user_id", "forum_id",
                                             "timestamp"};
constexpr std::string_view kStartColumn = "is_thread_start";

struct Candidate {
  PostRecord post;
  std::optional<bool> start_flag;
  std::string raw;
};

Timestamp now_seconds() {
  return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

// Shared tail of CSV and JSON parsing: order, dedupe, derive thread starts.
void finalize(ForumDataset& data, std::vector<Candidate>& candidates) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.post.timestamp != b.post.timestamp) {
                       return a.post.timestamp < b.post.timestamp;
                     }
                     return a.post.post_id < b.post.post_id;
                   });

  std::unordered_set<std::string> seen;
  std::vector<Candidate> kept;
  kept.reserve(candidates.size());
  for (auto& c : candidates) {
    if (!seen.insert(c.post.post_id).second) {
      data.rejected.push_back({std::move(c.raw), "duplicate post_id"});
      continue;
    }
    kept.push_back(std::move(c));
  }

  // First flagged post of a thread is its start; unflagged threads fall back
  // to their earliest post.
  std::unordered_map<std::string, std::size_t> start_of;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i].start_flag.value_or(false)) {
      start_of.try_emplace(kept[i].post.thread_id, i);
    }
  }
  for (std::size_t i = 0; i < kept.size(); ++i) {
    start_of.try_emplace(kept[i].post.thread_id, i);
  }
  data.posts.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    kept[i].post.is_thread_start = start_of.at(kept[i].post.thread_id) == i;
    data.posts.push_back(std::move(kept[i].post));
  }

  std::set<std::string> known;
  for (const auto& u : data.users) {
    known.insert(u.user_id);
  }
  for (const auto& p : data.posts) {
    if (known.insert(p.user_id).second) {
      data.users.push_back({p.user_id, std::nullopt});
    }
  }
  std::sort(data.users.begin(), data.users.end(),
            [](const UserProfile& a, const UserProfile& b) { return a.user_id < b.user_id; });
}

std::optional<std::string> check_window(Timestamp t, const ParseOptions& options, Timestamp until) {
  if (t < options.valid_from || t > until) {
    return "timestamp out of range";
  }
  return std::nullopt;
}

ForumDataset parse_csv(std::string_view text, const ParseOptions& options) {
  const Timestamp until = options.valid_until.value_or(now_seconds());
  csv::Reader reader(text);
  auto header = reader.next();
  if (!header || !header->well_formed) {
    throw SchemaError("posts CSV: missing header");
  }
  const auto& cols = header->fields;
  const bool has_start = cols.size() == 6 && cols[5] == kStartColumn;
  if (!(cols.size() == 5 || has_start) ||
      !std::equal(std::begin(kPostsHeader), std::end(kPostsHeader), cols.begin())) {
    throw SchemaError("posts CSV: header must be post_id,thread_id,user_id,forum_id,timestamp"
                      "[,is_thread_start], got '" +
                      header->raw + "'");
  }
  const std::size_t width = cols.size();

  ForumDataset data;
  std::vector<Candidate> candidates;
  while (auto rec = reader.next()) {
    if (rec->raw.empty() && rec->fields.size() == 1) {
      continue; // blank line
    }
    auto reject = [&](std::string reason) {
      data.rejected.push_back({rec->raw, std::move(reason)});
    };
    if (!rec->well_formed) {
      reject("malformed quoting");
      continue;
    }
    auto& f = rec->fields;
    if (f.size() != width) {
      reject("wrong field count");
      continue;
    }
    if (f[0].empty() || f[1].empty() || f[2].empty() || f[3].empty()) {
      reject("missing field");
      continue;
    }
    const auto ts = parse_iso8601(f[4]);
    if (!ts) {
      reject("bad timestamp");
      continue;
    }
    if (auto why = check_window(*ts, options, until)) {
      reject(*why);
      continue;
    }
    std::optional<bool> flag;
    if (has_start) {
      if (f[5] == "true") {
        flag = true;
      } else if (f[5] == "false") {
        flag = false;
      } else if (!f[5].empty()) {
        reject("bad is_thread_start");
        continue;
      }
    }
    candidates.push_back(
        {{std::move(f[0]), std::move(f[1]), std::move(f[2]), std::move(f[3]), *ts, false},
         flag,
         rec->raw});
  }
  finalize(data, candidates);
  return data;
}

ForumDataset parse_json(std::string_view text, const ParseOptions& options) {
  const Timestamp until = options.valid_until.value_or(now_seconds());
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("dataset JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("posts") || !doc["posts"].is_array()) {
    throw SchemaError("dataset JSON: expected an object with a 'posts' array");
  }

  ForumDataset data;
  if (doc.contains("rejected")) {
    if (!doc["rejected"].is_array()) {
      throw SchemaError("dataset JSON: 'rejected' must be an array");
    }
    for (const auto& r : doc["rejected"]) {
      if (!r.is_object() || !r.contains("raw") || !r.contains("reason") || !r["raw"].is_string() ||
          !r["reason"].is_string()) {
        throw SchemaError("dataset JSON: malformed rejected entry");
      }
      data.rejected.push_back({r["raw"].get<std::string>(), r["reason"].get<std::string>()});
    }
  }
  if (doc.contains("users")) {
    if (!doc["users"].is_array()) {
      throw SchemaError("dataset JSON: 'users' must be an array");
    }
    std::set<std::string> seen;
    for (const auto& u : doc["users"]) {
      if (!u.is_object() || !u.contains("user_id") || !u["user_id"].is_string() ||
          u["user_id"].get_ref<const std::string&>().empty()) {
        data.rejected.push_back({u.dump(), "missing field"});
        continue;
      }
      UserProfile profile{u["user_id"].get<std::string>(), std::nullopt};
      if (u.contains("profession") && u["profession"].is_string()) {
        profile.profession = u["profession"].get<std::string>();
      }
      if (!seen.insert(profile.user_id).second) {
        data.rejected.push_back({u.dump(), "duplicate user_id"});
        continue;
      }
      data.users.push_back(std::move(profile));
    }
  }

  std::vector<Candidate> candidates;
  for (const auto& p : doc["posts"]) {
    const std::string raw = p.dump();
    auto reject = [&](std::string reason) { data.rejected.push_back({raw, std::move(reason)}); };
    if (!p.is_object()) {
      reject("wrong field count");
      continue;
    }
    auto str = [&](const char* key) -> std::optional<std::string> {
      if (!p.contains(key) || !p[key].is_string() || p[key].get_ref<const std::string&>().empty()) {
        return std::nullopt;
      }
      return p[key].get<std::string>();
    };
    auto post_id = str("post_id");
    auto thread_id = str("thread_id");
    auto user_id = str("user_id");
    auto forum_id = str("forum_id");
    if (!post_id || !thread_id || !user_id || !forum_id) {
      reject("missing field");
      continue;
    }
    const auto stamp = str("timestamp");
    const auto ts = stamp ? parse_iso8601(*stamp) : std::nullopt;
    if (!ts) {
      reject("bad timestamp");
      continue;
    }
    if (auto why = check_window(*ts, options, until)) {
      reject(*why);
      continue;
    }
    std::optional<bool> flag;
    if (p.contains("is_thread_start")) {
      if (!p["is_thread_start"].is_boolean()) {
        reject("bad is_thread_start");
        continue;
      }
      flag = p["is_thread_start"].get<bool>();
    }
    candidates.push_back({{*post_id, *thread_id, *user_id, *forum_id, *ts, false}, flag, raw});
  }
  finalize(data, candidates);
  return data;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open " + path.string());
  }
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw InputError("cannot read " + path.string());
  }
  return bytes;
}

} // namespace

bool ForumDataset::same_content(const ForumDataset& other) const {
  return posts == other.posts && users == other.users && rejected == other.rejected;
}

std::optional<InputFormat> parse_input_format(std::string_view name) {
  if (name == "csv") {
    return InputFormat::csv;
  }
  if (name == "json") {
    return InputFormat::json;
  }
  return std::nullopt;
}

ForumDataset parse_posts(std::string_view bytes, InputFormat format, const ParseOptions& options) {
  return format == InputFormat::csv ? parse_csv(bytes, options) : parse_json(bytes, options);
}

ForumDataset parse_posts(std::istream& source, InputFormat format, const ParseOptions& options) {
  if (!source) {
    throw InputError("posts stream is not readable");
  }
  std::ostringstream buf;
  buf << source.rdbuf();
  if (source.bad()) {
    throw InputError("failed reading posts stream");
  }
  return parse_posts(std::string_view(buf.str()), format, options);
}

void attach_users(ForumDataset& data, std::string_view users_csv) {
  csv::Reader reader(users_csv);
  auto header = reader.next();
  if (!header || !header->well_formed || header->fields.size() != 2 ||
      header->fields[0] != "user_id" || header->fields[1] != "profession") {
    throw SchemaError("users CSV: header must be user_id,profession");
  }
  std::map<std::string, UserProfile> roster;
  while (auto rec = reader.next()) {
    if (rec->raw.empty() && rec->fields.size() == 1) {
      continue;
    }
    if (!rec->well_formed) {
      data.rejected.push_back({rec->raw, "malformed quoting"});
      continue;
    }
    if (rec->fields.size() != 2) {
      data.rejected.push_back({rec->raw, "wrong field count"});
      continue;
    }
    if (rec->fields[0].empty()) {
      data.rejected.push_back({rec->raw, "missing field"});
      continue;
    }
    UserProfile profile{rec->fields[0], std::nullopt};
    if (!rec->fields[1].empty()) {
      profile.profession = rec->fields[1];
    }
    if (!roster.try_emplace(profile.user_id, profile).second) {
      data.rejected.push_back({rec->raw, "duplicate user_id"});
    }
  }
  for (const auto& u : data.users) {
    roster.try_emplace(u.user_id, u);
  }
  data.users.clear();
  for (auto& [id, profile] : roster) {
    data.users.push_back(std::move(profile));
  }
}

InputFormat guess_format(const std::filesystem::path& path) {
  return path.extension() == ".json" ? InputFormat::json : InputFormat::csv;
}

ForumDataset load_dataset(const std::filesystem::path& posts,
                          const std::optional<std::filesystem::path>& users, InputFormat format,
                          const ParseOptions& options) {
  const std::string post_bytes = read_file(posts);
  ForumDataset data = parse_posts(std::string_view(post_bytes), format, options);
  data.sources.push_back({posts.filename().string(), sha256_hex(post_bytes), post_bytes.size()});
  if (users) {
    const std::string user_bytes = read_file(*users);
    attach_users(data, user_bytes);
    data.sources.push_back({users->filename().string(), sha256_hex(user_bytes), user_bytes.size()});
  }
  return data;
}

std::string serialize_dataset(const ForumDataset& data) {
  json doc;
  doc["posts"] = json::array();
  for (const auto& p : data.posts) {
    doc["posts"].push_back({{"post_id", p.post_id},
                            {"thread_id", p.thread_id},
                            {"user_id", p.user_id},
                            {"forum_id", p.forum_id},
                            {"timestamp", format_iso8601(p.timestamp)},
                            {"is_thread_start", p.is_thread_start}});
  }
  doc["users"] = json::array();
  for (const auto& u : data.users) {
    doc["users"].push_back(
        {{"user_id", u.user_id}, {"profession", u.profession ? json(*u.profession) : json()}});
  }
  doc["rejected"] = json::array();
  for (const auto& r : data.rejected) {
    doc["rejected"].push_back({{"raw", r.raw}, {"reason", r.reason}});
  }
  return doc.dump(2) + "\n";
}

void write_posts_csv(const ForumDataset& data, std::ostream& out) {
  out << "post_id,thread_id,user_id,forum_id,timestamp,is_thread_start\n";
  for (const auto& p : data.posts) {
    out << csv::join({p.post_id, p.thread_id, p.user_id, p.forum_id, format_iso8601(p.timestamp),
                      p.is_thread_start ? "true" : "false"})
        << '\n';
  }
}

void write_users_csv(const ForumDataset& data, std::ostream& out) {
  out << "user_id,profession\n";
  for (const auto& u : data.users) {
    out << csv::join({u.user_id, u.profession.value_or("")}) << '\n';
  }
}

ActivityOverview activity_overview(const ForumDataset& data, Period period) {
  ActivityOverview ov;
  ov.period = period;
  std::set<std::string> threads;
  std::set<std::string> forums;
  for (const auto& p : data.posts) {
    ++ov.posts_per_user[p.user_id];
    ++ov.posts_per_forum_per_period[{p.forum_id, period_label(p.timestamp, period)}];
    threads.insert(p.thread_id);
    forums.insert(p.forum_id);
  }
  ov.post_count = data.posts.size();
  ov.posting_user_count = ov.posts_per_user.size();
  ov.thread_count = threads.size();
  ov.forum_count = forums.size();
  ov.registered_user_count = std::max(data.users.size(), ov.posting_user_count);
  for (const auto& u : data.users) {
    ++ov.profession_breakdown[u.profession.value_or("unknown")];
  }
  return ov;
}

std::vector<std::pair<std::string, std::size_t>> top_posters(const ForumDataset& data,
                                                             std::size_t min_posts) {
  std::map<std::string, std::size_t> counts;
  for (const auto& p : data.posts) {
    ++counts[p.user_id];
  }
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& [user, n] : counts) {
    if (n >= min_posts) {
      out.emplace_back(user, n);
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

} // namespace forumnet
