#include "forumnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "forumnet/csv.hpp"
#include "forumnet/error.hpp"

namespace forumnet {

void SynthConfig::validate() const {
  if (user_count == 0) {
    throw ConfigError("synth: user count must be positive");
  }
  if (thread_count == 0) {
    throw ConfigError("synth: thread count must be positive");
  }
  if (post_count < thread_count) {
    throw ConfigError("synth: posts must be at least the number of threads");
  }
  if (!(skew_alpha > 0.0) || !std::isfinite(skew_alpha)) {
    throw ConfigError("synth: skew alpha must be a positive number");
  }
  if (forum_count == 0) {
    throw ConfigError("synth: forum count must be positive");
  }
  if (moderator_count + silent_initiator_count > user_count) {
    throw ConfigError("synth: moderators plus silent initiators exceed users");
  }
  if (!(moderator_boost >= 0.0)) {
    throw ConfigError("synth: moderator boost must be >= 0");
  }
  if (silent_initiator_count > 0 && silent_threads_each == 0) {
    throw ConfigError("synth: silent initiators need at least one thread each");
  }
  const std::size_t silent_threads = silent_initiator_count * silent_threads_each;
  if (silent_threads > thread_count) {
    throw ConfigError("synth: silent initiators need more threads than exist");
  }
  const std::size_t shared_threads = thread_count - silent_threads;
  if (shared_threads == 0 && post_count > thread_count) {
    throw ConfigError("synth: replies need at least one thread open to other users");
  }
  if (shared_threads > 0 && silent_initiator_count == user_count) {
    throw ConfigError("synth: shared threads need at least one regular user");
  }
  if (window_end <= window_start + std::chrono::days{1}) {
    throw ConfigError("synth: time window must span more than a day");
  }
}

namespace {

class Stream {
public:
  explicit Stream(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  // modulo draw; the bias is negligible for the small ranges used here
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

private:
  std::mt19937_64 rng_;
};

std::string numbered(char prefix, std::size_t i, std::size_t count) {
  const std::size_t width = std::to_string(count).size();
  std::string digits = std::to_string(i + 1);
  return std::string(1, prefix) + std::string(width - digits.size(), '0') + digits;
}

struct DraftPost {
  std::size_t user;
  std::size_t thread;
  Timestamp time;
  bool start;
};

} // namespace

SynthOutput generate_with_truth(const SynthConfig& cfg) {
  cfg.validate();
  Stream rng(cfg.seed);
  using std::chrono::seconds;

  const std::size_t n_mod = cfg.moderator_count;
  const std::size_t n_silent = cfg.silent_initiator_count;
  auto is_moderator = [&](std::size_t u) { return u < n_mod; };
  auto is_silent = [&](std::size_t u) { return u >= n_mod && u < n_mod + n_silent; };

  // Fisher-Yates over thread indices decides which threads are silent.
  std::vector<std::size_t> thread_order(cfg.thread_count);
  std::iota(thread_order.begin(), thread_order.end(), 0);
  for (std::size_t i = thread_order.size(); i > 1; --i) {
    std::swap(thread_order[i - 1], thread_order[rng.below(i)]);
  }
  const std::size_t silent_threads = n_silent * cfg.silent_threads_each;
  std::vector<std::size_t> thread_owner(cfg.thread_count, SIZE_MAX);
  for (std::size_t k = 0; k < silent_threads; ++k) {
    thread_owner[thread_order[k]] = n_mod + k % n_silent;
  }
  std::vector<std::size_t> shared;
  for (std::size_t t = 0; t < cfg.thread_count; ++t) {
    if (thread_owner[t] == SIZE_MAX) {
      shared.push_back(t);
    }
  }

  const auto window = (cfg.window_end - cfg.window_start).count();
  const auto latest_start = window - 24 * 3600;
  constexpr std::int64_t reply_span = 60LL * 24 * 3600;
  std::vector<Timestamp> started(cfg.thread_count);
  std::vector<std::size_t> forum(cfg.thread_count);
  for (std::size_t t = 0; t < cfg.thread_count; ++t) {
    started[t] = cfg.window_start + seconds{static_cast<std::int64_t>(rng.unit() * static_cast<double>(latest_start))};
    forum[t] = rng.below(cfg.forum_count);
  }
  auto reply_time = [&](std::size_t t) {
    const std::int64_t room = std::min<std::int64_t>(reply_span, (cfg.window_end - started[t]).count() - 1);
    return started[t] + seconds{1 + static_cast<std::int64_t>(rng.unit() * static_cast<double>(room - 1))};
  };

  std::vector<std::size_t> posts_by(cfg.user_count, 0);
  std::vector<double> weight(cfg.user_count, 0.0);
  auto refresh = [&](std::size_t u) {
    weight[u] = is_silent(u) ? 0.0
                             : std::pow(static_cast<double>(posts_by[u] + 1) +
                                            (is_moderator(u) ? cfg.moderator_boost : 0.0),
                                        cfg.skew_alpha);
  };
  for (std::size_t u = 0; u < cfg.user_count; ++u) {
    refresh(u);
  }
  auto attach = [&]() {
    double total = 0.0;
    for (const double w : weight) {
      total += w;
    }
    double r = rng.unit() * total;
    std::size_t last = 0;
    for (std::size_t u = 0; u < weight.size(); ++u) {
      if (weight[u] <= 0.0) {
        continue;
      }
      last = u;
      if (r < weight[u]) {
        return u;
      }
      r -= weight[u];
    }
    return last;
  };

  std::vector<DraftPost> drafts;
  drafts.reserve(cfg.post_count);
  for (std::size_t t = 0; t < cfg.thread_count; ++t) {
    const std::size_t owner = thread_owner[t] != SIZE_MAX ? thread_owner[t] : attach();
    drafts.push_back({owner, t, started[t], true});
    ++posts_by[owner];
    refresh(owner);
  }
  std::size_t budget = cfg.post_count - cfg.thread_count;
  // every regular user posts at least once while the budget allows
  for (std::size_t u = 0; u < cfg.user_count && budget > 0 && !shared.empty(); ++u) {
    if (is_silent(u) || posts_by[u] > 0) {
      continue;
    }
    const std::size_t t = shared[rng.below(shared.size())];
    drafts.push_back({u, t, reply_time(t), false});
    ++posts_by[u];
    refresh(u);
    --budget;
  }
  for (; budget > 0; --budget) {
    const std::size_t u = attach();
    const std::size_t t = shared[rng.below(shared.size())];
    drafts.push_back({u, t, reply_time(t), false});
    ++posts_by[u];
    refresh(u);
  }

  std::stable_sort(drafts.begin(), drafts.end(),
                   [](const DraftPost& a, const DraftPost& b) { return a.time < b.time; });

  SynthOutput out;
  auto& posts = out.data.posts;
  posts.reserve(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    const auto& d = drafts[i];
    posts.push_back({numbered('p', i, drafts.size()), numbered('t', d.thread, cfg.thread_count),
                     numbered('u', d.user, cfg.user_count), numbered('f', forum[d.thread], cfg.forum_count),
                     d.time, d.start});
  }

  // profession mix of the registered population the generator stands in for
  static constexpr std::pair<const char*, double> kProfessions[] = {
      {"General Practice", 7632.0}, {"Nursing", 775.0},       {"Cardiology", 125.0},
      {"General Medicine", 122.0},  {"Other", 1402.0}};
  double mix_total = 0.0;
  for (const auto& p : kProfessions) {
    mix_total += p.second;
  }
  for (std::size_t u = 0; u < cfg.user_count; ++u) {
    double r = rng.unit() * mix_total;
    const char* label = kProfessions[std::size(kProfessions) - 1].first;
    for (const auto& [name, share] : kProfessions) {
      if (r < share) {
        label = name;
        break;
      }
      r -= share;
    }
    out.data.users.push_back({numbered('u', u, cfg.user_count), std::string(label)});
    if (is_moderator(u)) {
      out.roles.emplace(out.data.users.back().user_id, Role::moderator);
    }
    if (is_silent(u)) {
      out.silent_initiators.push_back(out.data.users.back().user_id);
    }
  }
  return out;
}

ForumDataset generate(const SynthConfig& cfg) { return generate_with_truth(cfg).data; }

void write_roles_csv(const std::map<std::string, Role>& roles, std::ostream& out) {
  out << "user_id,role\n";
  for (const auto& [id, role] : roles) {
    out << csv::escape(id) << ',' << to_string(role) << '\n';
  }
}

std::map<std::string, Role> parse_roles_csv(std::string_view text) {
  auto rows = csv::read_all(text);
  if (rows.empty() || rows.front().fields != std::vector<std::string>{"user_id", "role"}) {
    throw SchemaError("roles CSV: header must be user_id,role");
  }
  std::map<std::string, Role> roles;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.raw.empty() && r.fields.size() == 1) {
      continue;
    }
    if (!r.well_formed || r.fields.size() != 2) {
      throw InputError("roles CSV: malformed row '" + r.raw + "'");
    }
    const auto role = parse_role(r.fields[1]);
    if (!role) {
      throw InputError("roles CSV: unknown role '" + r.fields[1] + "'");
    }
    roles[r.fields[0]] = *role;
  }
  return roles;
}

} // namespace forumnet
