#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "forumnet/csv.hpp"
#include "forumnet/error.hpp"
#include "forumnet/ingest.hpp"

using namespace forumnet;

namespace {

constexpr std::string_view kHeader = "post_id,thread_id,user_id,forum_id,timestamp\n";

ForumDataset parse_csv(std::string_view text) {
  return parse_posts(text, InputFormat::csv, fixtures::fixed_window());
}

struct RandomLog {
  std::string csv;
  std::vector<std::vector<std::string>> rows;
};

// rows of (post, thread, user, forum, timestamp) with uniform random fields
RandomLog random_log(std::uint64_t seed, int posts, int users, int threads, int forums, int years) {
  std::mt19937_64 rng(seed);
  RandomLog log;
  log.csv = std::string(kHeader);
  for (int i = 0; i < posts; ++i) {
    char stamp[32];
    std::snprintf(stamp, sizeof stamp, "%04d-%02d-%02dT%02d:%02d:00Z", 2010 + static_cast<int>(rng() % years),
                  1 + static_cast<int>(rng() % 12), 1 + static_cast<int>(rng() % 28),
                  static_cast<int>(rng() % 24), static_cast<int>(rng() % 60));
    std::vector<std::string> row = {"p" + std::to_string(i), "t" + std::to_string(rng() % threads),
                                    "u" + std::to_string(rng() % users), "f" + std::to_string(rng() % forums),
                                    stamp};
    log.csv += csv::join(row) + "\n";
    log.rows.push_back(row);
  }
  return log;
}

} // namespace

TEST_CASE("four valid rows are all retained") {
  const auto data = parse_csv(std::string(kHeader) +
                              "p1,t1,u1,f1,2012-01-01T10:00:00Z\n"
                              "p2,t1,u2,f1,2012-01-01T11:00:00Z\n"
                              "p3,t2,u2,f2,2012-01-02T09:00:00Z\n"
                              "p4,t2,u3,f2,2012-01-02T10:00:00Z\n");
  CHECK(data.posts.size() == 4);
  CHECK(data.rejected.empty());
  CHECK(data.users.size() == 3);
  CHECK(data.posts[0].is_thread_start);
  CHECK_FALSE(data.posts[1].is_thread_start);
  CHECK(data.posts[2].is_thread_start);
}

TEST_CASE("duplicate post_id keeps the first row") {
  const auto data = parse_csv(std::string(kHeader) +
                              "p1,t1,u1,f1,2012-01-01T10:00:00Z\n"
                              "p1,t1,u2,f1,2012-01-01T11:00:00Z\n");
  REQUIRE(data.posts.size() == 1);
  CHECK(data.posts[0].user_id == "u1");
  REQUIRE(data.rejected.size() == 1);
  CHECK(data.rejected[0].reason == "duplicate post_id");
  CHECK(data.rejected[0].raw == "p1,t1,u2,f1,2012-01-01T11:00:00Z");
}

TEST_CASE("duplicate resolution follows timestamp order, not file order") {
  const auto data = parse_csv(std::string(kHeader) +
                              "p1,t1,late,f1,2012-05-01T10:00:00Z\n"
                              "p1,t1,early,f1,2012-01-01T10:00:00Z\n");
  REQUIRE(data.posts.size() == 1);
  CHECK(data.posts[0].user_id == "early");
}

TEST_CASE("per-row faults are rejected with reasons") {
  const auto data = parse_csv(std::string(kHeader) +
                              "p1,t1,u1,f1,not-a-date\n"
                              "p2,t1,u1,f1\n"
                              "p3,,u1,f1,2012-01-01T00:00:00Z\n"
                              "p4,t1,u1,f1,1985-01-01T00:00:00Z\n"
                              "\"p5,t1,u1,f1,2012-01-01T00:00:00Z\n");
  CHECK(data.posts.empty());
  REQUIRE(data.rejected.size() == 5);
  CHECK(data.rejected[0].reason == "bad timestamp");
  CHECK(data.rejected[1].reason == "wrong field count");
  CHECK(data.rejected[2].reason == "missing field");
  CHECK(data.rejected[3].reason == "timestamp out of range");
  CHECK(data.rejected[4].reason == "malformed quoting");
}

TEST_CASE("future timestamps fall outside the default window") {
  const auto data = parse_posts(std::string(kHeader) + "p1,t1,u1,f1,2999-01-01T00:00:00Z\n",
                                InputFormat::csv);
  REQUIRE(data.rejected.size() == 1);
  CHECK(data.rejected[0].reason == "timestamp out of range");
}

TEST_CASE("fatal errors: bad header and unreadable stream") {
  CHECK_THROWS_AS(parse_csv("post,thread,user,forum,time\n"), SchemaError);
  CHECK_THROWS_AS(parse_csv(""), SchemaError);
  CHECK_THROWS_AS(parse_csv("post_id,thread_id,user_id,forum_id,timestamp,extra\n"), SchemaError);
  std::ifstream missing("/nonexistent/posts.csv");
  CHECK_THROWS_AS(parse_posts(missing, InputFormat::csv), InputError);
  CHECK_THROWS_AS(parse_posts(std::string_view("{not json"), InputFormat::json), SchemaError);
  CHECK_THROWS_AS(parse_posts(std::string_view("[]"), InputFormat::json), SchemaError);
}

TEST_CASE("posts are ordered by timestamp then post_id") {
  const auto data = parse_csv(std::string(kHeader) +
                              "b,t1,u1,f1,2012-01-01T10:00:00Z\n"
                              "c,t1,u1,f1,2011-01-01T10:00:00Z\n"
                              "a,t1,u1,f1,2012-01-01T10:00:00Z\n");
  REQUIRE(data.posts.size() == 3);
  CHECK(data.posts[0].post_id == "c");
  CHECK(data.posts[1].post_id == "a");
  CHECK(data.posts[2].post_id == "b");
}

TEST_CASE("thread starts: derived, honoured, and normalized") {
  SUBCASE("derived from earliest post when the column is absent") {
    const auto data = parse_csv(std::string(kHeader) +
                                "p2,t1,u2,f1,2012-01-02T00:00:00Z\n"
                                "p1,t1,u1,f1,2012-01-01T00:00:00Z\n");
    CHECK(data.posts[0].post_id == "p1");
    CHECK(data.posts[0].is_thread_start);
    CHECK_FALSE(data.posts[1].is_thread_start);
  }
  SUBCASE("explicit flag is kept even when it is not the earliest post") {
    const auto data = parse_csv(
        "post_id,thread_id,user_id,forum_id,timestamp,is_thread_start\n"
        "p1,t1,u1,f1,2012-01-01T00:00:00Z,false\n"
        "p2,t1,u2,f1,2012-01-02T00:00:00Z,true\n");
    CHECK_FALSE(data.posts[0].is_thread_start);
    CHECK(data.posts[1].is_thread_start);
  }
  SUBCASE("exactly one start per thread") {
    const auto data = parse_csv(
        "post_id,thread_id,user_id,forum_id,timestamp,is_thread_start\n"
        "p1,t1,u1,f1,2012-01-01T00:00:00Z,true\n"
        "p2,t1,u2,f1,2012-01-02T00:00:00Z,true\n"
        "p3,t2,u2,f1,2012-01-03T00:00:00Z,false\n"
        "p4,t2,u2,f1,2012-01-04T00:00:00Z,\n"
        "p5,t2,u2,f1,2012-01-05T00:00:00Z,maybe\n");
    std::map<std::string, int> starts;
    for (const auto& p : data.posts) {
      starts[p.thread_id] += p.is_thread_start;
    }
    CHECK(starts == std::map<std::string, int>{{"t1", 1}, {"t2", 1}});
    CHECK(data.posts[2].is_thread_start); // p3 falls back as earliest of t2
    REQUIRE(data.rejected.size() == 1);
    CHECK(data.rejected[0].reason == "bad is_thread_start");
  }
}

TEST_CASE("users roster") {
  auto data = parse_csv(std::string(kHeader) + "p1,t1,u1,f1,2012-01-01T00:00:00Z\n"
                                               "p2,t1,ghost,f1,2012-01-01T01:00:00Z\n");
  attach_users(data, "user_id,profession\nu1,Nursing\nu2,General Practice\nu3,\nu2,Cardiology\n");
  REQUIRE(data.users.size() == 4);
  CHECK(data.users[0] == UserProfile{"ghost", std::nullopt});
  CHECK(data.users[1] == UserProfile{"u1", "Nursing"});
  CHECK(data.users[2] == UserProfile{"u2", "General Practice"});
  CHECK(data.users[3] == UserProfile{"u3", std::nullopt});
  REQUIRE(data.rejected.size() == 1);
  CHECK(data.rejected[0].reason == "duplicate user_id");

  const auto ov = activity_overview(data);
  CHECK(ov.registered_user_count == 4);
  CHECK(ov.posting_user_count == 2);
  CHECK(ov.profession_breakdown.at("unknown") == 2);
  CHECK(ov.profession_breakdown.at("Nursing") == 1);

  CHECK_THROWS_AS(attach_users(data, "id,job\n"), SchemaError);
}

TEST_CASE("activity overview hand counts") {
  const auto data = fixtures::posts_of({{"u1", "t1"}, {"u2", "t1"}, {"u2", "t2"}});
  const auto ov = activity_overview(data);
  CHECK(ov.posting_user_count == 2);
  CHECK(ov.thread_count == 2);
  CHECK(ov.post_count == 3);
  CHECK(ov.registered_user_count == 2);
  CHECK(ov.posts_per_user == std::map<std::string, std::size_t>{{"u1", 1}, {"u2", 2}});
}

TEST_CASE("activity overview of an empty dataset is all zeros") {
  const auto ov = activity_overview(parse_csv(kHeader));
  CHECK(ov.registered_user_count == 0);
  CHECK(ov.posting_user_count == 0);
  CHECK(ov.thread_count == 0);
  CHECK(ov.post_count == 0);
  CHECK(ov.posts_per_user.empty());
  CHECK(ov.posts_per_forum_per_period.empty());
}

TEST_CASE("forum-by-year cells agree with an independent group-by") {
  const auto log = random_log(11, 100, 20, 15, 3, 2);
  const auto data = parse_csv(log.csv);
  REQUIRE(data.posts.size() == 100);
  std::map<std::pair<std::string, std::string>, std::size_t> expected;
  for (const auto& row : log.rows) {
    ++expected[{row[3], row[4].substr(0, 4)}];
  }
  const auto ov = activity_overview(data, Period::year);
  CHECK(ov.posts_per_forum_per_period == expected);
  std::size_t total = 0;
  for (const auto& [key, n] : ov.posts_per_forum_per_period) {
    total += n;
  }
  CHECK(total == 100);
}

TEST_CASE("top posters") {
  const auto data = fixtures::posts_of({{"a", "t1"}, {"a", "t2"}, {"a", "t3"}, {"b", "t1"}});
  CHECK(top_posters(data, 2) == std::vector<std::pair<std::string, std::size_t>>{{"a", 3}});
  CHECK(top_posters(parse_csv(kHeader), 0).empty());

  const auto tied = fixtures::posts_of({{"z", "t1"}, {"y", "t1"}, {"x", "t2"}, {"x", "t3"}});
  CHECK(top_posters(tied, 0) ==
        std::vector<std::pair<std::string, std::size_t>>{{"x", 2}, {"y", 1}, {"z", 1}});
}

TEST_CASE("top posters match a brute-force filter on a 50-user log") {
  const auto log = random_log(5, 600, 50, 40, 4, 3);
  const auto data = parse_csv(log.csv);
  std::map<std::string, std::size_t> counts;
  for (const auto& row : log.rows) {
    ++counts[row[2]];
  }
  std::vector<std::pair<std::string, std::size_t>> expected;
  for (const auto& [u, n] : counts) {
    if (n >= 10) {
      expected.emplace_back(u, n);
    }
  }
  std::sort(expected.begin(), expected.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second > y.second : x.first < y.first;
  });
  CHECK(top_posters(data, 10) == expected);
}

TEST_CASE("properties over random logs") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    CAPTURE(seed);
    auto log = random_log(seed, 80, 12, 10, 3, 4);
    // sprinkle faults: duplicates and garbage
    log.csv += "p3,t1,u1,f1,2012-01-01T00:00:00Z\n";
    log.csv += "broken row\n";
    log.csv += "p999,t1,u1,f1,yesterday\n";
    const auto data = parse_csv(log.csv);

    // lossless-or-logged
    CHECK(data.posts.size() + data.rejected.size() == log.rows.size() + 3);

    // round trip through the serialized form
    const auto again = parse_posts(serialize_dataset(data), InputFormat::json, fixtures::fixed_window());
    CHECK(again.same_content(data));

    // row order does not change overview totals
    std::vector<std::string> lines;
    std::istringstream in(log.csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      lines.push_back(line);
    }
    std::mt19937_64 rng(seed * 31);
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string shuffled(kHeader);
    for (const auto& l : lines) {
      shuffled += l + "\n";
    }
    const auto permuted = parse_csv(shuffled);
    const auto a = activity_overview(data);
    const auto b = activity_overview(permuted);
    CHECK(a.post_count == b.post_count);
    CHECK(a.posting_user_count == b.posting_user_count);
    CHECK(a.thread_count == b.thread_count);
    CHECK(a.posts_per_user == b.posts_per_user);
    CHECK(a.posts_per_forum_per_period == b.posts_per_forum_per_period);

    std::size_t sum = 0;
    for (const auto& [u, n] : a.posts_per_user) {
      sum += n;
    }
    CHECK(sum == a.post_count);
    CHECK(a.posting_user_count <= a.registered_user_count);
  }
}

TEST_CASE("posts CSV writer output parses back to the same dataset") {
  auto data = parse_csv(random_log(3, 50, 8, 6, 2, 2).csv);
  attach_users(data, "user_id,profession\nu1,\"Nursing, aged care\"\n");
  std::ostringstream posts;
  std::ostringstream users;
  write_posts_csv(data, posts);
  write_users_csv(data, users);
  auto again = parse_csv(posts.str());
  attach_users(again, users.str());
  CHECK(again.posts == data.posts);
  CHECK(again.users == data.users);
}

TEST_CASE("JSON rows are validated like CSV rows") {
  const std::string doc = R"({"posts":[
    {"post_id":"p1","thread_id":"t1","user_id":"u1","forum_id":"f1","timestamp":"2012-01-01T00:00:00Z"},
    {"post_id":"p2","thread_id":"t1","user_id":"u1","forum_id":"f1","timestamp":"soon"},
    {"post_id":"p3","thread_id":"t1","forum_id":"f1","timestamp":"2012-01-01T00:00:00Z"},
    {"post_id":"p1","thread_id":"t1","user_id":"u2","forum_id":"f1","timestamp":"2012-02-01T00:00:00Z"}
  ]})";
  const auto data = parse_posts(doc, InputFormat::json, fixtures::fixed_window());
  CHECK(data.posts.size() == 1);
  REQUIRE(data.rejected.size() == 3);
  CHECK(data.rejected[0].reason == "bad timestamp");
  CHECK(data.rejected[1].reason == "missing field");
  CHECK(data.rejected[2].reason == "duplicate post_id");
}

TEST_CASE("sha256 of known input") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
