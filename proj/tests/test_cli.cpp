#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / ("forumnet_cli_" + std::to_string(::getpid()));

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Result run(const std::string& args) {
  fs::create_directories(kWork);
  const auto out = kWork / "stdout.txt";
  const auto err = kWork / "stderr.txt";
  const std::string cmd = std::string("cd '") + kWork.string() + "' && '" + FORUMNET_CLI + "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void write(const std::string& name, const std::string& text) {
  fs::create_directories(kWork);
  std::ofstream(kWork / name, std::ios::binary) << text;
}

const char* kToy = "post_id,thread_id,user_id,forum_id,timestamp\n"
                   "p1,t1,u1,f1,2012-01-01T00:00:00Z\n"
                   "p2,t1,u2,f1,2012-01-01T01:00:00Z\n"
                   "p3,t2,u2,f1,2012-01-02T00:00:00Z\n"
                   "p4,t2,u3,f2,2012-01-02T01:00:00Z\n";

struct Cleanup {
  ~Cleanup() {
    std::error_code ec;
    fs::remove_all(kWork, ec);
  }
} cleanup;

} // namespace

TEST_CASE("help and version succeed") {
  CHECK(run("--help").code == 0);
  const auto v = run("--version");
  CHECK(v.code == 0);
  CHECK(v.out.find(FORUMNET_VERSION) != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("metrics").code == 2);
  write("toy.csv", kToy);
  CHECK(run("metrics --data toy.csv --mode forum").code == 2);
  CHECK(run("analyze --data toy.csv --out o --core-threshold 3").code == 2);
  write("bad_config.json", R"({"no-such-option": 1})");
  CHECK(run("analyze --data toy.csv --out o --config bad_config.json").code == 2);
  CHECK(run("synth --users 1 --threads 5 --posts 2 --alpha 1 --seed 1 --out s.csv").code == 2);
}

TEST_CASE("input errors exit 1") {
  const auto r = run("analyze --data missing.csv --out o");
  CHECK(r.code == 1);
  CHECK(r.err.find("missing.csv") != std::string::npos);
  write("bad_header.csv", "a,b,c\n1,2,3\n");
  CHECK(run("metrics --data bad_header.csv --mode user").code == 1);
}

TEST_CASE("metrics prints the structural table") {
  write("toy.csv", kToy);
  const auto r = run("metrics --data toy.csv --mode user");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("User (N=3)") != std::string::npos);
  CHECK(r.out.find("0.67") != std::string::npos); // density of the 3-path
  CHECK(r.out.find("1.33") != std::string::npos); // its average path length
}

TEST_CASE("ingest writes dataset, overview and rejected rows") {
  write("dirty.csv", std::string(kToy) + "p4,t9,u9,f1,2012-01-03T00:00:00Z\np5,t1,u1,f1,soon\n");
  const auto r = run("ingest --posts dirty.csv --out ing");
  REQUIRE(r.code == 0);
  const auto overview = nlohmann::json::parse(slurp(kWork / "ing" / "overview.json"));
  CHECK(overview["post_count"] == 4);
  CHECK(overview["rejected_count"] == 2);
  const auto rejected = slurp(kWork / "ing" / "rejected.csv");
  CHECK(rejected.find("duplicate post_id") != std::string::npos);
  CHECK(rejected.find("bad timestamp") != std::string::npos);

  // the serialized dataset is itself a valid input
  CHECK(run("metrics --data ing/dataset.json --mode thread").code == 0);
}

TEST_CASE("synth, analyze and viz") {
  REQUIRE(run("synth --users 60 --threads 50 --posts 400 --alpha 1.2 --seed 5 --out gen/posts.csv").code == 0);
  CHECK(fs::exists(kWork / "gen" / "posts.users.csv"));
  CHECK(fs::exists(kWork / "gen" / "posts.roles.csv"));

  const auto a = run("analyze --data gen/posts.csv --users gen/posts.users.csv --roles gen/posts.roles.csv "
                     "--out report --layout-iterations 30 --bipartite-norm");
  REQUIRE(a.code == 0);
  CHECK(fs::exists(kWork / "report" / "core.json"));
  CHECK(fs::exists(kWork / "report" / "bipartite_degree.csv"));
  const auto core = nlohmann::json::parse(slurp(kWork / "report" / "core.json"));
  bool saw_moderator = false;
  for (const auto& m : core["members"]) {
    saw_moderator |= m["role"] == "moderator";
  }
  CHECK(saw_moderator);

  write("cfg.json", R"({"core-threshold": 0.9, "layout-iterations": 10})");
  REQUIRE(run("analyze --data gen/posts.csv --out r2 --config cfg.json --core-threshold 0.5").code == 0);
  const auto prov = nlohmann::json::parse(slurp(kWork / "r2" / "core.json"));
  CHECK(prov["threshold"].get<double>() == 0.5); // flag beats file
  CHECK(prov["provenance"]["config"]["layout-iterations"] == 10);

  const auto v = run("viz --data gen/posts.csv --mode thread --format graphml --out t.graphml --iterations 20");
  REQUIRE(v.code == 0);
  CHECK(slurp(kWork / "t.graphml").find("<graphml") != std::string::npos);
  CHECK(run("viz --data gen/posts.csv --mode bipartite --format dot --out b.dot --iterations 20").code == 0);
  CHECK(slurp(kWork / "b.dot").find(" -- ") != std::string::npos);
}
