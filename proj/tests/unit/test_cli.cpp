#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "jxbw");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = jxbw::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("jxbw_cli_test_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name), std::ios::binary) << text;
    return file(name);
  }

 private:
  fs::path path_;
};

const char* kTwoPeople =
    R"({"person":{"name":"Alice","age":30},"hobbies":["reading","cycling"]})" "\n"
    R"({"person":{"name":"Bob","age":30},"hobbies":["reading"]})" "\n";

}  // namespace

TEST_CASE("build, query and stats") {
  TempDir dir;
  const auto corpus = dir.write("people.jsonl", kTwoPeople);
  const auto idx = dir.file("people.idx");

  const Run b = cli({"build", corpus, "-o", idx, "--json"});
  REQUIRE(b.code == 0);
  const json report = json::parse(b.out);
  CHECK(report["lines"] == 2);
  CHECK(report["total_nodes"] == 21);
  CHECK(report["merged_nodes"] == 12);
  CHECK(report["sigma"] == 11);
  CHECK(report["index_bytes"] == fs::file_size(idx));
  for (const char* phase : {"individual_trees", "merging_tree", "normalize", "xbw", "save", "total"}) {
    CHECK(report["phases_ms"].contains(phase));
  }

  const std::string q = R"({"name":"Bob","age":30})";
  for (const char* algo : {"xbw", "mt", "naive"}) {
    const Run r = cli({"query", idx, "-q", q, "--jsonl", corpus, "--algorithm", algo, "--format", "json"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["ids"] == json::array({2}));
    CHECK(j["count"] == 1);
    CHECK(j["algorithm"] == algo);
    CHECK(j["query"] == json::parse(q));
    CHECK(j["elapsed_micros"].is_number());
  }
  CHECK(cli({"query", idx, "-q", R"({"age":30})"}).out == "1\n2\n");
  CHECK(cli({"query", idx, "-q", R"({"age":30})", "--format", "count"}).out == "2\n");
  const Run lines = cli({"query", idx, "-q", R"({"name":"Bob"})", "--jsonl", corpus, "--format", "lines"});
  CHECK(lines.out == std::string(R"({"person":{"name":"Bob","age":30},"hobbies":["reading"]})") + "\n");

  const Run absent = cli({"query", idx, "-q", R"({"name":"Carol"})", "--format", "count"});
  CHECK(absent.code == 0);
  CHECK(absent.out == "0\n");

  const Run st = cli({"stats", idx, "--json"});
  REQUIRE(st.code == 0);
  const json s = json::parse(st.out);
  std::uint64_t sum = 0;
  for (const auto& [name, bytes] : s["sections"].items()) sum += bytes.get<std::uint64_t>();
  CHECK(sum == s["file_bytes"].get<std::uint64_t>());
  CHECK(s["file_bytes"] == fs::file_size(idx));
  CHECK(s["nodes"] == 12);
  CHECK(cli({"stats", idx}).out.find("sections") != std::string::npos);
}

TEST_CASE("builds are deterministic") {
  TempDir dir;
  const auto corpus = dir.file("c.jsonl");
  REQUIRE(cli({"generate", "--kind", "mixed", "--lines", "300", "--seed", "4", "-o", corpus}).code == 0);
  REQUIRE(cli({"build", corpus, "-o", dir.file("a.idx")}).code == 0);
  REQUIRE(cli({"build", corpus, "-o", dir.file("b.idx")}).code == 0);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(slurp(dir.file("a.idx")) == slurp(dir.file("b.idx")));
  const auto q1 = dir.file("q1.jsonl"), q2 = dir.file("q2.jsonl");
  REQUIRE(cli({"sample", "--jsonl", corpus, "--count", "20", "--misses", "5", "--seed", "3", "-o", q1}).code == 0);
  REQUIRE(cli({"sample", "--jsonl", corpus, "--count", "20", "--misses", "5", "--seed", "3", "-o", q2}).code == 0);
  CHECK(slurp(q1) == slurp(q2));
}

TEST_CASE("verify and bench") {
  TempDir dir;
  const auto corpus = dir.file("c.jsonl");
  const auto idx = dir.file("c.idx");
  const auto queries = dir.file("q.jsonl");
  REQUIRE(cli({"generate", "--kind", "schema", "--lines", "400", "--seed", "2", "-o", corpus}).code == 0);
  REQUIRE(cli({"build", corpus, "-o", idx}).code == 0);
  REQUIRE(cli({"sample", "--jsonl", corpus, "--count", "15", "--misses", "3", "-o", queries}).code == 0);

  const Run v = cli({"verify", idx, "--jsonl", corpus, "--queries", queries});
  CHECK(v.code == 0);
  CHECK(v.out.find("PASS") != std::string::npos);
  CHECK(cli({"verify", idx, "--jsonl", corpus, "--random", "20", "--seed", "9"}).code == 0);

  // An index of a different corpus disagrees with the baselines.
  const auto other = dir.file("other.jsonl");
  REQUIRE(cli({"generate", "--kind", "schema", "--lines", "400", "--seed", "3", "-o", other}).code == 0);
  const Run bad = cli({"verify", idx, "--jsonl", other, "--queries", queries});
  CHECK(bad.code == jxbw::cli::kDisagreement);
  CHECK(bad.out.find("FAIL") != std::string::npos);
  CHECK(bad.err.find("DISAGREEMENT") != std::string::npos);

  const Run be = cli({"bench", idx, "--jsonl", corpus, "--queries", queries, "--repeat", "2", "--format", "json"});
  REQUIRE(be.code == 0);
  const json j = json::parse(be.out);
  CHECK(j["queries"] == 18);
  REQUIRE(j["results"].size() == 3);
  for (const auto& r : j["results"]) {
    CHECK(r["mean_ms"].get<double>() >= 0.0);
    CHECK(r["median_ms"].get<double>() >= 0.0);
  }
  CHECK(j["results"][0]["stats"].contains("mean_p"));
  const Run xbw_only = cli({"bench", idx, "--queries", queries, "--algorithms", "xbw"});
  CHECK(xbw_only.code == 0);
}

TEST_CASE("exit codes") {
  TempDir dir;
  const auto corpus = dir.write("people.jsonl", kTwoPeople);
  const auto idx = dir.file("people.idx");
  REQUIRE(cli({"build", corpus, "-o", idx}).code == 0);

  CHECK(cli({}).code == jxbw::cli::kUsage);
  CHECK(cli({"frobnicate"}).code == jxbw::cli::kUsage);
  CHECK(cli({"query", idx}).code == jxbw::cli::kUsage);
  CHECK(cli({"query", idx, "-q", "{}", "--algorithm", "fast"}).code == jxbw::cli::kUsage);
  CHECK(cli({"--help"}).code == jxbw::cli::kOk);
  CHECK(cli({"verify", idx, "--jsonl", corpus}).code == jxbw::cli::kUsage);

  const Run bad_query = cli({"query", idx, "-q", "{\"a\":"});
  CHECK(bad_query.code == jxbw::cli::kDataError);
  CHECK(bad_query.err.find("BAD_QUERY") != std::string::npos);

  const Run no_jsonl = cli({"query", idx, "-q", "{}", "--algorithm", "mt"});
  CHECK(no_jsonl.code == jxbw::cli::kDataError);
  CHECK(no_jsonl.err.find("MISSING_JSONL_FOR_BASELINE") != std::string::npos);

  const Run missing = cli({"stats", dir.file("nope.idx")});
  CHECK(missing.code == jxbw::cli::kDataError);

  const auto junk = dir.write("junk.idx", "not an index at all");
  const Run magic = cli({"stats", junk});
  CHECK(magic.code == jxbw::cli::kDataError);
  CHECK(magic.err.find("BAD_MAGIC") != std::string::npos);

  const auto broken = dir.write("broken.jsonl", "{\"a\":1}\n{\"a\":\n");
  const Run malformed = cli({"build", broken, "-o", dir.file("x.idx")});
  CHECK(malformed.code == jxbw::cli::kDataError);
  CHECK(malformed.err.find("MALFORMED_JSON") != std::string::npos);
  CHECK(malformed.err.find("line 2") != std::string::npos);
}
