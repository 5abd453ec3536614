#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ccm/cli.hpp"
#include "ccm/error.hpp"
#include "support.hpp"

using namespace ccm;
using namespace ccm::test;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

template <class Opts, class F>
Run run(F f, const Opts& opts) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = f(opts, out, err);
  return {code, out.str(), err.str()};
}

cli::EnumerateOptions enumerate_opts(const std::string& file, bool json = true) {
  cli::EnumerateOptions o;
  o.file = corpus_path(file);
  o.json = json;
  return o;
}

cli::CheckOptions check_opts(const std::string& file) {
  cli::CheckOptions o;
  o.file = corpus_path(file);
  o.json = true;
  return o;
}

}  // namespace

TEST_CASE("fnv1a64 reference values") {
  CHECK(cli::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(cli::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(cli::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("initial-state overrides") {
  const Program p = corpus("lowenstein.ccm").program;
  const State s = cli::apply_overrides(p.vars(), p.vars().initial_state(), {"x=true", "b=T"});
  CHECK(s == make_state(p.vars(), {{"x", 1}, {"b", 1}}));
  CHECK_THROWS_AS(cli::apply_overrides(p.vars(), s, {"zz=1"}), Error);
  CHECK_THROWS_AS(cli::apply_overrides(p.vars(), s, {"x=7"}), ValidationError);
  CHECK_THROWS_AS(cli::apply_overrides(p.vars(), s, {"x"}), ValidationError);
}

TEST_CASE("enumerate reports") {
  auto o = enumerate_opts("sb.ccm");
  o.complete_only = true;
  const Run r = run(cli::cmd_enumerate, o);
  CHECK(r.code == cli::kOk);
  const Json j = Json::parse(r.out);
  for (const char* k : {"command", "input", "verdict", "witnesses", "behaviors", "stats",
                        "wall_time_ms"}) {
    CHECK(j.contains(k));
  }
  CHECK(j["command"].get<std::string>().starts_with("enumerate "));
  CHECK(j["behaviors"].size() == 1);

  o.model = "sc";
  const Json sc = Json::parse(run(cli::cmd_enumerate, o).out);
  CHECK(sc["behaviors"].empty());

  auto tso = enumerate_opts("lowenstein.ccm");
  tso.model = "tso-plain";
  tso.complete_only = true;
  CHECK(run(cli::cmd_enumerate, tso).code == cli::kOk);

  auto text = enumerate_opts("sb.ccm", false);
  const Run t = run(cli::cmd_enumerate, text);
  CHECK(t.code == cli::kOk);
  CHECK_FALSE(t.out.empty());
}

TEST_CASE("exit codes") {
  auto missing = enumerate_opts("nope.ccm");
  CHECK(run(cli::cmd_enumerate, missing).code == cli::kInvalid);

  auto capped = enumerate_opts("lowenstein.ccm");
  capped.max_ops = 2;
  const Run c = run(cli::cmd_enumerate, capped);
  CHECK(c.code == cli::kCap);
  CHECK(Json::parse(c.out)["verdict"] == "cap");

  auto oracle = enumerate_opts("lowenstein-annotated.ccm");
  oracle.model = "cc-oracle";
  CHECK(run(cli::cmd_enumerate, oracle).code != cli::kOk);

  auto none = check_opts("sb-annotated.ccm");
  CHECK(run(cli::cmd_check, none).code == cli::kUsage);
  auto two = check_opts("sb-annotated.ccm");
  two.annotation = two.ghost = true;
  CHECK(run(cli::cmd_check, two).code == cli::kUsage);
  auto absent = check_opts("sb.ccm");
  absent.annotation = true;
  CHECK(run(cli::cmd_check, absent).code == cli::kUsage);

  auto bad_shape = check_opts("ghost-race.ccm");
  bad_shape.bridge = true;
  CHECK(run(cli::cmd_check, bad_shape).code == cli::kInvalid);
}

TEST_CASE("check verdicts") {
  auto good = check_opts("sb-annotated.ccm");
  good.annotation = true;
  const Run g = run(cli::cmd_check, good);
  CHECK(g.code == cli::kOk);
  CHECK(Json::parse(g.out)["verdict"] == "pass");

  auto bad = check_opts("sb-strengthened.ccm");
  bad.annotation = true;
  const Run b = run(cli::cmd_check, bad);
  CHECK(b.code == cli::kFailed);
  const Json bj = Json::parse(b.out);
  CHECK(bj["verdict"] == "fail");
  REQUIRE(bj["witnesses"].size() == 1);

  auto sound = check_opts("lowenstein-annotated.ccm");
  sound.soundness = true;
  CHECK(run(cli::cmd_check, sound).code == cli::kOk);

  auto race = check_opts("ghost-race.ccm");
  race.ghost = true;
  CHECK(run(cli::cmd_check, race).code == cli::kFailed);

  auto flags = check_opts("ghost-doneflags.ccm");
  flags.ghost = true;
  CHECK(run(cli::cmd_check, flags).code == cli::kOk);

  auto bridge = check_opts("lowenstein.ccm");
  bridge.bridge = true;
  CHECK(run(cli::cmd_check, bridge).code == cli::kOk);
  bridge.model = "tso-plain";
  CHECK(run(cli::cmd_check, bridge).code == cli::kFailed);
}

TEST_CASE("reports are deterministic apart from wall time") {
  for (const auto& f : corpus_files()) {
    CAPTURE(f);
    const Run a = run(cli::cmd_enumerate, enumerate_opts(f));
    const Run b = run(cli::cmd_enumerate, enumerate_opts(f));
    CHECK(cli::strip_wall_time(a.out) == cli::strip_wall_time(b.out));
    CHECK(cli::strip_wall_time(a.out).find("wall_time_ms") == std::string::npos);
    std::ifstream in(corpus_path(f), std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(in)), {});
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(cli::fnv1a64(bytes)));
    CHECK(Json::parse(a.out)["input"]["fnv1a64"] == hex);
  }
}

TEST_CASE("corpus command") {
  cli::CorpusOptions o;
  o.dir = CCM_CORPUS_DIR;
  const Run r = run(cli::cmd_corpus, o);
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("FAIL") == std::string::npos);

  o.json = true;
  const Run j = run(cli::cmd_corpus, o);
  CHECK(j.code == cli::kOk);
  std::istringstream lines(j.out);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    CHECK(Json::parse(line)["verdict"] == "pass");
    ++rows;
  }
  CHECK(rows == corpus_files().size() + 11 + 1);

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ccm-test-corpus";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const auto& f : corpus_files()) fs::copy_file(corpus_path(f), dir / f);
  std::ofstream(dir / "sb.ccm", std::ios::app) << "thread broken {\n";
  o.dir = dir.string();
  o.json = false;
  const Run broken = run(cli::cmd_corpus, o);
  CHECK(broken.code == cli::kFailed);
  CHECK(broken.out.find("FAIL") != std::string::npos);
  fs::remove_all(dir);
}
