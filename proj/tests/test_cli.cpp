#include <doctest.h>

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <sstream>

#include <httplib.h>

#include "../tools/cli.hpp"
#include "oracles.hpp"

using namespace papercad::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "papercad");
  std::ostringstream out, err;
  const int code = papercad::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("papercad_cli_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::string> rgb_args(const fs::path& out) {
  return {"convert", fixture_path("rgb_led.xml"), "--placement", fixture_path("rgb_led.place"), "--out", out.string()};
}

}  // namespace

TEST_CASE("convert writes the cut file and a passing report") {
  const fs::path out = scratch("convert");
  const Run r = cli(rgb_args(out));
  CHECK(r.code == papercad::cli::kExitClean);
  CHECK(fs::exists(out / "cut.svg"));
  CHECK(fs::exists(out / "drc.txt"));
  CHECK_FALSE(fs::exists(out / "finetape.svg"));
  CHECK_FALSE(fs::exists(out / "zonemap.zmap"));
  CHECK(read_text((out / "drc.txt").string()).rfind("# drc PASS", 0) == 0);
  for (const auto& e : fs::directory_iterator(out)) CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("repeated runs are byte-identical and debug files appear") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  auto args_a = rgb_args(a), args_b = rgb_args(b);
  args_a.push_back("--debug");
  args_b.push_back("--debug");
  REQUIRE(cli(args_a).code == 0);
  REQUIRE(cli(args_b).code == 0);
  for (const char* f : {"cut.svg", "drc.txt", "zonemap.zmap", "preview.png"}) {
    CAPTURE(f);
    CHECK(read_text((a / f).string()) == read_text((b / f).string()));
  }
}

TEST_CASE("the seed does not matter when a placement is given") {
  const fs::path a = scratch("seed_a"), b = scratch("seed_b");
  auto args_a = rgb_args(a), args_b = rgb_args(b);
  args_a.insert(args_a.end(), {"--seed", "1"});
  args_b.insert(args_b.end(), {"--seed", "99"});
  REQUIRE(cli(args_a).code == 0);
  REQUIRE(cli(args_b).code == 0);
  CHECK(read_text((a / "cut.svg").string()) == read_text((b / "cut.svg").string()));
}

TEST_CASE("fine-tape mode writes both files") {
  const fs::path out = scratch("finetape");
  auto args = rgb_args(out);
  args.insert(args.end(), {"--mode", "finetape"});
  CHECK(cli(args).code == 0);
  CHECK(fs::exists(out / "cut.svg"));
  CHECK(read_text((out / "finetape.svg").string()).find("tape-guides") != std::string::npos);
  auto mismatch = rgb_args(scratch("finetape_bad"));
  mismatch.insert(mismatch.end(), {"--mode", "finetape", "--tape-width", "1.5", "--gap", "1.0"});
  CHECK(cli(mismatch).code == papercad::cli::kExitFailed);
}

TEST_CASE("config file with flag overrides") {
  const fs::path a = scratch("cfg_a"), b = scratch("cfg_b"), direct = scratch("cfg_direct");
  CHECK(cli({"convert", "--config", fixture_path("rgb_led.yaml"), "--out", a.string()}).code == 0);
  CHECK(cli(rgb_args(direct)).code == 0);
  CHECK(read_text((a / "cut.svg").string()) == read_text((direct / "cut.svg").string()));
  CHECK(cli({"convert", "--config", fixture_path("rgb_led.yaml"), "--gap", "0.4", "--out", b.string()}).code == 0);
  CHECK(read_text((a / "cut.svg").string()) != read_text((b / "cut.svg").string()));
}

TEST_CASE("exit codes for violations and failures") {
  const Run close = cli({"trace-convert", fixture_path("close_traces.svg"), "--out", scratch("close").string()});
  CHECK(close.code == papercad::cli::kExitViolations);
  CHECK_FALSE(close.err.empty());
  CHECK_FALSE(fs::exists(scratch("close") / "cut.svg"));

  const Run empty = cli({"trace-convert", fixture_path("empty.svg"), "--out", scratch("empty").string()});
  CHECK(empty.code == papercad::cli::kExitFailed);

  const Run unknown = cli({"convert", fixture_path("unknown_footprint.xml"), "--out", scratch("unknown").string()});
  CHECK(unknown.code == papercad::cli::kExitFailed);
  CHECK(unknown.err.find("sot23_mystery") != std::string::npos);

  CHECK(cli({"convert", "/nonexistent/file.xml"}).code == papercad::cli::kExitFailed);
  CHECK(cli({"frobnicate"}).code == papercad::cli::kExitFailed);

  const Run traces = cli({"trace-convert", fixture_path("two_trace.svg"), "--out", scratch("two").string()});
  CHECK(traces.code == papercad::cli::kExitClean);
}

TEST_CASE("check reads a debug dump") {
  const fs::path out = scratch("check");
  auto args = rgb_args(out);
  args.push_back("--debug");
  REQUIRE(cli(args).code == 0);
  const Run r = cli({"check", (out / "zonemap.zmap").string(), "--board", "100x70"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("# drc PASS", 0) == 0);
  CHECK(cli({"check", (out / "zonemap.zmap").string(), "--board", "90x70"}).code == papercad::cli::kExitFailed);
}

TEST_CASE("place is deterministic per seed") {
  const fs::path a = scratch("place_a"), b = scratch("place_b");
  REQUIRE(cli({"place", fixture_path("chain4.xml"), "--seed", "7", "--out", a.string()}).code == 0);
  REQUIRE(cli({"place", fixture_path("chain4.xml"), "--seed", "7", "--out", b.string()}).code == 0);
  CHECK(read_text((a / "placement.txt").string()) == read_text((b / "placement.txt").string()));
}

TEST_CASE("convert without a placement auto-places") {
  const fs::path out = scratch("auto");
  const Run r = cli({"convert", fixture_path("chain4.xml"), "--seed", "3", "--out", out.string()});
  CHECK(r.code != papercad::cli::kExitFailed);
  CHECK(fs::exists(out / "placement.txt"));
}

TEST_CASE("serve answers until terminated") {
  int pipe_fd[2];
  REQUIRE(::pipe(pipe_fd) == 0);
  const pid_t pid = ::fork();
  REQUIRE(pid >= 0);
  if (pid == 0) {
    ::dup2(pipe_fd[1], STDOUT_FILENO);
    ::close(pipe_fd[0]);
    const std::string netlist = fixture_path("rgb_led.xml"), placement = fixture_path("rgb_led.place");
    ::execl(PAPERCAD_BINARY, PAPERCAD_BINARY, "serve", netlist.c_str(), "--placement", placement.c_str(), "--port",
            "0", static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(pipe_fd[1]);
  std::string line;
  char c;
  while (::read(pipe_fd[0], &c, 1) == 1 && c != '\n') line += c;
  ::close(pipe_fd[0]);
  const std::string prefix = "serving on http://127.0.0.1:";
  REQUIRE(line.rfind(prefix, 0) == 0);
  const int port = std::stoi(line.substr(prefix.size()));
  httplib::Client client("127.0.0.1", port);
  const auto res = client.Get("/api/project");
  REQUIRE(res);
  CHECK(res->status == 200);
  ::kill(pid, SIGTERM);
  int status = 0;
  ::waitpid(pid, &status, 0);
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
}
