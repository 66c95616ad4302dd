#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = ECRAM_STP_CLI_WORKDIR;

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" ECRAM_STP_CLI "\" " + args + " > \"" + (kRoot / "stdout.txt").string() +
                          "\" 2> \"" + (kRoot / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Workdir {
  Workdir() {
    fs::remove_all(kRoot);
    fs::create_directories(kRoot);
  }
};

}  // namespace

TEST_CASE("help is available for every subcommand") {
  Workdir w;
  CHECK(run("--help") == 0);
  for (const char* sub : {"simulate", "freq-response", "montecarlo", "spikes-to-fire", "replay"}) {
    CHECK(run(std::string(sub) + " --help") == 0);
    CHECK(slurp(kRoot / "stdout.txt").find("--") != std::string::npos);
  }
  CHECK(run("--version") == 0);
}

TEST_CASE("usage errors exit 2 with a JSON message") {
  Workdir w;
  const std::string out = (kRoot / "bad").string();
  CHECK(run("simulate --no-such-flag --out " + out) == 2);
  const auto err = nlohmann::json::parse(slurp(kRoot / "stderr.txt"));
  CHECK(err["error"] == "usage_error");
  CHECK(run("") == 2);
  CHECK(run("spikes-to-fire --preset missing --out " + out) == 2);
  CHECK(nlohmann::json::parse(slurp(fs::path(out) / "error.json"))["error"] == "config_error");
  CHECK(run("simulate --duration 5parsecs --out " + out) == 2);
}

TEST_CASE("coarse time step exits 3 unless allowed") {
  Workdir w;
  const std::string out = (kRoot / "coarse").string();
  CHECK(run("simulate --preset delay_feedback_fast --dt 5ms --duration 10ms --out " + out) == 3);
  CHECK(nlohmann::json::parse(slurp(kRoot / "stderr.txt"))["error"] == "numerical_guard");
  CHECK(run("simulate --preset delay_feedback_fast --dt 5ms --duration 10ms --allow-coarse-dt --out " + out) == 0);
}

TEST_CASE("manifest records the resolved run and one summary line is printed") {
  Workdir w;
  const fs::path out = kRoot / "stf";
  REQUIRE(run("spikes-to-fire --states 58-62 --out " + out.string()) == 0);
  const std::string stdout_text = slurp(kRoot / "stdout.txt");
  CHECK(std::count(stdout_text.begin(), stdout_text.end(), '\n') == 1);
  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(m["subcommand"] == "spikes-to-fire");
  for (const char* key : {"version", "seed", "config", "config_hash", "outputs", "kernel_backend", "rng"}) {
    CHECK(m.contains(key));
  }
  const std::string csv = slurp(out / "spikes_to_fire.csv");
  CHECK(csv.find("# config_hash=") == 0);
  CHECK(csv.find("state,g_nv,delta_v,spikes_to_fire\n") != std::string::npos);
  CHECK(csv.find("\n60,") != std::string::npos);
}

TEST_CASE("seed precedence: flag, then environment") {
  Workdir w;
  auto seed_of = [](const fs::path& dir) {
    return nlohmann::json::parse(slurp(dir / "manifest.json"))["seed"].get<std::uint64_t>();
  };
  const fs::path a = kRoot / "a", b = kRoot / "b";
  REQUIRE(run("simulate --duration 0.1s --no-trace --out " + a.string(), "ECRAM_STP_SEED=41") == 0);
  CHECK(seed_of(a) == 41);
  REQUIRE(run("simulate --duration 0.1s --no-trace --seed 7 --out " + b.string(), "ECRAM_STP_SEED=41") == 0);
  CHECK(seed_of(b) == 7);
  CHECK(run("simulate --duration 0.1s --out " + b.string(), "ECRAM_STP_SEED=abc") == 2);
}

TEST_CASE("overrides change the config hash") {
  Workdir w;
  const fs::path a = kRoot / "a", b = kRoot / "b";
  REQUIRE(run("spikes-to-fire --states 60 --out " + a.string()) == 0);
  REQUIRE(run("spikes-to-fire --states 60 --set presets.neuron.delay_feedback_slow.leak_rate=6.0 --out " + b.string()) ==
          0);
  const auto ma = nlohmann::json::parse(slurp(a / "manifest.json"));
  const auto mb = nlohmann::json::parse(slurp(b / "manifest.json"));
  CHECK(ma["config_hash"] != mb["config_hash"]);
  CHECK(mb["config"]["presets"]["neuron"]["delay_feedback_slow"]["leak_rate"] == 6.0);
  // A stronger leak needs more inputs.
  const std::string ca = slurp(a / "spikes_to_fire.csv"), cb = slurp(b / "spikes_to_fire.csv");
  CHECK(ca.substr(ca.rfind(',')) == ",6\n");
  CHECK(cb.substr(cb.rfind(',')) != ",6\n");
}
