#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "hsreduce/cli.hpp"

using namespace hsreduce;
namespace fs = std::filesystem;

namespace {

const std::string kData = HSREDUCE_DATA_DIR;
const std::string kFourPairs = kData + "/instances/four_pairs.json";
const std::string kSingleLoss = kData + "/instances/single_loss.json";

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("hsreduce_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code = 0;
  std::string out, err, manifest;
  std::vector<nlohmann::json> lines() const {
    std::vector<nlohmann::json> v;
    std::istringstream in(out);
    for (std::string l; std::getline(in, l);)
      if (!l.empty()) v.push_back(nlohmann::json::parse(l));
    return v;
  }
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Run run(const cli::Options& o) {
  std::ostringstream out, err, man;
  Run r;
  r.code = cli::dispatch(o, out, err, &man);
  r.out = out.str();
  r.err = err.str();
  r.manifest = man.str();
  return r;
}

cli::Options opts(std::string command, std::vector<std::string> inputs) {
  cli::Options o;
  o.command = std::move(command);
  o.inputs = std::move(inputs);
  return o;
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

// Compiles the four-pair instance once into a shared directory.
const TempDir& compiled_example() {
  static TempDir dir;
  static bool done = [] {
    auto o = opts("compile", {kFourPairs});
    o.out_dir = dir.path.string();
    return run(o).code == 0;
  }();
  EXPECT_TRUE(done);
  return dir;
}

std::string script_for(const std::string& choices, const TempDir& tmp) {
  auto o = opts("simulate", {kFourPairs});
  o.choices = choices;
  o.out_file = tmp / (choices + ".json");
  EXPECT_EQ(run(o).code, 0);
  return o.out_file;
}

int shell(const std::string& args) {
  std::string cmd = std::string("\"") + HSREDUCE_CLI + "\" " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cards, DumpMatchesShippedTable) {
  auto r = run(opts("cards", {}));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, slurp(kData + "/cards.json"));
}

TEST(Compile, WritesOutputs) {
  TempDir tmp;
  auto o = opts("compile", {kFourPairs});
  o.out_dir = tmp.path.string();
  auto r = run(o);
  ASSERT_EQ(r.code, 0) << r.err;
  for (auto f : {"config.json", "line.json", "manifest.json"}) EXPECT_TRUE(fs::exists(tmp.path / f)) << f;
  auto j = r.json();
  EXPECT_EQ(j["leperHealth"], 196);
  EXPECT_EQ(j["turns"], 5);
  auto cfg = cli::read_config(tmp / "config.json");
  EXPECT_EQ(cfg.state.players[kEnemy].board.front().health, 196);
  auto man = nlohmann::json::parse(slurp(tmp.path / "manifest.json"));
  EXPECT_EQ(man["configHash"], cli::hex64(cli::fnv1a(config_to_json(cfg).dump())));
}

TEST(Compile, Idempotent) {
  TempDir a, b;
  auto o = opts("compile", {kFourPairs});
  o.out_dir = a.path.string();
  auto ra = run(o);
  o.out_dir = b.path.string();
  auto rb = run(o);
  EXPECT_EQ(slurp(a.path / "config.json"), slurp(b.path / "config.json"));
  EXPECT_EQ(slurp(a.path / "line.json"), slurp(b.path / "line.json"));
  EXPECT_EQ(ra.out, rb.out);
}

TEST(Compile, ZeroPairsAreNormalized) {
  TempDir tmp;
  auto o = opts("compile", {kData + "/instances/zeros.json"});
  o.out_dir = tmp.path.string();
  auto r = run(o);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["normalized"]["target"], 2);
  EXPECT_EQ(r.json()["leperHealth"], 32);
}

TEST(Compile, BadInputsExitTwo) {
  TempDir tmp;
  write(tmp / "empty.json", R"({"pairs":[],"target":0})");
  write(tmp / "broken.json", R"({"pairs":[[1,2]],)");
  write(tmp / "negative.json", R"({"pairs":[[-1,2]],"target":1})");
  for (auto f : {"empty.json", "broken.json", "negative.json", "missing.json"}) {
    auto o = opts("compile", {tmp / f});
    o.out_dir = tmp / "out";
    auto r = run(o);
    EXPECT_EQ(r.code, cli::kInputError) << f;
    EXPECT_FALSE(r.err.empty()) << f;
  }
}

TEST(Manifest, DeterministicApartFromDuration) {
  auto o = opts("verify", {kSingleLoss});
  auto strip = [](const std::string& s) {
    auto j = nlohmann::json::parse(s);
    EXPECT_TRUE(j.contains("durationMs"));
    j.erase("durationMs");
    return j;
  };
  auto a = run(o), b = run(o);
  EXPECT_EQ(strip(a.manifest), strip(b.manifest));
  auto j = strip(a.manifest);
  EXPECT_EQ(j["command"], "verify");
  EXPECT_EQ(j["toolVersion"], std::string(cli::kToolVersion));
  EXPECT_TRUE(j["configHash"].is_string());
}

TEST(Manifest, NullHashWithoutConfig) {
  auto r = run(opts("cards", {}));
  EXPECT_TRUE(nlohmann::json::parse(r.manifest)["configHash"].is_null());
}

TEST(Simulate, HealthTraces) {
  for (auto [choices, outcome, final_hp] : std::vector<std::tuple<std::string, std::string, int>>{
           {"xyyx", "friendly_wins", 0}, {"yyxx", "friendly_wins", 0}, {"xxyx", "enemy_wins", -2}}) {
    auto o = opts("simulate", {kFourPairs});
    o.choices = choices;
    auto r = run(o);
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = r.json();
    EXPECT_EQ(j["outcome"], outcome) << choices;
    EXPECT_EQ(j["leperHealth"].back(), final_hp) << choices;
    EXPECT_TRUE(j["script"].is_array());
  }
}

TEST(Simulate, Deterministic) {
  auto o = opts("simulate", {kFourPairs});
  o.choices = "xyyx";
  EXPECT_EQ(run(o).out, run(o).out);
}

TEST(Simulate, TooManyChoices) {
  auto o = opts("simulate", {kSingleLoss});
  o.choices = "xyx";
  EXPECT_EQ(run(o).code, cli::kInputError);
}

TEST(Replay, OutcomesPerChoice) {
  TempDir tmp;
  const auto& dir = compiled_example();
  for (auto [choices, outcome] : std::vector<std::pair<std::string, std::string>>{
           {"xyyx", "friendly_wins"}, {"yyxx", "friendly_wins"}, {"xxyx", "enemy_wins"}}) {
    auto r = run(opts("replay", {dir / "config.json", script_for(choices, tmp)}));
    ASSERT_EQ(r.code, 0) << r.err;
    auto lines = r.lines();
    ASSERT_FALSE(lines.empty());
    EXPECT_EQ(lines.back()["type"], "final");
    EXPECT_EQ(lines.back()["outcome"], outcome) << choices;
  }
}

TEST(Replay, TraceAddsSnapshots) {
  TempDir tmp;
  const auto& dir = compiled_example();
  auto o = opts("replay", {dir / "config.json", script_for("xyyx", tmp)});
  auto plain = run(o).lines();
  o.trace = true;
  auto traced = run(o).lines();
  std::size_t snaps = 0;
  for (const auto& l : traced) snaps += l["type"] == "snapshot";
  EXPECT_EQ(traced.size(), plain.size() + snaps);
  EXPECT_EQ(snaps, plain.back()["actions"].get<std::size_t>());
}

TEST(Replay, IllegalStepReportsIndex) {
  TempDir tmp;
  const auto& dir = compiled_example();
  // Ending the turn is fine; attacking with an empty slot is not.
  write(tmp / "bad.json", R"({"actions":[{"end":true},{"attack":{"attacker":{"side":1,"slot":6},"defender":{"hero":0}}}]})");
  auto r = run(opts("replay", {dir / "config.json", tmp / "bad.json"}));
  EXPECT_EQ(r.code, cli::kFailed);
  auto lines = r.lines();
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines.back()["type"], "illegal");
  EXPECT_EQ(lines.back()["action"], 1);
}

TEST(Replay, EmptyScript) {
  TempDir tmp;
  write(tmp / "none.json", "[]");
  auto r = run(opts("replay", {compiled_example() / "config.json", tmp / "none.json"}));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.lines().back()["outcome"], "ongoing");
}

TEST(Solve, SkeletonWithLine) {
  const auto& dir = compiled_example();
  auto o = opts("solve", {dir / "config.json"});
  o.line_path = dir / "line.json";
  auto r = run(o);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["verdict"], "win");
  EXPECT_EQ(r.json()["choices"].get<std::string>().size(), 4u);
}

TEST(Solve, SkeletonNeedsLine) {
  auto r = run(opts("solve", {compiled_example() / "config.json"}));
  EXPECT_EQ(r.code, cli::kInputError);
}

TEST(Solve, UnknownMode) {
  auto o = opts("solve", {compiled_example() / "config.json"});
  o.mode = "exhaustive";
  EXPECT_EQ(run(o).code, cli::kInputError);
}

TEST(Solve, FullModeRespectsBudget) {
  auto o = opts("solve", {compiled_example() / "config.json"});
  o.mode = "full";
  o.max_nodes = 1;
  auto r = run(o);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["verdict"], "unknown");
}

TEST(Verify, FourPairsMatches) {
  auto r = run(opts("verify", {kFourPairs}));
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  auto j = r.json();
  EXPECT_TRUE(j["oracle"].get<bool>());
  EXPECT_EQ(j["skeleton"], "win");
  EXPECT_TRUE(j["match"].get<bool>());
  EXPECT_EQ(j["deviations"]["unresolved"], 0);
  EXPECT_GT(j["deviations"]["refuted"].get<int>(), 0);
}

TEST(Verify, LossMatches) {
  auto r = run(opts("verify", {kSingleLoss}));
  EXPECT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_FALSE(j["oracle"].get<bool>());
  EXPECT_EQ(j["skeleton"], "loss");
  EXPECT_TRUE(j["match"].get<bool>());
}

TEST(Verify, WrongLeperHealthMismatches) {
  TempDir tmp;
  auto mutated = cli::read_config(compiled_example() / "config.json");
  auto& leper = mutated.state.players[kEnemy].board.front();
  leper.health = leper.max_health = 197;
  cli::write_json(tmp / "c197.json", config_to_json(mutated));
  auto o = opts("verify", {kFourPairs});
  o.config_override = tmp / "c197.json";
  o.probes = "none";
  auto r = run(o);
  ASSERT_EQ(r.code, cli::kFailed) << r.err;
  EXPECT_FALSE(r.json()["match"].get<bool>());
}

TEST(Verify, UnresolvedNeedsOptIn) {
  auto o = opts("verify", {kFourPairs});
  o.max_nodes = 1;
  auto r = run(o);
  // With a one-node budget the skeleton itself cannot conclude.
  EXPECT_EQ(r.code, cli::kFailed);
}

TEST(Exit, ExceptionMapping) {
  std::ostringstream err;
  EXPECT_EQ(cli::guarded([]() -> int { throw ScheduleInfeasible(3, 0, "mana"); }, err), cli::kInfeasible);
  EXPECT_EQ(cli::guarded([]() -> int { throw IllegalAction("no"); }, err), cli::kFailed);
  EXPECT_EQ(cli::guarded([]() -> int { throw cli::InputError("no"); }, err), cli::kInputError);
  EXPECT_EQ(cli::guarded([]() -> int { throw BadConfig("no"); }, err), cli::kInputError);
  EXPECT_EQ(cli::guarded([]() -> int { return nlohmann::json::parse("{").size(); }, err), cli::kInputError);
  EXPECT_EQ(cli::guarded([] { return 0; }, err), cli::kOk);
}

TEST(Binary, ExitCodes) {
  TempDir tmp;
  write(tmp / "empty.json", R"({"pairs":[],"target":0})");
  EXPECT_EQ(shell("cards dump"), 0);
  EXPECT_EQ(shell("--help"), 0);
  EXPECT_EQ(shell("frobnicate"), 2);
  EXPECT_EQ(shell("compile \"" + (tmp / "empty.json") + "\" \"" + (tmp / "out") + "\""), 2);
  EXPECT_EQ(shell("--manifest \"" + (tmp / "m.json") + "\" compile \"" + kFourPairs + "\" \"" + (tmp / "out") + "\""), 0);
  EXPECT_TRUE(fs::exists(tmp.path / "out" / "config.json"));
  EXPECT_TRUE(nlohmann::json::parse(slurp(tmp.path / "m.json")).contains("configHash"));
  EXPECT_EQ(shell("solve \"" + (tmp / "out/config.json") + "\" --mode bogus"), 2);
  EXPECT_EQ(shell("verify \"" + kSingleLoss + "\""), 0);
}
