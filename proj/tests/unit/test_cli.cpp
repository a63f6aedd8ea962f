#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "portnav/trajectory_log.hpp"

namespace {

const std::string kCli = PORTNAV_CLI;
const std::string kConfigs = PORTNAV_CONFIG_DIR;
const std::string kTiny =
    " --set agent.hidden=16,16 --set agent.batch_size=16 --set agent.warmup_steps=100 --set trainer.log_every=100"
    " --set trainer.checkpoint_every=200";

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::string& args, const std::filesystem::path& dir) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = kCli + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = fixture::read_file(out);
  r.err = fixture::read_file(err);
  return r;
}

std::string near_goal() { return " --config " + kConfigs + "/near_goal.ini"; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with code 2") {
  const auto dir = fixture::temp_dir("cli_usage");
  CHECK(run("", dir).code == 2);
  CHECK(run("frobnicate", dir).code == 2);
  CHECK(run("train", dir).code == 2);
  CHECK(run("train --config /nonexistent.ini", dir).code == 2);
  CHECK(run("audit --set vessel.nonsense=1", dir).code == 2);
  CHECK(run("sweep --param drag --set agent.type=scripted", dir).code == 2);
  CHECK(run("sweep --param mass --grid 1,2 --linear 1,2,3 --set agent.type=scripted", dir).code == 2);
  CHECK(run("evaluate" + near_goal(), dir).code == 2);
  CHECK(run("--help", dir).code == 0);
}

TEST_CASE("audit prints the hash and canonical config") {
  const auto dir = fixture::temp_dir("cli_audit");
  const Run a = run("audit" + near_goal(), dir);
  REQUIRE(a.code == 0);
  CHECK(a.out.rfind("# config_hash=", 0) == 0);
  CHECK(a.out.find("spawn_mode = near_goal") != std::string::npos);
  CHECK(run("audit" + near_goal(), dir).out == a.out);
  CHECK(run("audit" + near_goal() + " --set vessel.mass=1", dir).out != a.out);
}

TEST_CASE("a zero-step train writes the initial checkpoint") {
  const auto dir = fixture::temp_dir("cli_zero");
  const Run r = run("train" + near_goal() + kTiny + " --steps 0 --out " + (dir / "run").string(), dir);
  CHECK(r.code == 0);
  CHECK(std::filesystem::exists(dir / "run" / "checkpoint_0000000000.pnck"));
  CHECK_FALSE(std::filesystem::exists(dir / "run" / "metrics.csv"));
}

TEST_CASE("training twice with one worker gives identical artifacts") {
  const auto dir = fixture::temp_dir("cli_det");
  const std::string base = "train" + near_goal() + kTiny + " --steps 400 --workers 1 --seed 9 --out ";
  REQUIRE(run(base + (dir / "a").string(), dir).code == 0);
  REQUIRE(run(base + (dir / "b").string(), dir).code == 0);
  CHECK(fixture::read_file(dir / "a" / "metrics.csv") == fixture::read_file(dir / "b" / "metrics.csv"));
  CHECK(fixture::same_learner_state(dir / "a" / "checkpoint_0000000400.pnck", dir / "b" / "checkpoint_0000000400.pnck"));

  const std::string ckpt = (dir / "a" / "checkpoint_0000000400.pnck").string();
  const Run e1 = run("evaluate --checkpoint " + ckpt + " --episodes 3", dir);
  const Run e2 = run("evaluate" + near_goal() + kTiny + " --checkpoint " + ckpt + " --episodes 3", dir);
  CHECK(e1.code == 0);
  CHECK(e1.out == e2.out);
  CHECK(e1.out.find("\"mean_return\"") != std::string::npos);
  CHECK(run("evaluate" + near_goal() + " --checkpoint " + ckpt, dir).code == 1);
}

TEST_CASE("sweep writes a CSV that covers the grid endpoints") {
  const auto dir = fixture::temp_dir("cli_sweep");
  const auto csv = dir / "turn.csv";
  const Run r = run("sweep" + near_goal() + " --set agent.type=scripted --param turn_rate --log 7,700,5 --episodes 2"
                    " --csv " + csv.string() + " --plot " + (dir / "turn.svg").string(), dir);
  REQUIRE(r.code == 0);
  const std::string text = fixture::read_file(csv);
  CHECK(text == r.out);
  CHECK(text.find("\nturn_rate,7,") != std::string::npos);
  CHECK(text.find("\nturn_rate,700,") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2 + 5);
  CHECK(std::filesystem::exists(dir / "turn.svg"));

  const Run d = run("sweep" + near_goal() + " --set agent.type=scripted --param mass --episodes 1 --set trainer.out=" +
                    (dir / "out").string(), dir);
  REQUIRE(d.code == 0);
  const std::string def = fixture::read_file(dir / "out" / "sweep_mass.csv");
  CHECK(def.find("\nmass,43750,") != std::string::npos);
  CHECK(def.find("\nmass,700000,") != std::string::npos);
}

TEST_CASE("rollouts replay cleanly and tampering is detected") {
  const auto dir = fixture::temp_dir("cli_replay");
  const std::string cfg = " --config " + kConfigs + "/default.ini --set agent.type=scripted";
  const auto log = dir / "run.jsonl";
  REQUIRE(run("rollout" + cfg + " --episodes 3 --seed 5 --log " + log.string() + " --scene " +
                  (dir / "scene.json").string() + " --svg " + (dir / "run.svg").string(), dir)
              .code == 0);
  const Run ok = run("replay" + cfg + " " + log.string(), dir);
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("replay ok: 3 episodes", 0) == 0);

  // Perturb one logged pose by one ulp.
  portnav::TrajectoryLog parsed = portnav::read_trajectory_log(log);
  REQUIRE(parsed.episodes[0].steps.size() > 5);
  std::string text = fixture::read_file(log);
  std::istringstream in(text);
  std::ostringstream edited;
  int step_lines = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.find("\"type\":\"step\"") != std::string::npos && ++step_lines == 5) {
      const auto k = line.find("\"x\":");
      REQUIRE(k != std::string::npos);
      const auto end = line.find_first_of(",}", k);
      const double x = std::stod(line.substr(k + 4, end - k - 4));
      std::ostringstream v;
      v.precision(17);
      v << std::nextafter(x, 1e9);
      line = line.substr(0, k + 4) + v.str() + line.substr(end);
    }
    edited << line << "\n";
  }
  std::ofstream(dir / "bad.jsonl") << edited.str();
  const Run bad = run("replay" + cfg + " " + (dir / "bad.jsonl").string(), dir);
  CHECK(bad.code == 1);
  CHECK(bad.err.find("divergence in episode 0 at step 5 (pose)") != std::string::npos);

  const Run dt = run("replay" + cfg + " --set vessel.dt=0.2 " + log.string(), dir);
  CHECK(dt.code == 1);
  CHECK(dt.err.find("config hash mismatch") != std::string::npos);

  CHECK(run("replay" + cfg + " " + (dir / "missing.jsonl").string(), dir).code == 2);
}

TEST_CASE("scene generation writes JSON and SVG") {
  const auto dir = fixture::temp_dir("cli_scene");
  REQUIRE(run("scene --seed 3 --json " + (dir / "s.json").string() + " --svg " + (dir / "s.svg").string(), dir).code ==
          0);
  CHECK(fixture::read_file(dir / "s.svg").rfind("<svg", 0) == 0);
  CHECK(fixture::read_file(dir / "s.json").find("\"schema_version\"") != std::string::npos);
}

}
