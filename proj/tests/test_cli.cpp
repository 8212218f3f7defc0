#include <cstdlib>
#include <doctest.h>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "pacekit/commands.hpp"

using namespace pacekit;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = PACEKIT_SCENARIO_DIR;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pacekit_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunRequest request(const std::string& scenario, const fs::path& out) {
  RunRequest r;
  r.scenario = kScenarios / scenario;
  r.out_dir = out.string();
  return r;
}

// Runs the real binary; returns its exit status and stderr.
std::pair<int, std::string> run_cli(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(PACEKIT_CLI) + " " + args + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

// Writes default.json with one field changed.
fs::path variant(const fs::path& dir, const std::string& pointer, const nlohmann::json& value,
                 const std::string& base = "default.json") {
  auto doc = load_scenario_json(kScenarios / base);
  if (value.is_null()) {
    const nlohmann::json::json_pointer ptr(pointer);
    doc[ptr.parent_pointer()].erase(ptr.back());
  } else {
    doc[nlohmann::json::json_pointer(pointer)] = value;
  }
  const fs::path path = dir / "scenario.json";
  std::ofstream(path) << doc.dump(2);
  return path;
}

}  // namespace

TEST_CASE("simulate writes both outputs") {
  const auto dir = fresh_dir("simulate");
  std::ostringstream log;
  auto req = request("default.json", dir);
  req.mode = "asap";
  CHECK(cmd_simulate(req, log) == kExitOk);
  const auto curve = slurp(dir / "spend_curve.csv");
  CHECK(curve.rfind("campaign_id,date,minute,recognized_spend,phase,throttle_rate\r\n", 0) == 0);
  const auto metrics = read_json(dir / "metrics.json");
  CHECK(metrics["mode"] == "asap");
  CHECK(metrics["campaigns"][0]["goal_hit"] == true);
}

TEST_CASE("missing daily_goal exits 2 and names the field") {
  const auto dir = fresh_dir("missing_goal");
  const auto path = variant(dir, "/campaigns/0/daily_goal", nullptr);
  const auto [code, err] = run_cli("simulate " + path.string() + " --out-dir " + dir.string(), dir);
  CHECK(code == kExitConfigError);
  CHECK(err.find("daily_goal") != std::string::npos);
}

TEST_CASE("reruns are byte identical") {
  const auto a = fresh_dir("rerun_a");
  const auto b = fresh_dir("rerun_b");
  std::ostringstream log;
  CHECK(cmd_simulate(request("default.json", a), log) == kExitOk);
  CHECK(cmd_simulate(request("default.json", b), log) == kExitOk);
  CHECK(slurp(a / "spend_curve.csv") == slurp(b / "spend_curve.csv"));
  CHECK(slurp(a / "metrics.json") == slurp(b / "metrics.json"));
}

TEST_CASE("seed flag changes the run") {
  const auto a = fresh_dir("seed_a");
  const auto b = fresh_dir("seed_b");
  std::ostringstream log;
  auto ra = request("default.json", a);
  auto rb = request("default.json", b);
  ra.seed = 1;
  rb.seed = 2;
  cmd_simulate(ra, log);
  cmd_simulate(rb, log);
  CHECK(slurp(a / "spend_curve.csv") != slurp(b / "spend_curve.csv"));
}

TEST_CASE("abtest with identical arms has zero deltas") {
  const auto dir = fresh_dir("abtest_degenerate");
  auto req = request("abtest_28.json", dir);
  req.days = 1;
  req.overrides = {"abtest.treatment.mode=traditional_ff", "abtest.treatment.start_fraction=0.85",
                   "synthetic_campaigns.count=6"};
  std::ostringstream log;
  REQUIRE(cmd_abtest(req, log) == kExitOk);
  std::istringstream rows(slurp(dir / "abtest.csv"));
  std::string line;
  std::getline(rows, line);
  int n = 0;
  while (std::getline(rows, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 11);
    CHECK(std::stod(cells[3]) == 0.0);
    CHECK(std::stod(cells[6]) == 0.0);
    ++n;
  }
  CHECK(n == 6);
  const auto summary = read_json(dir / "summary.json");
  CHECK(summary["mean_delta_live_hours"] == 0.0);
}

TEST_CASE("abtest on the 28-campaign scenario improves both metrics") {
  const auto dir = fresh_dir("abtest_28");
  std::ostringstream log;
  auto req = request("abtest_28.json", dir);
  req.days = 1;
  REQUIRE(cmd_abtest(req, log) == kExitOk);
  const auto agg = read_json(dir / "summary.json");
  CHECK(agg["campaigns"] == 28);
  CHECK(agg["mean_delta_live_hours"].get<double>() > 0.0);
  CHECK(agg["mean_delta_overdelivery"].get<double>() < 0.0);
}

TEST_CASE("abtest with no campaigns exits 2") {
  const auto dir = fresh_dir("abtest_empty");
  const auto path = variant(dir, "/campaigns", nlohmann::json::array());
  const auto [code, err] = run_cli("abtest " + path.string() + " --out-dir " + dir.string(), dir);
  CHECK(code == kExitConfigError);
  CHECK(err.find("campaigns") != std::string::npos);
}

TEST_CASE("one-point sweep matches simulate") {
  const auto sim = fresh_dir("sweep_point_sim");
  const auto sw = fresh_dir("sweep_point");
  std::ostringstream log;
  REQUIRE(cmd_simulate(request("default.json", sim), log) == kExitOk);
  auto req = request("default.json", sw);
  req.grid = {"transition_window_minutes=60"};
  REQUIRE(cmd_sweep(req, log) == kExitOk);

  const auto m = read_json(sim / "metrics.json")["campaigns"][0];
  std::istringstream rows(slurp(sw / "sweep.csv"));
  std::string header, row;
  std::getline(rows, header);
  std::getline(rows, row);
  CHECK(header == "transition_window_minutes,live_hours,overdelivery_rate,total_spend,goal_hit_rate\r");
  std::vector<std::string> cells;
  std::stringstream ss(row);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  REQUIRE(cells.size() == 5);
  CHECK(std::stod(cells[1]) == m["live_hours"].get<double>());
  CHECK(std::stod(cells[2]) == m["overdelivery_rate"].get<double>());
  CHECK(std::stoll(cells[3]) == m["total_spend"].get<std::int64_t>());
}

TEST_CASE("longer window never shortens live hours") {
  std::ostringstream log;
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const auto dir = fresh_dir("sweep_window");
    auto req = request("default.json", dir);
    req.seed = seed;
    req.grid = {"transition_window_minutes=0,60"};
    REQUIRE(cmd_sweep(req, log) == kExitOk);
    std::istringstream rows(slurp(dir / "sweep.csv"));
    std::string line;
    std::getline(rows, line);
    std::vector<double> hours;
    while (std::getline(rows, line)) {
      std::stringstream ss(line);
      std::string window, h;
      std::getline(ss, window, ',');
      std::getline(ss, h, ',');
      hours.push_back(std::stod(h));
    }
    REQUIRE(hours.size() == 2);
    CHECK(hours[1] >= hours[0]);
  }
}

TEST_CASE("invalid sweep grid exits 2") {
  const auto dir = fresh_dir("sweep_invalid");
  const auto [code, err] = run_cli("sweep " + (kScenarios / "sweep_window.json").string() +
                                       " --grid min_start=0.97 --out-dir " + dir.string(),
                                   dir);
  CHECK(code == kExitConfigError);
  CHECK(err.find("min_start") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "sweep.csv"));
}

TEST_CASE("unknown flags and files are config errors") {
  const auto dir = fresh_dir("bad_flags");
  CHECK(run_cli("simulate " + (kScenarios / "default.json").string() + " --bogus", dir).first ==
        kExitConfigError);
  CHECK(run_cli("simulate /nonexistent.json", dir).first == kExitConfigError);
}

TEST_CASE("csv quoting") {
  CHECK(csv_row({"a", "b,c", "say \"hi\""}) == "a,\"b,c\",\"say \"\"hi\"\"\"\r\n");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(20.0) == "20.0");
}

TEST_CASE("output directory precedence") {
  Scenario sc;
  RunRequest req;
  ::unsetenv("PACEKIT_OUT_DIR");
  CHECK(resolve_out_dir(req, sc) == fs::path("."));
  ::setenv("PACEKIT_OUT_DIR", "/tmp/env_dir", 1);
  CHECK(resolve_out_dir(req, sc) == fs::path("/tmp/env_dir"));
  sc.out_dir = "/tmp/scenario_dir";
  CHECK(resolve_out_dir(req, sc) == fs::path("/tmp/scenario_dir"));
  req.out_dir = "/tmp/flag_dir";
  CHECK(resolve_out_dir(req, sc) == fs::path("/tmp/flag_dir"));
  ::unsetenv("PACEKIT_OUT_DIR");
}
