#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qmp/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qmp::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  const auto d = fs::temp_directory_path() / "qmp_cli_test";
  fs::create_directories(d);
  return d;
}

fs::path write_config(const std::string& name, const std::string& body) {
  const auto p = scratch_dir() / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("mp-eval") {
  const auto r = run({"mp-eval", "--y", "0.25", "--x", "0.25"});
  CHECK(r.code == 0);
  CHECK(r.out == "y,x,density,cdf\n0.25,0.25,0,0\n");

  const auto s = run({"mp-eval", "--y", "1", "--x", "0", "--x", "1", "--v", "0.5"});
  CHECK(s.code == 0);
  CHECK(s.out.rfind("y,x,density,cdf,v,stieltjes_re,stieltjes_im\n", 0) == 0);
  CHECK(std::count(s.out.begin(), s.out.end(), '\n') == 3);
}

TEST_CASE("bai-bound") {
  const auto r = run({"bai-bound", "--y", "0.25", "--n", "400", "--seed", "3", "--v", "0.1"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "n,p,y_p,v,term_stieltjes,term_tail,term_smoothing,prefactor,total,observed_ks,holds");
  CHECK(row.rfind("400,100,0.25,0.1,", 0) == 0);
  CHECK(row.substr(row.size() - 2) == ",1");
}

TEST_CASE("usage and configuration errors exit with 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"mp-eval", "--x", "1"}).code == 1);
  CHECK(run({"mp-eval", "--y", "-1", "--x", "1"}).code == 1);
  CHECK(run({"rate-sweep", "--config", (scratch_dir() / "missing.json").string()}).code == 1);

  const auto bad = write_config("bad.json", R"({"distribution": "q_gaussian", "y": 0.25, "n_grid": [200, 100],
    "replications": 1, "seed": 1, "v": "auto", "out": "-"})");
  const auto r = run({"rate-sweep", "--config", bad.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("n_grid") != std::string::npos);

  const auto junk = write_config("junk.json", "{ not json");
  CHECK(run({"lambda-max", "--config", junk.string()}).code == 1);
  CHECK(run({"reflection", "--p", "2", "--n", "3"}).code == 1);
  CHECK(run({"bai-bound", "--y", "0.25", "--n", "100", "--v", "abc"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("rate-sweep output and summary") {
  const auto dir = scratch_dir();
  const auto csv = dir / "rs.csv";
  const auto cfg = write_config("rs.json", R"({"distribution": "q_rademacher", "y": 0.25, "n_grid": [40, 80],
    "replications": 3, "seed": 5, "v": "auto", "out": ")" + csv.string() + R"("})");
  REQUIRE(run({"rate-sweep", "--config", cfg.string()}).code == 0);
  const std::string first = slurp(csv);
  CHECK(first.rfind("n,p,y_p,a_n,mean_ks,ks_std,pooled_ks,bound_thm1,bound_thm2\n", 0) == 0);
  CHECK(std::count(first.begin(), first.end(), '\n') == 3);

  const auto summary = nlohmann::json::parse(slurp(fs::path(csv.string() + ".json")));
  CHECK(summary["command"] == "rate-sweep");
  CHECK(summary["version"] == std::string(qmp::version_string()));
  CHECK(summary["config"]["seed"] == 5);
  CHECK(summary["wall_clock_seconds"].contains("simulate"));
  CHECK(summary["results"].contains("slope_mean_ks"));

  REQUIRE(run({"rate-sweep", "--config", cfg.string(), "--threads", "3"}).code == 0);
  CHECK(slurp(csv) == first);

  const auto other = dir / "other.csv";
  REQUIRE(run({"rate-sweep", "--config", cfg.string(), "--out", other.string(), "--summary",
               (dir / "s.json").string()})
              .code == 0);
  CHECK(slurp(other) == first);
  CHECK(fs::exists(dir / "s.json"));
}

TEST_CASE("variance, lambda-max and reflection tables") {
  const auto cfg = write_config("v.json", R"({"distribution": "q_gaussian", "y": 0.25, "n_grid": [40, 80],
    "replications": 3, "seed": 5, "v": 0.3, "out": "-"})");
  const auto v = run({"variance", "--config", cfg.string()});
  REQUIRE(v.code == 0);
  CHECK(v.out.rfind("n,p,u,v,mean_re,mean_im,var_re,var_im,low_confidence,", 0) == 0);
  CHECK(std::count(v.out.begin(), v.out.end(), '\n') == 3);

  const auto l = run({"lambda-max", "--config", cfg.string(), "--margin", "0.3"});
  REQUIRE(l.code == 0);
  CHECK(l.out.rfind("n,p,y_p,max_lambda,threshold,exceedances,replications\n", 0) == 0);

  const auto r = run({"reflection", "--p", "6", "--n", "3", "--draws", "2", "--seed", "4"});
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
  CHECK(r.out.find(",6,6\n") != std::string::npos);
}

TEST_CASE("numerical failures exit with 2") {
  // The closed-form transform overflows for an absurd ratio.
  const auto r = run({"mp-eval", "--y", "1e200", "--x", "1", "--v", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("overflow") != std::string::npos);
}

TEST_CASE("binary entry point") {
  const char* exe = std::getenv("QMP_CLI");
  if (exe == nullptr) return;
  const std::string cmd = std::string(exe) + " mp-eval --y 0.25 --x 0.25 > " +
                          (scratch_dir() / "bin.csv").string();
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(slurp(scratch_dir() / "bin.csv") == "y,x,density,cdf\n0.25,0.25,0,0\n");
  CHECK(std::system((std::string(exe) + " bogus 2>/dev/null").c_str()) != 0);
}
