#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "kernelkit_cli/cli.hpp"

using json = nlohmann::json;

namespace {

struct RunResult {
  int status;
  std::string out;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream os;
  int status = kk::cli::dispatch(args, os);
  return {status, os.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("kernel eval example") {
  auto r = run({"kernel", "eval", "--spec", R"({"variant":"fbm","H":0.3})",
                "--t", "1", "--s", "0.5"});
  CHECK(r.status == 0);
  json j = json::parse(r.out);
  CHECK(j["value"] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kernel psd: passing certificate") {
  auto r = run({"kernel", "psd", "--spec",
                R"({"variant":"bifbm","H":0.6,"alpha":0.5})", "--grid",
                "0.1:2:8"});
  CHECK(r.status == 0);
  json j = json::parse(r.out);
  CHECK(j["passed"] == true);
  CHECK(j["min_eigenvalue"].get<double>() >= -1e-10);
}

TEST_CASE("kernel gram csv output") {
  auto r = run({"--output", "csv", "kernel", "gram", "--spec",
                R"({"variant":"krein","r":{"form":"abs"}})", "--grid",
                "1:2:2"});
  CHECK(r.status == 0);
  CHECK(r.out == "1,2\n2,2\n2,4\n");
}

TEST_CASE("transform bound rejects t0 below 1/2 with nonzero exit") {
  auto r = run({"transform", "bound", "--H", "0.25", "--t0", "0.4"});
  CHECK(r.status != 0);
  json j = json::parse(r.out);
  CHECK(j["error"]["kind"] == "DomainError");
}

TEST_CASE("usage errors are machine-readable and exit 2") {
  auto r = run({"kernel", "eval", "--spec", "not json", "--t", "1", "--s", "1"});
  CHECK(r.status == 2);
  json j = json::parse(r.out);
  CHECK(j["error"]["kind"] == "UsageError");

  auto r2 = run({"decomp", "compare", "--spec", R"({"variant":"fbm","H":0.3})",
                 "--method", "martingale", "--grid", "0:1:3"});
  CHECK(r2.status == 2);

  auto r3 = run({"kernel", "gram", "--spec", R"({"variant":"fbm","H":0.3})",
                 "--grid", "1:2"});
  CHECK(r3.status == 2);
}

TEST_CASE("measure check and gamma subcommands") {
  auto r = run({"measure", "check", "--measure", R"({"family":"power_law","c":1,"p":0})",
                "--role", "bernstein"});
  CHECK(r.status == 0);
  json j = json::parse(r.out);
  CHECK(j["admissible"] == false);

  auto g = run({"gamma", "--z", "5"});
  CHECK(json::parse(g.out)["value"] == doctest::Approx(24.0).epsilon(1e-12));

  auto gg = run({"gamma", "--z", "2", "--mu", "1", "--measure",
                 R"({"family":"exp_over_u"})"});
  CHECK(json::parse(gg.out)["value"] == doctest::Approx(0.5).epsilon(1e-8));

  auto bad = run({"gamma", "--z", "1", "--mu", "0"});
  CHECK(bad.status == 1);
  CHECK(json::parse(bad.out)["error"]["kind"] == "NonIntegrable");
}

TEST_CASE("decomp compare and rkhs check emit reports") {
  auto r = run({"decomp", "compare", "--spec", R"({"variant":"fbm","H":0.3})",
                "--method", "schoenberg-a", "--grid", "0.25:2:4"});
  CHECK(r.status == 0);
  json j = json::parse(r.out);
  CHECK(j["max_rel_dev"].get<double>() <= 1e-8);

  auto k = run({"rkhs", "check", "--measure",
                R"({"family":"power_law","c":0.15915494309189535,"p":0})",
                "--grid", "1:2:2", "--tol", "1e-6"});
  CHECK(k.status == 0);
  json kj = json::parse(k.out);
  CHECK(kj["passed"] == true);
}

TEST_CASE("sample: deterministic output, metadata in json mode") {
  std::vector<std::string> args = {"sample", "--spec",
                                   R"({"variant":"fbm","H":0.5})", "--grid",
                                   "0.5:2:3", "--paths", "4", "--seed", "99"};
  auto a = run(args);
  auto b = run(args);
  CHECK(a.status == 0);
  CHECK(a.out == b.out);  // byte-identical
  json j = json::parse(a.out);
  CHECK(j["seed"] == 99);
  CHECK(j["paths"].size() == 4);
  CHECK(j["jitter_used"] == 0.0);

  auto csv = run({"--output", "csv", "sample", "--spec",
                  R"({"variant":"fbm","H":0.5})", "--grid", "0.5:2:3",
                  "--paths", "2", "--seed", "99"});
  CHECK(csv.status == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 2);
}

TEST_CASE("KK_TOL overrides the default tolerance") {
  setenv("KK_TOL", "1e-06", 1);
  auto r = run({"kernel", "psd", "--spec", R"({"variant":"fbm","H":0.4})",
                "--grid", "0.5:2:4"});
  CHECK(r.status == 0);
  CHECK(json::parse(r.out)["tolerance_used"] == 1e-6);

  // explicit --tol wins over the environment
  auto r2 = run({"kernel", "psd", "--spec", R"({"variant":"fbm","H":0.4})",
                 "--grid", "0.5:2:4", "--tol", "1e-8"});
  CHECK(json::parse(r2.out)["tolerance_used"] == 1e-8);

  setenv("KK_TOL", "pickles", 1);
  auto bad = run({"gamma", "--z", "2"});
  CHECK(bad.status == 2);
  unsetenv("KK_TOL");
}

TEST_CASE("every emitted json parses back") {
  for (auto args : std::vector<std::vector<std::string>>{
           {"kernel", "eval", "--spec", R"({"variant":"log"})", "--t", "2",
            "--s", "1"},
           {"transform", "bound", "--H", "0.25", "--t0", "1"},
           {"gamma", "--z", "0.5"},
           {"kernel", "psd", "--spec", R"({"variant":"fbm","H":0.4})",
            "--grid", "0.5:2:4"}}) {
    auto r = run(args);
    CHECK(r.status == 0);
    CHECK_NOTHROW((void)json::parse(r.out));
  }
}

}  // TEST_SUITE
