#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs the tool with stderr dropped; the binary path comes from the test
// environment so the suite works from any build directory.
RunResult run(const std::string& args) {
  const char* bin = std::getenv("BETASHIFT_BIN");
  REQUIRE(bin != nullptr);
  const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  std::array<char, 4096> buf;
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    result.output.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string temp_path(const std::string& name) {
  const char* dir = std::getenv("TMPDIR");
  return std::string(dir ? dir : "/tmp") + "/" + name;
}

}  // namespace

TEST_CASE("expand prints itinerary digits and validates the point") {
  const RunResult golden = run(
      "expand --beta 1.6180339887 --alpha 0.1909830056 --x 0.5 --n 9 "
      "--side minus");
  CHECK(golden.exit_code == 0);
  CHECK(golden.output == "011011011\n");

  // At the critical point the minus branch takes the 0 digit first.
  const RunResult tie = run(
      "expand --beta 1.6180339887 --alpha 0.1909830056 --x 0.3090169944 "
      "--n 2 --side minus");
  CHECK(tie.exit_code == 0);
  CHECK(tie.output == "01\n");

  CHECK(run("expand --beta 1.5 --alpha 0.1 --x 1.5 --n 4 --side minus")
            .exit_code == 1);
  CHECK(run("expand --beta 1.5 --alpha 0.1 --x -0.25 --n 4 --side minus")
            .exit_code == 1);
  CHECK(run("expand --beta 1.5 --alpha 0.1 --x 1/2 --n 1 --side sideways")
            .exit_code == 1);

  const RunResult as_json = run(
      "--json expand --beta 1.6180339887 --alpha 0.1909830056 --x 1/2 "
      "--n 9 --side minus");
  CHECK(as_json.exit_code == 0);
  CHECK(json::parse(as_json.output)["digits"] == "011011011");
}

TEST_CASE("kneading prints prefixes and refuses undetectable periods") {
  const RunResult prefix =
      run("kneading --beta 1.7234871 --alpha 0.2 --n 8");
  CHECK(prefix.exit_code == 0);
  CHECK(prefix.output == "lower: 01111010\nupper: 10010011\n");

  // A generic decimal point has no detectable period at this precision, so
  // detect mode must fail loudly instead of inventing one.
  CHECK(run("kneading --beta 1.7234871 --alpha 0.2").exit_code == 2);
}

TEST_CASE("check reports admissibility as JSON") {
  const RunResult good = run("check \"(011)\" \"(100)\"");
  CHECK(good.exit_code == 0);
  const json report = json::parse(good.output);
  CHECK(report["admissible"] == true);
  CHECK(report["periodically_admissible"] == true);
  CHECK(report["entropy"].get<double>() == doctest::Approx(0.4812).epsilon(1e-3));

  const json swapped = json::parse(run("check \"(01)\" \"(10)\"").output);
  CHECK(swapped["admissible"] == false);
  CHECK(swapped["cond2"] == false);
  CHECK(swapped["entropy"].get<double>() == 0.0);

  const json reversed = json::parse(run("check \"(1)\" \"(0)\"").output);
  CHECK(reversed["cond1"] == false);

  CHECK(run("check \"(2)\" \"(0)\"").exit_code == 1);
}

TEST_CASE("classify emits a status and approx routes boundary points to it") {
  const json open = json::parse(
      run("classify --beta 1.7234871 --alpha 0").output);
  CHECK(open["status"] == "undetermined");
  CHECK(open["max_len"] == 512);

  const RunResult routed = run("approx --beta 1.7234871 --alpha 0");
  CHECK(routed.exit_code == 0);
  CHECK(json::parse(routed.output)["status"] == "undetermined");
}

TEST_CASE("approx certifies an interior point within the tolerance") {
  const RunResult result =
      run("approx --beta 1.7234871 --alpha 0.2 --eps 0.01");
  CHECK(result.exit_code == 0);
  const json approx = json::parse(result.output);
  CHECK(std::stod(approx["err_beta"].get<std::string>()) < 0.01);
  CHECK(std::stod(approx["err_alpha"].get<std::string>()) < 0.01);
  const double b = std::stod(approx["target"]["b"].get<std::string>());
  CHECK(b > 1.7234871);
  CHECK(b < 1.7334871);
  CHECK(approx["certificate"]["forbidden"].is_array());
}

TEST_CASE("scan writes deterministic CSV and SVG files") {
  const std::string csv_a = temp_path("betashift_cli_scan_a.csv");
  const std::string csv_b = temp_path("betashift_cli_scan_b.csv");
  const std::string svg = temp_path("betashift_cli_scan.svg");
  const std::string grid =
      "scan --nbeta 2 --nalpha 2 --beta-min 1.4 --beta-max 1.8 --eps 0.01 ";

  const RunResult first =
      run("--json " + grid + "--csv " + csv_a + " --svg " + svg + " --threads 2");
  CHECK(first.exit_code == 0);
  const json summary = json::parse(first.output);
  CHECK(summary["cells"] == 4);
  CHECK(summary["finite_type"] == 4);

  CHECK(run(grid + "--csv " + csv_b + " --threads 1").exit_code == 0);
  const std::string text = slurp(csv_a);
  CHECK(text == slurp(csv_b));
  CHECK(text.substr(0, text.find('\n')) ==
        "beta,alpha,status,n_used,period_lower,period_upper,b,a,entropy,"
        "err_beta,err_alpha");
  const std::string picture = slurp(svg);
  CHECK(picture.find("<svg") == 0);
  CHECK(picture.find("<polygon") != std::string::npos);

  std::remove(csv_a.c_str());
  std::remove(csv_b.c_str());
  std::remove(svg.c_str());
}

TEST_CASE("config files fill in flags without overriding them") {
  const std::string cfg = temp_path("betashift_cli.cfg");
  {
    std::ofstream out(cfg);
    out << "bits=192\njson=true\n";
  }
  const std::string tail =
      " expand --beta 1.6180339887 --alpha 0.1909830056 --x 1/2 --n 9 "
      "--side minus";

  const RunResult from_config = run("--config " + cfg + tail);
  CHECK(from_config.exit_code == 0);
  CHECK(json::parse(from_config.output)["digits"] == "011011011");

  // The explicit flag beats the file but the file still supplies json=true.
  const RunResult overridden = run("--config " + cfg + " --bits 128" + tail);
  CHECK(overridden.exit_code == 0);
  CHECK(json::parse(overridden.output)["digits"] == "011011011");

  std::remove(cfg.c_str());
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run("").exit_code == 1);
  CHECK(run("nonsense").exit_code == 1);
  CHECK(run("expand --beta 1.5").exit_code == 1);
  CHECK(run("classify --beta 2.5 --alpha 0").exit_code == 1);
  CHECK(run("classify --beta 1.5 --alpha 0.7").exit_code == 1);
  CHECK(run("--help").exit_code == 0);
}
