#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "inceprop/errors.hpp"
#include "run_config.hpp"
#include "support.hpp"

using namespace inceprop;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_config() {
  return json::parse(R"({
    "model": {"model": "dpo", "omega": 1.0, "lambda": 0.5},
    "solve": {"t_max": 2.0, "points": 5},
    "green": {"times": [0.5], "kernel": {"points": 3}}
  })");
}

std::string diagnostic(const json& doc) {
  try {
    cli::parse_run_config(doc);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigInvalid);
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("inceprop_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config diagnostics carry field paths") {
  json doc = base_config();
  doc["model"].erase("omega");
  CHECK(diagnostic(doc).find("model.omega: missing required field") != std::string::npos);

  doc = base_config();
  doc["solve"]["tmax"] = 3;
  CHECK(diagnostic(doc).find("solve.tmax: unknown key") != std::string::npos);

  doc = base_config();
  doc["extra"] = 1;
  CHECK(diagnostic(doc).find("extra: unknown key") != std::string::npos);

  doc = base_config();
  doc["green"]["times"] = json::array({0.5, -1.0});
  CHECK(diagnostic(doc).find("green.times[1]") != std::string::npos);

  doc = base_config();
  doc["validate"] = {{"tolerances", {{"riccati", 1e-4}, {"ricatti", 1e-4}}}};
  CHECK(diagnostic(doc).find("validate.tolerances.ricatti: unknown key") != std::string::npos);

  doc = base_config();
  doc["propagate"] = {{"times", {1.0}}, {"method", "split_step"}};
  CHECK(diagnostic(doc).find("propagate.method") != std::string::npos);

  CHECK(diagnostic(json::array()).find("<root>: expected an object") != std::string::npos);
}

TEST_CASE("config values and defaults") {
  json doc = base_config();
  doc["validate"] = {{"suite", "special-case"}, {"tolerances", {{"riccati", 2e-5}}}};
  const cli::RunConfig c = cli::parse_run_config(doc);
  REQUIRE(c.model.has_value());
  CHECK(c.model->params()->pump_ratio() == 0.5);
  CHECK(c.solve.t_max == 2.0);
  CHECK(c.solve.rtol == 1e-10);
  CHECK(c.green.kernel.points == 3);
  CHECK(c.validate.tolerances.at("riccati") == 2e-5);
  CHECK(c.validate.tolerances.at("mehler") == 1e-10);
  CHECK(c.validate.suite == "special-case");
}

TEST_CASE("dotted overrides") {
  json doc = base_config();
  cli::apply_override(doc, "model.lambda=0.3");
  cli::apply_override(doc, "green.times.0=0.75");
  cli::apply_override(doc, "validate.suite=special-case");
  cli::apply_override(doc, "classify.orders=[8,16]");
  CHECK(doc["model"]["lambda"] == 0.3);
  CHECK(doc["green"]["times"][0] == 0.75);
  CHECK(doc["validate"]["suite"] == "special-case");
  CHECK(doc["classify"]["orders"].size() == 2);
  CHECK_ERROR_CODE(cli::apply_override(doc, "no_equals"), ConfigInvalid);
  CHECK_ERROR_CODE(cli::apply_override(doc, "green.times.9=1"), ConfigInvalid);
  CHECK_ERROR_CODE(cli::apply_override(doc, "model.lambda.x=1"), ConfigInvalid);
  CHECK_ERROR_CODE(cli::apply_override(doc, "a..b=1"), ConfigInvalid);
}

TEST_CASE("execute maps outcomes to exit codes") {
  std::ostringstream log, err;
  json doc = base_config();
  const fs::path out = scratch("green");
  CHECK(cli::execute(cli::Command::Green, doc, out, 1, log, err) == cli::kSuccess);
  CHECK(fs::exists(out / "coefficients.json"));
  const std::string csv = slurp(out / "kernel_slice.csv");
  CHECK(csv.rfind("t[time],x[length],y[length],re_G[length^-1],im_G[length^-1]\n", 0) == 0);

  doc["model"].erase("omega");
  CHECK(cli::execute(cli::Command::Green, doc, out, 1, log, err) == cli::kUsageError);
  CHECK(err.str().find("model.omega") != std::string::npos);

  // a caustic time is a module error, also exit 1
  json caustic = base_config();
  caustic["model"]["lambda"] = 0.0;
  caustic["green"]["times"] = {3.141592653589793};
  caustic["solve"]["atol"] = 1e-6;
  CHECK(cli::execute(cli::Command::Green, caustic, scratch("caustic"), 1, log, err) ==
        cli::kUsageError);

  json failing = base_config();
  failing["validate"] = {{"criteria", {2}}, {"tolerances", {{"green_coefficients", 1e-300}}}};
  const fs::path vout = scratch("validate");
  CHECK(cli::execute(cli::Command::Validate, failing, vout, 1, log, err) ==
        cli::kValidationFailed);
  const json report = json::parse(slurp(vout / "validation.json"));
  CHECK(report["passed"] == false);
  CHECK(report["criteria"][0]["id"] == 2);
}

TEST_CASE("sweeps are expanded and deterministic") {
  json doc = base_config();
  doc["sweep"] = {{"parameter", "model.lambda"}, {"values", {0.1, 0.4, 0.7}}};
  std::ostringstream log1, log2, err;
  const fs::path a = scratch("sweep_a"), b = scratch("sweep_b");
  CHECK(cli::execute(cli::Command::SolveMu, doc, a, 1, log1, err) == cli::kSuccess);
  CHECK(cli::execute(cli::Command::SolveMu, doc, b, 3, log2, err) == cli::kSuccess);
  CHECK(log1.str() == log2.str());
  for (const char* dir : {"sweep_000", "sweep_001", "sweep_002"}) {
    CHECK(slurp(a / dir / "mu.csv") == slurp(b / dir / "mu.csv"));
    CHECK(!slurp(a / dir / "mu.csv").empty());
  }
  CHECK(slurp(a / "sweep_000" / "mu.csv") != slurp(a / "sweep_001" / "mu.csv"));

  doc["sweep"]["values"] = {0.1, "oops"};
  CHECK(cli::execute(cli::Command::SolveMu, doc, scratch("sweep_bad"), 1, log1, err) ==
        cli::kUsageError);
  CHECK(err.str().find("model.lambda: expected a number") != std::string::npos);
}

TEST_CASE("command-line binary") {
  const fs::path dir = scratch("binary");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "bad.json") << R"({"model": {"model": "dpo", "lambda": 0.2}})";
    std::ofstream(dir / "good.json") << base_config().dump();
  }
  auto run = [&](const std::string& args) {
    const std::string cmd = std::string(INCEPROP_CLI_PATH) + " " + args + " > " +
                            (dir / "stdout.txt").string() + " 2> " + (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };
  CHECK(run("solve-mu --config " + (dir / "bad.json").string() + " --out " + (dir / "o").string()) == 1);
  CHECK(slurp(dir / "stderr.txt").find("model.omega: missing required field") != std::string::npos);
  CHECK(run("classify-ince --config " + (dir / "good.json").string() + " --out " +
            (dir / "c").string()) == 0);
  const json rep = json::parse(slurp(dir / "c" / "periodicity.json"));
  CHECK(rep["pi_pair_possible"] == false);
  CHECK(rep["two_pi_pair_possible"] == false);
  CHECK(run("validate --config " + (dir / "good.json").string() +
            " --set validate.suite=special-case --out " + (dir / "v").string()) == 0);
  CHECK(run("nonsense") == 1);
  CHECK(run("green --config " + (dir / "missing.json").string()) == 1);
  CHECK(run("green --config " + (dir / "good.json").string() + " --jobs 0") == 1);
}
