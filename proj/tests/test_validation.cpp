#include <string>

#include "inceprop/errors.hpp"
#include "inceprop/validation.hpp"
#include "support.hpp"

using namespace inceprop;

TEST_CASE("suites") {
  CHECK(suite_criteria("acceptance").size() == 13);
  CHECK(suite_criteria("special-case") == std::vector<int>{1, 2});
  CHECK_ERROR_CODE(suite_criteria("everything"), ConfigInvalid);
}

TEST_CASE("verdicts and reporting") {
  CriterionResult ok;
  ok.id = 1;
  ok.key = "a";
  ok.checks.push_back({"err", 1e-9, "<=", 1e-8, true, false});
  ok.checks.push_back({"runtime_s", 0.25, "<=", 1.0, true, true});
  CriterionResult info;
  info.id = 1;
  info.key = "b";
  info.informational = true;
  info.checks.push_back({"err", 1.0, "<=", 1e-8, false, false});
  CHECK(ok.passed());
  CHECK_FALSE(info.passed());
  CHECK(all_passed({ok, info}));
  CHECK(format_result(ok).rfind("PASS 1 a: err = 1e-09 (<= 1e-08)", 0) == 0);
  CHECK(format_result(info).rfind("INFO 1 b:", 0) == 0);

  const auto j = to_json({ok, info});
  CHECK(j["passed"] == true);
  CHECK(j["criteria"][0]["checks"][0]["measured"] == 1e-9);
  // wall-clock numbers would make reports differ between identical runs
  CHECK_FALSE(j["criteria"][0]["checks"][1].contains("measured"));

  CriterionResult empty;
  CHECK_FALSE(empty.passed());
  CriterionResult bad = ok;
  bad.checks[0].passed = false;
  CHECK_FALSE(all_passed({bad}));
}

TEST_CASE("battery runs selected criteria with overridden tolerances") {
  ValidationOptions o;
  o.criteria = {2, 10};
  auto results = run_validation(o);
  REQUIRE(results.size() == 2);
  CHECK(results[0].id == 2);
  CHECK(results[1].id == 10);
  CHECK(all_passed(results));

  o.tolerances["green_coefficients"] = 1e-300;
  o.jobs = 2;
  results = run_validation(o);
  CHECK_FALSE(results[0].passed());
  CHECK(results[1].passed());

  o.tolerances.erase("gram");
  CHECK_ERROR_CODE(run_validation(o), InvalidArgument);
}
