// Runs the numbered acceptance criteria and prints one line per criterion.
// Exit status is nonzero when any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "inceprop/validation.hpp"

int main(int argc, char** argv) {
  inceprop::ValidationOptions options;
  for (int i = 1; i < argc; ++i) options.criteria.push_back(std::atoi(argv[i]));
  const auto results = inceprop::run_validation(options);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s\n", inceprop::format_result(r).c_str());
    if (!r.informational && !r.passed()) ++failed;
  }
  std::printf("%d of %d criteria failed\n", failed,
              static_cast<int>(options.criteria.empty() ? inceprop::kCriterionCount
                                                        : options.criteria.size()));
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
