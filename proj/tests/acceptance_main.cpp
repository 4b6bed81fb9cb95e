#include <cstdio>
#include <cstdlib>

#include "magprop/acceptance.hpp"

int main(int argc, char** argv) {
  using namespace magprop;
  std::vector<CriterionResult> rows;
  auto print = [](const CriterionResult& r) {
    std::printf("%s\n", format_result(r).c_str());
    std::fflush(stdout);
  };
  if (argc > 1) {
    for (int i = 1; i < argc; ++i)
      for (auto& r : run_criterion(std::atoi(argv[i]))) {
        print(r);
        rows.push_back(r);
      }
  } else {
    rows = run_acceptance(print);
  }
  int failed = 0;
  for (const auto& r : rows)
    if (!r.informational && !r.passed) ++failed;
  std::printf("%d of %d criteria failed\n", failed, argc > 1 ? argc - 1 : 10);
  return failed == 0 ? 0 : 1;
}
