// Runs the full acceptance suite and prints one line per criterion.
#include <cstdio>
#include <cstring>

#include "gedge/acceptance.hpp"

int main(int argc, char** argv) {
  gedge::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) opt.tier = gedge::Tier::quick;
  }
  int failed = 0;
  gedge::run_acceptance(opt, [&](const gedge::CriterionResult& r) {
    std::printf("%s\n", gedge::format_result(r).c_str());
    std::fflush(stdout);
    failed += !r.passed;
  });
  std::printf("%d of 11 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
