// Acceptance suite driver: one PASS/FAIL line per criterion.
//   acceptance            run all
//   acceptance --only N   run criterion N
//   acceptance -v         also print metrics
#include <cstdio>
#include <cstring>
#include <string>

#include "vacblow/verify.hpp"

using namespace vacblow;

int main(int argc, char** argv) {
  int only = 0;
  bool verbose = false;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc)
      only = std::stoi(argv[++i]);
    else if (!std::strcmp(argv[i], "-v"))
      verbose = true;
    else {
      std::fprintf(stderr, "usage: acceptance [--only N] [-v]\n");
      return 1;
    }
  }
  if (only < 0 || only > kCheckCount) {
    std::fprintf(stderr, "criterion must lie in 1..%d\n", kCheckCount);
    return 1;
  }
  int failed = 0;
  for (int id = 1; id <= kCheckCount; ++id) {
    if (only && id != only) continue;
    const auto r = run_check(id);
    failed += !r.pass;
    std::printf("[%s] %2d %-26s (%.2f s)\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
    for (const auto& n : r.notes) std::printf("       %s\n", n.c_str());
    if (verbose || !r.pass)
      for (const auto& [k, v] : r.metrics) std::printf("       %s = %.10g\n", k.c_str(), v);
  }
  return failed ? 2 : 0;
}
