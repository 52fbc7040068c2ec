// Acceptance suite: runs every verification criterion at its pinned
// tolerance and prints one pass/fail line each. Exit status 0 only when all
// criteria hold.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "ordgrowth/verification.hpp"

int main(int argc, char** argv) {
  ordgrowth::verification_options opt;
  opt.jobs = 2;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
      opt.seed = std::strtoull(argv[++i], nullptr, 10);
    else if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc)
      opt.jobs = static_cast<unsigned>(std::strtoul(argv[++i], nullptr, 10));
  }

  ordgrowth::verification_report rep = ordgrowth::run_verification(opt);
  for (const auto& c : rep.criteria) {
    std::printf("[%s] criterion %2d: %-32s (%zu checks, %.2fs)\n", c.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), c.details.records.size(), c.seconds);
    if (!c.pass) {
      for (const auto& r : c.details.records) {
        if (r.pass) continue;
        std::printf("      failed: %s lhs=%.17g rhs=%.17g %s\n", r.name.c_str(), r.lhs, r.rhs,
                    r.note.c_str());
      }
    }
  }
  std::printf("%s\n", rep.all_pass() ? "ACCEPTANCE: all criteria passed"
                                     : "ACCEPTANCE: FAILURES PRESENT");
  return rep.all_pass() ? 0 : 1;
}
