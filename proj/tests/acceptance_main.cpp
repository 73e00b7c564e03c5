// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <pnuc/acceptance.hpp>

#include <cstdio>
#include <cstdlib>
#include <future>
#include <string>

int main(int argc, char** argv) {
  pnuc::AcceptanceOptions opts;
  if (argc > 1) opts.seed = std::strtoull(argv[1], nullptr, 10);

  bool all = true;
  const auto print = [&](const pnuc::CriterionResult& r) {
    all = all && r.passed;
    std::printf("[%s] %2d %s: %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
  };
  // Determinism: a second, concurrent run must reproduce the report byte for byte.
  auto second = std::async(std::launch::async, [&opts] { return pnuc::run_acceptance(opts); });
  const auto first = pnuc::run_acceptance(opts, print);
  const std::string report = pnuc::acceptance_report(first, opts).dump(2);
  const std::string again = pnuc::acceptance_report(second.get(), opts).dump(2);
  pnuc::CriterionResult det{13, "determinism", report == again,
                            std::to_string(report.size()) + " report bytes compared", {}};
  print(det);
  return all ? 0 : 1;
}
