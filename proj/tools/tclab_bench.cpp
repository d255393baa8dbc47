#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include <omp.h>

#include "tclab/consistency.hpp"
#include "tclab/duality.hpp"
#include "tclab/lm_measures.hpp"

using namespace tclab;

namespace {

double seconds(const std::function<Verdict(bool)>& run, bool parallel, bool& holds) {
  auto start = std::chrono::steady_clock::now();
  holds = run(parallel).holds;
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void row(const std::string& name, const std::function<Verdict(bool)>& run) {
  bool serial_holds = false;
  bool parallel_holds = false;
  double ts = seconds(run, false, serial_holds);
  double tp = seconds(run, true, parallel_holds);
  std::printf("%-34s %10.3f %10.3f %8.2fx  %s\n", name.c_str(), ts, tp, ts / tp,
              serial_holds == parallel_holds ? "same verdict" : "VERDICT MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t samples = argc > 1 ? std::stoul(argv[1]) : 2000;
  std::printf("threads=%d samples=%zu\n", omp_get_max_threads(), samples);
  std::printf("%-34s %10s %10s %9s\n", "sweep", "serial[s]", "omp[s]", "speedup");
  auto opts = [samples](bool parallel) {
    CheckOptions o;
    o.samples = samples;
    o.seed = 7;
    o.parallel = parallel;
    o.shrink = false;
    return o;
  };
  row("semiweak dglr accept", [&](bool p) { return check_semiweak_tc(dglr_measure(), Direction::Accept, opts(p)); });
  row("semiweak draroc:0.5 reject",
      [&](bool p) { return check_semiweak_tc(draroc_measure(0.5), Direction::Reject, opts(p)); });
  row("weak cexp accept", [&](bool p) { return check_weak_tc(cond_expectation_measure(), Direction::Accept, opts(p)); });
  row("mu expectation cexp full", [&](bool p) {
    return check_mu_tc(cond_expectation_measure(), expectation_rule(), Direction::Accept, Scope::Full, opts(p));
  });
  row("robust weak cexp", [&](bool p) { return robust_weak_check(cond_expectation_measure(), opts(p)); });
  return 0;
}
