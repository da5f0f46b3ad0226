// Serial reference vs OpenMP spectrum build. The parallel path must produce
// bit-identical count tables; this binary checks that while timing both.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "slopegrowth/spectrum.hpp"

using namespace slopegrowth;

namespace {

double time_build(const ProductGroupSpec& spec, int l_max, int jobs,
                  SlopeSpectrum& out) {
  BuildOptions opts;
  opts.jobs = jobs;
  const auto t0 = std::chrono::steady_clock::now();
  out = build_spectrum(spec, l_max, Binning::angular(90), 0, opts);
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int l_max = argc > 1 ? std::atoi(argv[1]) : 9;
  const int jobs = static_cast<int>(std::thread::hardware_concurrency());

  std::printf("%-12s %5s %10s %10s %8s %s\n", "group", "lmax", "serial_s",
              "parallel_s", "speedup", "match");
  for (const char* name : {"example31", "example41", "example51"}) {
    const ProductGroupSpec spec = make_preset(name);
    SlopeSpectrum serial, parallel;
    const double ts = time_build(spec, l_max, 1, serial);
    const double tp = time_build(spec, l_max, jobs, parallel);
    const bool match = serial == parallel;
    std::printf("%-12s %5d %10.3f %10.3f %7.2fx %s\n", name, l_max, ts, tp,
                ts / tp, match ? "yes" : "NO");
    if (!match) return 1;
  }
  return 0;
}
