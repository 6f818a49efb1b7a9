// Times the phase-diagram sweep on the serial reference path (jobs=1)
// against the OpenMP pool, and checks that the two produce bit-identical
// grids while it is at it.

#include <omp.h>

#include <cstring>
#include <iostream>
#include <vector>

#include "edtc/sweep.hpp"

using namespace edtc;

int main(int argc, char** argv) {
  const int nx = argc > 1 ? std::atoi(argv[1]) : 41;
  const int ny = argc > 2 ? std::atoi(argv[2]) : 25;
  const std::uint64_t cycles = argc > 3 ? std::strtoull(argv[3], nullptr, 10)
                                        : 200;

  RawParams raw;
  raw.t1 = 1000.0;
  raw.t2 = 1.0;
  raw.m_eq = 0.8;
  const SystemParams base = validate_params(raw);

  std::vector<double> deltas, taus;
  for (int i = 0; i < nx; ++i) {
    deltas.push_back((-0.5 + double(i) / (nx - 1)) * kPi);
  }
  for (int i = 0; i < ny; ++i) {
    taus.push_back(1.0 + 39.0 * double(i) / (ny > 1 ? ny - 1 : 1));
  }

  SweepOptions opt;
  opt.cycles = cycles;

  std::cout << "grid " << nx << " x " << ny << ", " << cycles
            << " cycles per cell\n";

  opt.jobs = 1;
  double t0 = omp_get_wtime();
  const PhaseDiagram serial = sweep_delta_tau(base, deltas, taus, opt);
  const double serial_s = omp_get_wtime() - t0;
  std::cout << "serial reference: " << serial_s << " s\n";

  const int max_threads = omp_get_max_threads();
  for (int jobs = 2; jobs <= max_threads; jobs *= 2) {
    opt.jobs = jobs;
    t0 = omp_get_wtime();
    const PhaseDiagram parallel = sweep_delta_tau(base, deltas, taus, opt);
    const double parallel_s = omp_get_wtime() - t0;
    const bool same =
        std::memcmp(serial.f.data(), parallel.f.data(),
                    serial.f.size() * sizeof(double)) == 0;
    std::cout << "openmp x" << jobs << ":       " << parallel_s << " s  ("
              << serial_s / parallel_s << "x speedup, results "
              << (same ? "bit-identical" : "DIFFER") << ")\n";
    if (!same) return 1;
  }
  return 0;
}
