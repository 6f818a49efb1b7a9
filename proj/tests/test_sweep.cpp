#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "edtc/sweep.hpp"

using namespace edtc;

namespace {

SystemParams params(double t1, double t2, double m_eq) {
  RawParams raw;
  raw.t1 = t1;
  raw.t2 = t2;
  raw.m_eq = m_eq;
  return validate_params(raw);
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("single-cell sweep equals the direct computation") {
  const SystemParams base = params(100.0, 1.0, 0.8);
  SweepOptions opt;
  opt.cycles = 120;
  opt.jobs = 1;
  const std::vector<double> delta{0.05 * kPi};
  const std::vector<double> tau{10.0};
  const PhaseDiagram grid = sweep_delta_tau(base, delta, tau, opt);
  REQUIRE(grid.f.size() == 1);

  const PulseSpec pulse = PulseSpec::from_delta(Axis::y, delta[0], base.omega1);
  const PulseSequence seq =
      make_sequence(tau[0], pulse, opt.cycles, {0.0, 0.0, -0.9 * base.m_eq});
  const SpectralResult direct = spectrum(evolve(base, seq));
  CHECK(grid.at(0, 0) == direct.f);
}

TEST_CASE("sweeps are bit-identical across worker counts") {
  const SystemParams base = params(800.0, 1.0, 0.8);
  std::vector<double> deltas, taus;
  for (int i = 0; i < 9; ++i) deltas.push_back((-0.4 + 0.1 * i) * kPi);
  for (int i = 0; i < 5; ++i) taus.push_back(2.0 + 4.0 * i);

  SweepOptions opt;
  opt.cycles = 150;
  opt.jobs = 1;
  const PhaseDiagram serial = sweep_delta_tau(base, deltas, taus, opt);
  for (const int jobs : {2, 3, 8}) {
    opt.jobs = jobs;
    const PhaseDiagram parallel = sweep_delta_tau(base, deltas, taus, opt);
    CHECK(bitwise_equal(serial.f, parallel.f));
    CHECK(parallel.errors.empty());
  }
}

TEST_CASE("failed cells carry NaN markers and ordered error records") {
  const SystemParams base = params(100.0, 1.0, 0.8);
  std::vector<double> deltas{0.0, 0.1};
  // ratio 0.3 makes t2 > 2 t1, an invalid parameter set
  std::vector<double> ratios{0.3, 100.0};
  SweepOptions opt;
  opt.cycles = 60;
  opt.jobs = 2;
  const PhaseDiagram grid = sweep_delta_ratio(base, deltas, ratios, 5.0, opt);
  REQUIRE(grid.errors.size() == 2);
  CHECK(grid.errors[0].row == 0);
  CHECK(grid.errors[0].col == 0);
  CHECK(grid.errors[1].col == 1);
  CHECK(std::isnan(grid.at(0, 0)));
  CHECK(std::isnan(grid.at(0, 1)));
  CHECK(!std::isnan(grid.at(1, 0)));
  CHECK(!std::isnan(grid.at(1, 1)));
}

TEST_CASE("phase structure: subharmonic locking needs small delta and slow relaxation") {
  const SystemParams base = params(100.0, 1.0, 0.8);
  std::vector<double> deltas{0.0, 0.3 * kPi};
  std::vector<double> ratios{10.0, 1000.0};
  SweepOptions opt;
  opt.cycles = 200;
  opt.jobs = 0;  // environment / OpenMP default
  const PhaseDiagram grid = sweep_delta_ratio(base, deltas, ratios, 5.0, opt);

  const double locked = grid.at(1, 0);   // delta 0, ratio 1000
  const double broken = grid.at(0, 1);   // delta 0.3 pi, ratio 10
  CHECK(locked >= 0.9);
  CHECK(broken <= 0.3);
  // monotone in both directions from the locked corner
  CHECK(locked > grid.at(0, 0));
  CHECK(locked > grid.at(1, 1));
}

TEST_CASE("longer delays tolerate larger pulse errors") {
  const SystemParams base = params(1000.0, 1.0, 0.8);
  std::vector<double> deltas{0.15 * kPi};
  std::vector<double> taus{2.0, 20.0};
  SweepOptions opt;
  opt.cycles = 200;
  opt.jobs = 1;
  const PhaseDiagram grid = sweep_delta_tau(base, deltas, taus, opt);
  CHECK(grid.at(1, 0) > grid.at(0, 0));
}

TEST_CASE("lifetime against delay: single point and the increasing trend") {
  const SystemParams p = params(1000.0, 1.0, 0.8);
  SweepOptions opt;
  opt.cycles = 3000;
  opt.jobs = 1;

  const std::vector<double> single{10.0};
  const auto one = lifetime_vs_tau(p, 0.1 * kPi, single, opt);
  REQUIRE(one.size() == 1);
  CHECK(one[0].tau == 10.0);
  REQUIRE(one[0].lifetime_cycles.has_value());

  const std::vector<double> taus{5.0, 10.0, 20.0};
  const auto pts = lifetime_vs_tau(p, 0.1 * kPi, taus, opt);
  double prev_time = 0.0;
  for (const LifetimePoint& pt : pts) {
    REQUIRE(pt.lifetime_cycles.has_value());
    const double in_time = *pt.lifetime_cycles * pt.period;
    CHECK(in_time > prev_time);
    prev_time = in_time;
  }
}

TEST_CASE("resolve_jobs honors explicit requests") {
  CHECK(resolve_jobs(3) == 3);
  CHECK(resolve_jobs(1) == 1);
  CHECK(resolve_jobs(0) >= 1);
}
