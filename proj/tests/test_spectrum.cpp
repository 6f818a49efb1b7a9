#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <random>

#include "edtc/spectrum.hpp"

using namespace edtc;

namespace {

SystemParams params(double t1, double t2, double m_eq,
                    double omega1 = kDefaultOmega1) {
  RawParams raw;
  raw.t1 = t1;
  raw.t2 = t2;
  raw.m_eq = m_eq;
  raw.omega1 = omega1;
  return validate_params(raw);
}

StroboscopicSeries series_from(const std::vector<double>& mz) {
  StroboscopicSeries s;
  s.params = params(100.0, 1.0, 0.8);
  for (std::size_t n = 0; n < mz.size(); ++n) {
    s.samples.push_back({n, double(n), {0.0, 0.0, mz[n]}});
  }
  return s;
}

// Brute-force DFT oracle, independent of the radix-2 path under test.
std::vector<std::complex<double>> dft(const std::vector<double>& x,
                                      std::size_t pad) {
  std::vector<std::complex<double>> out(pad);
  for (std::size_t k = 0; k < pad; ++k) {
    std::complex<double> sum = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
      sum += x[n] * std::polar(1.0, -2.0 * kPi * double(k) * double(n) /
                                        double(pad));
    }
    out[k] = sum;
  }
  return out;
}

StroboscopicSeries run(double t1, double tau, double delta,
                       std::uint64_t cycles, double mz0) {
  const SystemParams p = params(t1, 1.0, 0.8);
  const PulseSpec pulse = PulseSpec::from_delta(Axis::y, delta, p.omega1);
  return evolve(p, make_sequence(tau, pulse, cycles, {0.0, 0.0, mz0}));
}

}  // namespace

TEST_CASE("radix-2 transform agrees with the brute-force DFT") {
  std::mt19937 rng(2);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> mz(37);
  for (double& v : mz) v = gauss(rng);
  const SpectralResult spec = spectrum(series_from(mz), 64);

  const double mean = std::accumulate(mz.begin(), mz.end(), 0.0) / mz.size();
  std::vector<double> centered(mz);
  for (double& v : centered) v -= mean;
  const auto oracle = dft(centered, 64);
  for (std::size_t k = 0; k < 64; ++k) {
    CHECK(std::abs(spec.amp[k] - oracle[k]) <= 1e-12);
  }
}

TEST_CASE("alternating series: all power in the subharmonic bin") {
  std::vector<double> mz(256);
  for (std::size_t n = 0; n < mz.size(); ++n) mz[n] = (n % 2 == 0) ? 1.0 : -1.0;
  // no padding: pad_to equals the sample count
  const SpectralResult spec = spectrum(series_from(mz), 256);
  CHECK(spec.nu[peak_bin(spec)] == 0.5);
  CHECK(spec.f == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(spec.fwhm.has_value());
  // transform-limited line, at most 2 bins wide
  CHECK(*spec.fwhm <= 2.0 / 256.0);
}

TEST_CASE("constant series: empty spectrum, no peak") {
  const SpectralResult spec = spectrum(series_from(std::vector<double>(64, 0.37)));
  CHECK(spec.f == 0.0);
  CHECK(!spec.fwhm.has_value());
  for (const double p : spec.power) CHECK(p <= 1e-24);
}

TEST_CASE("mean removal empties the DC bin") {
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss(1.5, 0.3);  // strong DC component
  std::vector<double> mz(100);
  for (double& v : mz) v = gauss(rng);
  const SpectralResult spec = spectrum(series_from(mz));
  CHECK(std::abs(spec.amp[0]) <= 1e-11);
}

TEST_CASE("Parseval holds on every spectrum") {
  std::mt19937 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> mz(51 + 40 * trial % 300);
    for (double& v : mz) v = gauss(rng);
    const SpectralResult spec = spectrum(series_from(mz));
    const double mean =
        std::accumulate(mz.begin(), mz.end(), 0.0) / mz.size();
    double time_power = 0.0;
    for (const double v : mz) time_power += (v - mean) * (v - mean);
    const double freq_power =
        std::accumulate(spec.power.begin(), spec.power.end(), 0.0);
    CHECK(freq_power == doctest::Approx(double(spec.pad) * time_power)
                            .epsilon(1e-9));
  }
}

TEST_CASE("preconditions: sample count and pad size") {
  CHECK_THROWS_AS(spectrum(series_from(std::vector<double>(7, 1.0))),
                  TooFewSamples);
  CHECK_THROWS_AS(spectrum(series_from(std::vector<double>(16, 1.0)), 24),
                  std::invalid_argument);
  CHECK_THROWS_AS(spectrum(series_from(std::vector<double>(16, 1.0)), 8),
                  std::invalid_argument);
}

TEST_CASE("crystalline fraction is scale invariant") {
  std::vector<double> mz(201);
  std::mt19937 rng(13);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t n = 0; n < mz.size(); ++n) {
    mz[n] = std::pow(-1.0, double(n)) * std::exp(-double(n) / 60.0) +
            0.05 * gauss(rng);
  }
  const SpectralResult base = spectrum(series_from(mz));
  for (const double k : {2.0, 0.5, -3.0, 1e-3}) {
    std::vector<double> scaled(mz);
    for (double& v : scaled) v *= k;
    const SpectralResult s = spectrum(series_from(scaled));
    CHECK(s.f == doctest::Approx(base.f).epsilon(1e-12));
  }
}

TEST_CASE("white-noise crystalline fraction matches the window fraction") {
  std::mt19937 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> fs;
  for (int seed = 0; seed < 100; ++seed) {
    std::vector<double> mz(201);
    for (double& v : mz) v = gauss(rng);
    fs.push_back(spectrum(series_from(mz)).f);
  }
  const double mean = std::accumulate(fs.begin(), fs.end(), 0.0) / fs.size();
  double var = 0.0;
  for (const double f : fs) var += (f - mean) * (f - mean);
  const double sd = std::sqrt(var / fs.size());

  const std::size_t pad = default_pad(201);
  const std::size_t hw = default_window_halfwidth(201, pad);
  const double expected = double(2 * hw + 1) / double(pad - 1);
  CHECK(std::abs(mean - expected) <= 3.0 * sd / std::sqrt(double(fs.size())));
}

TEST_CASE("perfect-drive run peaks at the subharmonic with a thin line") {
  const SpectralResult spec = spectrum(run(100.0, 10.0, 0.0, 200, -0.72));
  CHECK(std::abs(spec.nu[peak_bin(spec)] - 0.5) <= 1.0 / double(spec.pad));
  REQUIRE(spec.fwhm.has_value());
  // decay envelope sets the width: FWHM ~ (tau/T1)/pi
  CHECK(*spec.fwhm == doctest::Approx(0.1 / kPi).epsilon(0.02));
}

TEST_CASE("FWHM scales as 1/T1 under a perfect drive") {
  std::vector<double> widths;
  for (const double t1 : {50.0, 100.0, 200.0}) {
    const SpectralResult spec = spectrum(run(t1, 10.0, 0.0, 2000, -0.72));
    REQUIRE(spec.fwhm.has_value());
    widths.push_back(*spec.fwhm);
  }
  CHECK(widths[1] / widths[0] == doctest::Approx(0.5).epsilon(0.10));
  CHECK(widths[2] / widths[1] == doctest::Approx(0.5).epsilon(0.10));
}

TEST_CASE("miscalibrated short-delay run splits the subharmonic peak") {
  // seconds-unit analogue: T1 = 7.57 s, T2 = 0.6 s, tau = 25 ms
  const SystemParams p = params(7.57, 0.6, 0.8, 104929.19);
  const double delta = 0.0674 * kPi;
  const PulseSpec pulse = PulseSpec::from_delta(Axis::y, delta, p.omega1);
  const SpectralResult spec =
      spectrum(evolve(p, make_sequence(0.025, pulse, 200, {0.0, 0.0, -0.72})));

  const double nu_hi = (kPi + delta) / (2.0 * kPi);
  std::size_t hi = spec.pad / 2 + 1, lo = spec.pad / 4;
  for (std::size_t k = spec.pad / 2 + 1; k <= 3 * spec.pad / 4; ++k) {
    if (spec.power[k] > spec.power[hi]) hi = k;
  }
  for (std::size_t k = spec.pad / 4; k < spec.pad / 2; ++k) {
    if (spec.power[k] > spec.power[lo]) lo = k;
  }
  CHECK(std::abs(spec.nu[hi] - nu_hi) <= 1.0 / double(spec.pad));
  CHECK(std::abs(spec.nu[lo] - (1.0 - nu_hi)) <= 1.0 / double(spec.pad));
}

TEST_CASE("synthetic Lorentzian line recovers its FWHM") {
  SpectralResult spec;
  spec.pad = 2048;
  spec.sample_count = 256;
  const double gamma = 0.01;  // half width at half maximum
  for (std::size_t k = 0; k < spec.pad; ++k) {
    const double nu = double(k) / double(spec.pad);
    spec.nu.push_back(nu);
    const double d = nu - 0.5;
    spec.power.push_back(1.0 / (d * d + gamma * gamma));
    spec.amp.push_back({std::sqrt(spec.power.back()), 0.0});
  }
  spec.power[0] = 0.0;  // DC not part of the line
  const auto width = peak_fwhm(spec);
  REQUIRE(width.has_value());
  CHECK(std::abs(*width - 2.0 * gamma) <= 2.0 / double(spec.pad));
}

TEST_CASE("FWHM does not depend on the initial magnetization") {
  std::vector<double> widths;
  for (const double frac : {-0.9, -0.5, 0.3}) {
    const SpectralResult spec =
        spectrum(run(100.0, 10.0, 0.05 * kPi, 200, frac * 0.8));
    REQUIRE(spec.fwhm.has_value());
    widths.push_back(*spec.fwhm);
  }
  const double lo = *std::min_element(widths.begin(), widths.end());
  const double hi = *std::max_element(widths.begin(), widths.end());
  CHECK((hi - lo) / lo <= 0.01);
}

TEST_CASE("crystalline fraction is even in delta") {
  for (const double d : {0.05, 0.15, 0.3}) {
    const SpectralResult plus = spectrum(run(1000.0, 5.0, d * kPi, 200, -0.72));
    const SpectralResult minus =
        spectrum(run(1000.0, 5.0, -d * kPi, 200, -0.72));
    CHECK(plus.f == doctest::Approx(minus.f).epsilon(1e-9));
  }
}

TEST_CASE("deep subharmonic corner has f above 0.9") {
  const SpectralResult spec = spectrum(run(1000.0, 5.0, 0.0, 200, -0.72));
  CHECK(spec.f > 0.9);
}
