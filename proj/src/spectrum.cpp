#include "edtc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace edtc {

namespace {

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT (decimation in time). Sizes are powers of
// two by construction.
void fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * kPi / double(len);
    const std::complex<double> wlen = std::polar(1.0, angle);
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w{1.0, 0.0};
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

std::size_t default_pad(std::size_t count) {
  std::size_t p = 1;
  while (p < count) p <<= 1;
  return 8 * p;
}

std::size_t default_window_halfwidth(std::size_t count, std::size_t pad) {
  const auto hw = std::size_t(
      std::lround(double(kWindowPrepadBins) * double(pad) / double(count)));
  return std::max<std::size_t>(1, hw);
}

SpectralResult spectrum_of(std::span<const double> mz, std::size_t pad_to,
                           std::optional<std::size_t> window_halfwidth) {
  const std::size_t count = mz.size();
  if (count < 8) {
    throw TooFewSamples("spectrum requires at least 8 samples");
  }
  if (pad_to == 0) pad_to = default_pad(count);
  if (!is_pow2(pad_to) || pad_to < count) {
    throw std::invalid_argument(
        "pad_to must be a power of two >= the sample count");
  }

  const double mean = std::accumulate(mz.begin(), mz.end(), 0.0) / count;
  double max_raw = 0.0, max_centered = 0.0;
  for (const double v : mz) {
    max_raw = std::max(max_raw, std::abs(v));
    max_centered = std::max(max_centered, std::abs(v - mean));
  }
  std::vector<std::complex<double>> buf(pad_to, {0.0, 0.0});
  // A constant series leaves only rounding dust after mean removal; treat
  // that as an exactly empty spectrum (keeps f scale-invariant).
  if (max_centered > 1e-12 * max_raw) {
    for (std::size_t i = 0; i < count; ++i) buf[i] = mz[i] - mean;
  }
  fft(buf);

  SpectralResult spec;
  spec.sample_count = count;
  spec.pad = pad_to;
  spec.amp = std::move(buf);
  spec.nu.resize(pad_to);
  spec.power.resize(pad_to);
  for (std::size_t k = 0; k < pad_to; ++k) {
    spec.nu[k] = double(k) / double(pad_to);
    spec.power[k] = std::norm(spec.amp[k]);
  }
  spec.f = crystalline_fraction(
      spec, window_halfwidth.value_or(default_window_halfwidth(count, pad_to)));
  spec.fwhm = peak_fwhm(spec);
  return spec;
}

SpectralResult spectrum(const StroboscopicSeries& series, std::size_t pad_to,
                        std::optional<std::size_t> window_halfwidth) {
  std::vector<double> mz;
  mz.reserve(series.samples.size());
  for (const Sample& s : series.samples) mz.push_back(s.m.mz);
  return spectrum_of(mz, pad_to, window_halfwidth);
}

double crystalline_fraction(const SpectralResult& spec,
                            std::size_t halfwidth_bins) {
  const std::size_t center = spec.pad / 2;
  const std::size_t lo = center - std::min(halfwidth_bins, center);
  const std::size_t hi = std::min(center + halfwidth_bins, spec.pad - 1);
  double num = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) num += spec.power[k];
  double den = 0.0;
  for (std::size_t k = 1; k < spec.pad; ++k) den += spec.power[k];
  if (den <= 0.0) return 0.0;
  return std::clamp(num / den, 0.0, 1.0);
}

std::size_t peak_bin(const SpectralResult& spec) {
  const auto lo = std::size_t(std::ceil(0.25 * double(spec.pad)));
  const auto hi = std::size_t(std::floor(0.75 * double(spec.pad)));
  std::size_t best = lo;
  for (std::size_t k = lo; k <= hi; ++k) {
    if (spec.power[k] > spec.power[best]) best = k;
  }
  return best;
}

std::optional<double> peak_fwhm(const SpectralResult& spec) {
  const std::size_t p = peak_bin(spec);
  const double peak = spec.power[p];
  std::vector<double> sorted(spec.power.begin() + 1, spec.power.end());
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  const double median = sorted[sorted.size() / 2];
  if (peak <= 0.0 || peak < 10.0 * median) return std::nullopt;

  const double half = 0.5 * peak;
  const auto& pw = spec.power;
  const auto& nu = spec.nu;

  std::size_t j = p;
  while (j > 0 && pw[j] > half) --j;
  if (pw[j] > half) return std::nullopt;  // no left crossing
  const double left =
      nu[j] + (nu[j + 1] - nu[j]) * (half - pw[j]) / (pw[j + 1] - pw[j]);

  j = p;
  while (j + 1 < spec.pad && pw[j] > half) ++j;
  if (pw[j] > half) return std::nullopt;  // no right crossing
  const double right =
      nu[j - 1] +
      (nu[j] - nu[j - 1]) * (pw[j - 1] - half) / (pw[j - 1] - pw[j]);

  return right - left;
}

}  // namespace edtc
