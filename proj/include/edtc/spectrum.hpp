#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "edtc/sequence.hpp"

namespace edtc {

/// Halfwidth (in pre-padding bins) of the default subharmonic window used
/// for the crystalline fraction.
inline constexpr int kWindowPrepadBins = 2;

/// 8 times the next power of two at or above count.
std::size_t default_pad(std::size_t count);

/// The default window halfwidth, in padded bins.
std::size_t default_window_halfwidth(std::size_t count, std::size_t pad);

/// Spectrum of the stroboscopic M_z series. nu runs over [0, 1) in units of
/// cycles^-1, so the subharmonic response sits at nu = 1/2.
struct SpectralResult {
  std::vector<double> nu;
  std::vector<std::complex<double>> amp;
  std::vector<double> power;  // |amp|^2
  std::size_t sample_count = 0;  // before zero-padding
  std::size_t pad = 0;
  double f = 0.0;                // crystalline fraction, default window
  std::optional<double> fwhm;    // nullopt = no subharmonic peak
};

/// DFT of the mean-removed M_z(nT) sequence, zero-padded to pad_to (a power
/// of two >= the sample count; 0 selects default_pad). Requires >= 8
/// samples (TooFewSamples). f and fwhm are filled in with the default (or
/// supplied) window.
SpectralResult spectrum(const StroboscopicSeries& series,
                        std::size_t pad_to = 0,
                        std::optional<std::size_t> window_halfwidth = {});

/// Same, from a bare M_z sample vector.
SpectralResult spectrum_of(std::span<const double> mz, std::size_t pad_to = 0,
                           std::optional<std::size_t> window_halfwidth = {});

/// Power within halfwidth_bins of nu = 1/2 over total power (DC excluded),
/// clamped to [0, 1].
double crystalline_fraction(const SpectralResult& spec,
                            std::size_t halfwidth_bins);

/// Width of the dominant peak in nu within [1/4, 3/4], from half-power
/// crossings found by linear interpolation. nullopt when the peak power is
/// below 10x the median bin power.
std::optional<double> peak_fwhm(const SpectralResult& spec);

/// Bin index of the dominant peak in nu within [1/4, 3/4].
std::size_t peak_bin(const SpectralResult& spec);

}  // namespace edtc
