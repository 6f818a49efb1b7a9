#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "edtc/propagators.hpp"

namespace edtc {

enum class TimeUnit { t2, seconds };

struct DelaySegment {
  double duration = 0.0;
};
struct PulseSegment {
  PulseSpec pulse;
};
using Segment = std::variant<DelaySegment, PulseSegment>;

/// One drive period (a list of delay/pulse segments, canonically a single
/// delay followed by a single pulse), repeated `cycles` times from `initial`.
struct PulseSequence {
  std::vector<Segment> segments;
  std::uint64_t cycles = 1;
  Magnetization initial;
  TimeUnit unit = TimeUnit::t2;  // label for I/O; dynamics are unit-agnostic

  /// Sum of all segment durations.
  double period() const;
  /// Duration of the first delay segment (0 when there is none).
  double tau() const;
  /// First pulse segment, nullptr when there is none.
  const PulseSpec* pulse() const;
};

/// Canonical delay-then-pulse cycle.
PulseSequence make_sequence(double tau, const PulseSpec& pulse,
                            std::uint64_t cycles, const Magnetization& initial,
                            TimeUnit unit = TimeUnit::t2);

struct Sample {
  std::uint64_t n = 0;  // cycle index
  double t = 0.0;       // n * period
  Magnetization m;
};

/// Magnetization sampled once per drive period, including n = 0.
struct StroboscopicSeries {
  std::vector<Sample> samples;
  SystemParams params;
  PulseSequence sequence;
};

/// Composition of all segment propagators of one period, in order.
AffineMap sequence_cycle_map(const SystemParams& p, const PulseSequence& seq,
                             bool dissipative_pulse = false);

/// Evolves the initial state over seq.cycles periods, one map application per
/// cycle. The result has cycles + 1 samples.
StroboscopicSeries evolve(const SystemParams& p, const PulseSequence& seq,
                          bool dissipative_pulse = false);

/// Closed-form magnetization through the first two periods for the initial
/// state (0, 0, mz0), with no small-angle approximation.
struct TwoCycleSolution {
  double mx_T = 0.0, mz_T = 0.0;          // after the first pulse
  double mx_T_tau = 0.0, mz_T_tau = 0.0;  // after the second delay
  double mx_2T = 0.0, mz_2T = 0.0;        // after the second pulse
};
TwoCycleSolution analytic_two_cycles(const SystemParams& p, double tau,
                                     double theta, double mz0);

struct TracePoint {
  double t = 0.0;
  Magnetization m;
};

/// Dense rendering of the trajectory: each segment of each cycle is sampled
/// samples_per_segment times with the analytic segment maps. The point at
/// each cycle boundary coincides with the stroboscopic series.
std::vector<TracePoint> intra_cycle_trace(const SystemParams& p,
                                          const PulseSequence& seq,
                                          int samples_per_segment);

}  // namespace edtc
