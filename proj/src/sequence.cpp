#include "edtc/sequence.hpp"

#include <cmath>

namespace edtc {

namespace {

double mz_decay(const SystemParams& p, double mz0, double t) {
  const double e1 = std::exp(-t / p.t1);
  return p.m_eq * (1.0 - e1) + mz0 * e1;
}

double mx_decay(const SystemParams& p, double mx0, double t) {
  return mx0 * std::exp(-t / p.t2);
}

AffineMap segment_map(const SystemParams& p, const Segment& seg,
                      bool dissipative_pulse) {
  if (const auto* delay = std::get_if<DelaySegment>(&seg)) {
    return free_evolution_map(p, delay->duration);
  }
  const PulseSpec& pulse = std::get<PulseSegment>(seg).pulse;
  if (dissipative_pulse) {
    Superoperator gen = lindblad_superoperator(p);
    const double sign = pulse.theta() < 0.0 ? -1.0 : 1.0;
    gen.matrix += rotation_generator(pulse.axis(), sign * p.omega1).matrix;
    return exact_segment_map(gen, pulse.duration());
  }
  return rotation_map(pulse);
}

}  // namespace

double PulseSequence::period() const {
  double t = 0.0;
  for (const Segment& seg : segments) {
    if (const auto* delay = std::get_if<DelaySegment>(&seg)) {
      t += delay->duration;
    } else {
      t += std::get<PulseSegment>(seg).pulse.duration();
    }
  }
  return t;
}

double PulseSequence::tau() const {
  for (const Segment& seg : segments) {
    if (const auto* delay = std::get_if<DelaySegment>(&seg)) {
      return delay->duration;
    }
  }
  return 0.0;
}

const PulseSpec* PulseSequence::pulse() const {
  for (const Segment& seg : segments) {
    if (const auto* p = std::get_if<PulseSegment>(&seg)) return &p->pulse;
  }
  return nullptr;
}

PulseSequence make_sequence(double tau, const PulseSpec& pulse,
                            std::uint64_t cycles, const Magnetization& initial,
                            TimeUnit unit) {
  PulseSequence seq;
  seq.segments = {DelaySegment{tau}, PulseSegment{pulse}};
  seq.cycles = cycles;
  seq.initial = initial;
  seq.unit = unit;
  return seq;
}

AffineMap sequence_cycle_map(const SystemParams& p, const PulseSequence& seq,
                             bool dissipative_pulse) {
  AffineMap map = AffineMap::identity();
  for (const Segment& seg : seq.segments) {
    map = compose(segment_map(p, seg, dissipative_pulse), map);
  }
  return map;
}

StroboscopicSeries evolve(const SystemParams& p, const PulseSequence& seq,
                          bool dissipative_pulse) {
  const AffineMap cycle = sequence_cycle_map(p, seq, dissipative_pulse);
  const double period = seq.period();
  StroboscopicSeries series;
  series.params = p;
  series.sequence = seq;
  series.samples.reserve(seq.cycles + 1);
  Magnetization m = seq.initial;
  series.samples.push_back({0, 0.0, m});
  for (std::uint64_t n = 1; n <= seq.cycles; ++n) {
    m = cycle.apply(m);
    series.samples.push_back({n, double(n) * period, m});
  }
  return series;
}

TwoCycleSolution analytic_two_cycles(const SystemParams& p, double tau,
                                     double theta, double mz0) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double mz_tau = mz_decay(p, mz0, tau);

  TwoCycleSolution out;
  out.mx_T = mz_tau * s;
  out.mz_T = mz_tau * c;
  out.mx_T_tau = mx_decay(p, out.mx_T, tau);
  out.mz_T_tau = mz_decay(p, out.mz_T, tau);
  out.mx_2T = out.mx_T_tau * c + out.mz_T_tau * s;
  out.mz_2T = out.mz_T_tau * c - out.mx_T_tau * s;
  return out;
}

std::vector<TracePoint> intra_cycle_trace(const SystemParams& p,
                                          const PulseSequence& seq,
                                          int samples_per_segment) {
  if (samples_per_segment < 1) {
    throw Error("samples_per_segment must be >= 1");
  }
  std::vector<TracePoint> trace;
  trace.reserve(1 + seq.cycles * seq.segments.size() * samples_per_segment);
  Magnetization m = seq.initial;
  double t = 0.0;
  trace.push_back({t, m});
  for (std::uint64_t n = 0; n < seq.cycles; ++n) {
    for (const Segment& seg : seq.segments) {
      if (const auto* delay = std::get_if<DelaySegment>(&seg)) {
        for (int k = 1; k <= samples_per_segment; ++k) {
          const double dt = delay->duration * k / samples_per_segment;
          trace.push_back({t + dt, free_evolution_map(p, dt).apply(m)});
        }
        t += delay->duration;
        m = trace.back().m;
      } else {
        const PulseSpec& pulse = std::get<PulseSegment>(seg).pulse;
        for (int k = 1; k <= samples_per_segment; ++k) {
          const double frac = double(k) / samples_per_segment;
          const PulseSpec partial = PulseSpec::from_theta(
              pulse.axis(), pulse.theta() * frac, p.omega1);
          trace.push_back(
              {t + pulse.duration() * frac, rotation_map(partial).apply(m)});
        }
        t += pulse.duration();
        m = trace.back().m;
      }
    }
  }
  return trace;
}

}  // namespace edtc
