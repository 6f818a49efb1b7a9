#include "edtc/sweep.hpp"

#include <omp.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>

namespace edtc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Magnetization initial_state(const SystemParams& p, const SweepOptions& opt) {
  if (opt.init_mz) return {0.0, 0.0, *opt.init_mz};
  return {0.0, 0.0, opt.init_mz_frac * p.m_eq};
}

double cell_fraction(const SystemParams& p, double tau, double delta,
                     const SweepOptions& opt) {
  const PulseSpec pulse = PulseSpec::from_delta(Axis::y, delta, p.omega1);
  const PulseSequence seq =
      make_sequence(tau, pulse, opt.cycles, initial_state(p, opt));
  const StroboscopicSeries series = evolve(p, seq, opt.dissipative_pulse);
  return spectrum(series, opt.pad_to, opt.window_halfwidth).f;
}

PhaseDiagram run_grid(AxisSpec x, AxisSpec y, const SweepOptions& opt,
                      const std::function<double(double, double)>& value) {
  PhaseDiagram grid;
  grid.x = std::move(x);
  grid.y = std::move(y);
  const std::size_t nx = grid.x.values.size();
  const std::size_t ny = grid.y.values.size();
  grid.f.assign(nx * ny, kNaN);
  std::vector<std::string> messages(nx * ny);

  run_cells(nx * ny, opt.jobs, [&](std::size_t i) {
    const double xv = grid.x.values[i % nx];
    const double yv = grid.y.values[i / nx];
    try {
      grid.f[i] = value(xv, yv);
    } catch (const std::exception& e) {
      messages[i] = e.what();
    }
  });

  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (!messages[i].empty()) {
      grid.errors.push_back({i / nx, i % nx, messages[i]});
    }
  }
  return grid;
}

}  // namespace

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  if (const char* env = std::getenv("EDTC_JOBS")) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), value);
    if (ec == std::errc() && value > 0) return value;
  }
  return omp_get_max_threads();
}

void run_cells(std::size_t count, int jobs,
               const std::function<void(std::size_t)>& cell) {
  const int workers = resolve_jobs(jobs);
  std::vector<std::exception_ptr> failures(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        cell(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  } else {
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (long long i = 0; i < (long long)count; ++i) {
      try {
        cell(std::size_t(i));
      } catch (...) {
        failures[std::size_t(i)] = std::current_exception();
      }
    }
  }
  // Rethrow the lowest-index failure so both paths report the same error.
  for (const std::exception_ptr& e : failures) {
    if (e) std::rethrow_exception(e);
  }
}

PhaseDiagram sweep_delta_ratio(const SystemParams& base,
                               std::span<const double> deltas,
                               std::span<const double> ratios, double tau,
                               const SweepOptions& options) {
  AxisSpec x{"delta", {deltas.begin(), deltas.end()}};
  AxisSpec y{"t1_over_t2", {ratios.begin(), ratios.end()}};
  return run_grid(std::move(x), std::move(y), options,
                  [&base, tau, &options](double delta, double ratio) {
                    RawParams raw;
                    raw.t2 = base.t2;
                    raw.t1 = ratio * base.t2;
                    raw.m_eq = base.m_eq;
                    raw.omega1 = base.omega1;
                    const SystemParams p = validate_params(raw);
                    return cell_fraction(p, tau, delta, options);
                  });
}

PhaseDiagram sweep_delta_tau(const SystemParams& base,
                             std::span<const double> deltas,
                             std::span<const double> taus,
                             const SweepOptions& options) {
  AxisSpec x{"delta", {deltas.begin(), deltas.end()}};
  AxisSpec y{"tau", {taus.begin(), taus.end()}};
  return run_grid(std::move(x), std::move(y), options,
                  [&base, &options](double delta, double tau) {
                    return cell_fraction(base, tau, delta, options);
                  });
}

std::vector<LifetimePoint> lifetime_vs_tau(const SystemParams& p, double delta,
                                           std::span<const double> taus,
                                           const SweepOptions& options) {
  std::vector<LifetimePoint> points(taus.size());
  run_cells(taus.size(), options.jobs, [&](std::size_t i) {
    const double tau = taus[i];
    const PulseSpec pulse = PulseSpec::from_delta(Axis::y, delta, p.omega1);
    const PulseSequence seq =
        make_sequence(tau, pulse, options.cycles, initial_state(p, options));
    const SpectralResult spec =
        spectrum(evolve(p, seq, options.dissipative_pulse), options.pad_to,
                 options.window_halfwidth);
    points[i].tau = tau;
    points[i].period = seq.period();
    if (spec.fwhm) points[i].lifetime_cycles = 1.0 / *spec.fwhm;
  });
  return points;
}

std::vector<std::pair<double, double>> fwhm_vs_delta(
    const SystemParams& base, std::span<const double> deltas, double tau,
    const SweepOptions& options) {
  std::vector<std::pair<double, double>> points(deltas.size());
  run_cells(deltas.size(), options.jobs, [&](std::size_t i) {
    const PulseSpec pulse =
        PulseSpec::from_delta(Axis::y, deltas[i], base.omega1);
    const PulseSequence seq =
        make_sequence(tau, pulse, options.cycles, initial_state(base, options));
    const SpectralResult spec =
        spectrum(evolve(base, seq, options.dissipative_pulse), options.pad_to,
                 options.window_halfwidth);
    points[i] = {deltas[i], spec.fwhm.value_or(kNaN)};
  });
  return points;
}

}  // namespace edtc
