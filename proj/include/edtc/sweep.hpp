#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edtc/spectrum.hpp"

namespace edtc {

/// Resolves a worker count: jobs > 0 is taken as-is; jobs <= 0 falls back to
/// the EDTC_JOBS environment variable, then to the OpenMP default.
int resolve_jobs(int jobs);

/// Runs `cell(i)` for i in [0, count). jobs == 1 uses the plain serial loop
/// (the reference path); jobs > 1 uses the OpenMP pool. The cell function
/// must be pure and write only to its own output slot, which makes the two
/// paths bit-identical. Exceptions must not escape `cell`.
void run_cells(std::size_t count, int jobs,
               const std::function<void(std::size_t)>& cell);

struct AxisSpec {
  std::string name;
  std::vector<double> values;
};

struct CellError {
  std::size_t row = 0;
  std::size_t col = 0;
  std::string message;
};

/// Crystalline fraction over a 2-d parameter grid. Failed cells hold NaN in
/// f and carry a row-major-ordered entry in errors.
struct PhaseDiagram {
  AxisSpec x;  // columns
  AxisSpec y;  // rows
  std::vector<double> f;  // row-major, y.values.size() x x.values.size()
  std::vector<CellError> errors;

  double at(std::size_t row, std::size_t col) const {
    return f[row * x.values.size() + col];
  }
};

struct SweepOptions {
  std::uint64_t cycles = 200;
  /// Initial M_z as a fraction of m_eq (the conventional -0.9), unless
  /// init_mz pins an absolute value.
  double init_mz_frac = -0.9;
  std::optional<double> init_mz;
  std::size_t pad_to = 0;  // 0 = default_pad
  std::optional<std::size_t> window_halfwidth;
  int jobs = 0;
  bool dissipative_pulse = false;
};

/// f over (delta, T1/T2) at fixed tau. base supplies t2, m_eq and omega1;
/// t1 is ratio * t2 per row and t_phi is re-derived.
PhaseDiagram sweep_delta_ratio(const SystemParams& base,
                               std::span<const double> deltas,
                               std::span<const double> ratios, double tau,
                               const SweepOptions& options);

/// f over (delta, tau) at fixed base parameters.
PhaseDiagram sweep_delta_tau(const SystemParams& base,
                             std::span<const double> deltas,
                             std::span<const double> taus,
                             const SweepOptions& options);

struct LifetimePoint {
  double tau = 0.0;
  double period = 0.0;
  /// 1/FWHM in cycle units; multiply by period for time units. nullopt when
  /// the spectrum has no subharmonic peak.
  std::optional<double> lifetime_cycles;
};

/// Subharmonic lifetime versus delay at fixed pulse error.
std::vector<LifetimePoint> lifetime_vs_tau(const SystemParams& p, double delta,
                                           std::span<const double> taus,
                                           const SweepOptions& options);

/// FWHM of the subharmonic peak versus pulse error at fixed delay; NaN marks
/// no-peak cells. Feeds the power-law fit.
std::vector<std::pair<double, double>> fwhm_vs_delta(
    const SystemParams& base, std::span<const double> deltas, double tau,
    const SweepOptions& options);

}  // namespace edtc
