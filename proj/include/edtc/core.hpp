#pragma once

#include <Eigen/Dense>
#include <optional>

#include "edtc/errors.hpp"

namespace edtc {

inline constexpr double kPi = 3.14159265358979323846;

/// Default pulse drive amplitude (rad per time unit) when a sequence does not
/// set omega1. A pi pulse then lasts 5e-4 time units, i.e. the pulse is
/// quasi-instantaneous on the T2 scale.
inline constexpr double kDefaultOmega1 = 2000.0 * kPi;

/// A timescale that may be infinite. The no-dephasing limit (T_phi = inf) is
/// an explicit state, not a float sentinel.
class Timescale {
 public:
  static Timescale finite(double value) {
    Timescale t;
    t.value_ = value;
    t.infinite_ = false;
    return t;
  }
  static Timescale infinite() {
    Timescale t;
    t.infinite_ = true;
    return t;
  }

  bool is_infinite() const { return infinite_; }
  /// Finite value; meaningless when infinite (callers must check).
  double value() const { return value_; }
  /// 1/value; exactly 0 when infinite.
  double rate() const { return infinite_ ? 0.0 : 1.0 / value_; }

  bool operator==(const Timescale&) const = default;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// Dissipation timescales, equilibrium magnetization and drive amplitude of
/// a driven two-level system. Always satisfies 1/t2 = 1/(2 t1) + 1/t_phi.
/// Immutable after construction through validate_params.
struct SystemParams {
  double t1 = 0.0;        // relaxation timescale
  double t2 = 0.0;        // decoherence timescale
  Timescale t_phi;        // dephasing timescale, may be infinite
  double m_eq = 0.0;      // equilibrium magnetization
  double omega1 = kDefaultOmega1;  // pulse drive amplitude (rad / time unit)
};

/// Unvalidated parameter bundle. At most one of t1/t2/t_phi may be absent;
/// the missing one is solved from 1/T2 = 1/(2 T1) + 1/T_phi.
struct RawParams {
  std::optional<double> t1;
  std::optional<double> t2;
  std::optional<Timescale> t_phi;
  double m_eq = 0.0;
  std::optional<double> omega1;
};

/// Validates and completes a parameter set.
///
/// Throws NonPositiveTimescale, InconsistentT2 (all three timescales supplied
/// but the identity fails beyond 1e-9 relative) or MagnetizationOutOfRange.
/// When all three timescales are supplied and consistent, t2 is recomputed
/// from (t1, t_phi) so the stored triple satisfies the identity to 1e-12.
/// Idempotent: re-validating the fields of the result changes nothing.
SystemParams validate_params(const RawParams& raw);

/// Bloch vector (expectation values of the Pauli operators).
struct Magnetization {
  double mx = 0.0;
  double my = 0.0;
  double mz = 0.0;

  double norm() const { return std::sqrt(mx * mx + my * my + mz * mz); }
  bool operator==(const Magnetization&) const = default;
};

/// Vectorized 2x2 density matrix, row-major ordering (rho00, rho01, rho10,
/// rho11). The ordering is fixed; it is asserted by tests and never
/// configurable.
struct LiouvilleState {
  Eigen::Vector4cd rho = Eigen::Vector4cd::Zero();

  std::complex<double> rho00() const { return rho(0); }
  std::complex<double> rho01() const { return rho(1); }
  std::complex<double> rho10() const { return rho(2); }
  std::complex<double> rho11() const { return rho(3); }
};

/// rho = (I + mx sx + my sy + mz sz) / 2, vectorized.
LiouvilleState bloch_to_liouville(const Magnetization& m);

/// Inverse of bloch_to_liouville. Throws NonPhysicalState when the input
/// violates trace (1e-12), hermiticity (1e-12) or positivity (-1e-10).
Magnetization liouville_to_bloch(const LiouvilleState& s);

}  // namespace edtc
