#pragma once

#include <Eigen/Dense>

#include "edtc/affine.hpp"
#include "edtc/core.hpp"

namespace edtc {

enum class Axis { x, y };

/// Rotation pulse. delta (the deviation from pi) is the stored parameter;
/// theta = pi + delta is derived, so the two can never drift apart.
class PulseSpec {
 public:
  static PulseSpec from_delta(Axis axis, double delta, double omega1);
  static PulseSpec from_theta(Axis axis, double theta, double omega1) {
    return from_delta(axis, theta - kPi, omega1);
  }

  Axis axis() const { return axis_; }
  double delta() const { return delta_; }
  double theta() const { return kPi + delta_; }
  /// |theta| / omega1 at construction time.
  double duration() const { return duration_; }

 private:
  Axis axis_ = Axis::y;
  double delta_ = 0.0;
  double duration_ = 0.0;
};

/// 4x4 generator acting on vectorized density matrices (row-major ordering).
struct Superoperator {
  Eigen::Matrix4cd matrix = Eigen::Matrix4cd::Zero();
};

/// Lindblad generator with jump operators
///   L1 = sqrt((1+m_eq)/(2 t1)) s+,  L2 = sqrt((1-m_eq)/(2 t1)) s-,
///   L3 = sqrt(1/(2 t_phi)) sz,
/// and no Hamiltonian part (interaction picture). Its induced Bloch dynamics
/// are dMx/dt = -Mx/T2, dMy/dt = -My/T2, dMz/dt = (m_eq - Mz)/T1.
Superoperator lindblad_superoperator(const SystemParams& p);

/// Coherent part -i [omega1 * s_axis / 2, rho] as a superoperator.
Superoperator rotation_generator(Axis axis, double omega1);

/// Closed-form propagator of the free (delay) evolution over time t:
/// linear = diag(e^{-t/T2}, e^{-t/T2}, e^{-t/T1}),
/// offset = (0, 0, m_eq (1 - e^{-t/T1})). Throws NegativeDuration.
AffineMap free_evolution_map(const SystemParams& p, double t);

/// Dissipation-free rotation by theta about the pulse axis. For axis y:
/// Mx <- mx cos(theta) + mz sin(theta), My <- my,
/// Mz <- mz cos(theta) - mx sin(theta). Orthogonal, det +1, zero offset.
AffineMap rotation_map(const PulseSpec& pulse);

/// exp(gen * t) restricted to Bloch form. Agrees with free_evolution_map for
/// the Lindblad generator and with rotation_map for the coherent generator.
AffineMap exact_segment_map(const Superoperator& gen, double t);

/// One drive cycle: delay tau first, then the pulse (measurement happens
/// after the pulse). With dissipative_pulse the pulse segment evolves under
/// rotation + dissipation instead of the pure rotation.
AffineMap cycle_map(const SystemParams& p, double tau, const PulseSpec& pulse,
                    bool dissipative_pulse = false);

}  // namespace edtc
