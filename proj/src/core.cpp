#include "edtc/core.hpp"

#include <cmath>
#include <complex>

namespace edtc {

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

void require_positive(const char* name, double v) {
  if (!finite_positive(v)) {
    throw NonPositiveTimescale(std::string(name) + " must be finite and > 0");
  }
}

}  // namespace

SystemParams validate_params(const RawParams& raw) {
  SystemParams p;
  p.m_eq = raw.m_eq;
  if (!std::isfinite(p.m_eq) || std::abs(p.m_eq) > 1.0) {
    throw MagnetizationOutOfRange("|m_eq| must be <= 1");
  }
  p.omega1 = raw.omega1.value_or(kDefaultOmega1);
  require_positive("omega1", p.omega1);

  const int have = int(raw.t1.has_value()) + int(raw.t2.has_value()) +
                   int(raw.t_phi.has_value());
  if (have < 2) {
    throw NonPositiveTimescale(
        "at least two of t1/t2/t_phi must be supplied");
  }
  if (raw.t1) require_positive("t1", *raw.t1);
  if (raw.t2) require_positive("t2", *raw.t2);
  if (raw.t_phi && !raw.t_phi->is_infinite()) {
    require_positive("t_phi", raw.t_phi->value());
  }

  // 1/T2 = 1/(2 T1) + 1/T_phi, solved for whichever timescale is missing.
  if (raw.t1 && raw.t_phi) {
    p.t1 = *raw.t1;
    p.t_phi = *raw.t_phi;
    const double inv_t2 = 0.5 / p.t1 + p.t_phi.rate();
    const double t2 = 1.0 / inv_t2;
    if (raw.t2) {
      const double supplied_inv = 1.0 / *raw.t2;
      if (std::abs(supplied_inv - inv_t2) > 1e-9 * supplied_inv) {
        throw InconsistentT2(
            "t1, t2 and t_phi violate 1/T2 = 1/(2T1) + 1/Tphi");
      }
    }
    p.t2 = t2;  // canonical value, exact in the identity
  } else if (raw.t1 && raw.t2) {
    p.t1 = *raw.t1;
    p.t2 = *raw.t2;
    const double inv_phi = 1.0 / p.t2 - 0.5 / p.t1;
    if (inv_phi > 1e-12 / p.t2) {
      p.t_phi = Timescale::finite(1.0 / inv_phi);
    } else if (inv_phi >= -1e-12 / p.t2) {
      p.t_phi = Timescale::infinite();  // t2 == 2 t1 up to roundoff
      p.t2 = 2.0 * p.t1;
    } else {
      throw NonPositiveTimescale("t2 > 2 t1 implies a negative t_phi");
    }
  } else {  // t2 and t_phi supplied, solve t1
    p.t2 = *raw.t2;
    p.t_phi = *raw.t_phi;
    const double half_inv_t1 = 1.0 / p.t2 - p.t_phi.rate();
    if (half_inv_t1 <= 0.0) {
      throw NonPositiveTimescale("t2 >= t_phi admits no positive t1");
    }
    p.t1 = 0.5 / half_inv_t1;
  }
  return p;
}

LiouvilleState bloch_to_liouville(const Magnetization& m) {
  using namespace std::complex_literals;
  LiouvilleState s;
  s.rho(0) = 0.5 * (1.0 + m.mz);
  s.rho(1) = 0.5 * (m.mx - 1i * m.my);
  s.rho(2) = 0.5 * (m.mx + 1i * m.my);
  s.rho(3) = 0.5 * (1.0 - m.mz);
  return s;
}

Magnetization liouville_to_bloch(const LiouvilleState& s) {
  const std::complex<double> r00 = s.rho00(), r01 = s.rho01();
  const std::complex<double> r10 = s.rho10(), r11 = s.rho11();
  if (std::abs(r00 + r11 - 1.0) > 1e-12) {
    throw NonPhysicalState("trace(rho) != 1");
  }
  if (std::abs(r10 - std::conj(r01)) > 1e-12) {
    throw NonPhysicalState("rho is not Hermitian");
  }
  // Eigenvalues of the Hermitian 2x2: tr/2 +- sqrt((d/2)^2 + |r01|^2).
  const double half_diff = 0.5 * (r00.real() - r11.real());
  const double radius = std::sqrt(half_diff * half_diff + std::norm(r01));
  const double min_eig = 0.5 * (r00.real() + r11.real()) - radius;
  if (min_eig < -1e-10) {
    throw NonPhysicalState("rho has an eigenvalue below -1e-10");
  }
  Magnetization m;
  m.mx = (r01 + r10).real();
  m.my = (r10 - r01).imag();
  m.mz = (r00 - r11).real();
  return m;
}

}  // namespace edtc
