#include "edtc/propagators.hpp"

#include <cmath>
#include <complex>

namespace edtc {

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::Vector4cd;
using namespace std::complex_literals;

Matrix2cd pauli(Axis axis) {
  Matrix2cd s;
  if (axis == Axis::x) {
    s << 0, 1, 1, 0;
  } else {
    s << 0, -1i, 1i, 0;
  }
  return s;
}

// Kronecker product for 2x2 factors; index convention (2i+j, 2k+l) matches
// the row-major vectorization, so vec(A rho B) = kron(A, B^T) vec(rho).
Matrix4cd kron(const Matrix2cd& a, const Matrix2cd& b) {
  Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + j, 2 * k + l) = a(i, k) * b(j, l);
  return out;
}

// Dissipator contribution L rho L+ - 1/2 {L+L, rho} in vectorized form.
Matrix4cd dissipator(const Matrix2cd& jump) {
  const Matrix2cd id = Matrix2cd::Identity();
  const Matrix2cd ll = jump.adjoint() * jump;
  return kron(jump, jump.conjugate()) - 0.5 * kron(ll, id) -
         0.5 * kron(id, ll.transpose());
}

// Propagates a Bloch vector through a Liouville-space matrix without the
// physicality checks (used for extracting linear maps from basis inputs).
Eigen::Vector3d push_bloch(const Matrix4cd& u, const Eigen::Vector3d& m) {
  Vector4cd v;
  v << 0.5 * (1.0 + m(2)), 0.5 * (m(0) - 1i * m(1)),
      0.5 * (m(0) + 1i * m(1)), 0.5 * (1.0 - m(2));
  const Vector4cd w = u * v;
  return {(w(1) + w(2)).real(), (w(2) - w(1)).imag(), (w(0) - w(3)).real()};
}

Matrix4cd expm_scaling_squaring(const Matrix4cd& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  int squarings = 0;
  if (norm > 0.5) {
    squarings = int(std::ceil(std::log2(norm / 0.5)));
    if (squarings > 200) {
      throw ExponentialNotConverged("generator norm too large to scale");
    }
  }
  const Matrix4cd b = a / std::exp2(double(squarings));
  Matrix4cd sum = Matrix4cd::Identity();
  Matrix4cd term = Matrix4cd::Identity();
  bool converged = false;
  for (int k = 1; k <= 40; ++k) {
    term = (term * b) / double(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18 * sum.cwiseAbs().maxCoeff()) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ExponentialNotConverged("Taylor series did not converge");
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// Eigendecomposition first; scaling-and-squaring when the eigenbasis is
// ill-conditioned (the coherent generator is defective at exact resonance).
Matrix4cd expm(const Matrix4cd& a) {
  if (!a.allFinite()) {
    throw ExponentialNotConverged("generator has non-finite entries");
  }
  Eigen::ComplexEigenSolver<Matrix4cd> es(a);
  if (es.info() == Eigen::Success) {
    const Matrix4cd v = es.eigenvectors();
    const Eigen::JacobiSVD<Matrix4cd> svd(v);
    const double smin = svd.singularValues()(3);
    const double smax = svd.singularValues()(0);
    if (smin > 0.0 && smax / smin < 1e8) {
      const Vector4cd lambda = es.eigenvalues();
      const Matrix4cd vinv = v.partialPivLu().solve(Matrix4cd::Identity());
      // Degenerate spectra can pass the condition check with a basis that
      // no longer reproduces the generator; require the reconstruction to
      // be accurate before trusting the eigenbasis.
      const Matrix4cd recon = v * lambda.asDiagonal() * vinv;
      const double scale = a.cwiseAbs().maxCoeff();
      if ((recon - a).cwiseAbs().maxCoeff() <= 1e-13 * (scale + 1e-300)) {
        const Matrix4cd d = lambda.array().exp().matrix().asDiagonal();
        return v * d * vinv;
      }
    }
  }
  return expm_scaling_squaring(a);
}

}  // namespace

PulseSpec PulseSpec::from_delta(Axis axis, double delta, double omega1) {
  PulseSpec p;
  p.axis_ = axis;
  p.delta_ = delta;
  p.duration_ = std::abs(kPi + delta) / omega1;
  return p;
}

Superoperator lindblad_superoperator(const SystemParams& p) {
  Matrix2cd s_plus, s_minus, s_z;
  s_plus << 0, 1, 0, 0;
  s_minus << 0, 0, 1, 0;
  s_z << 1, 0, 0, -1;

  Superoperator gen;
  gen.matrix += dissipator(std::sqrt((1.0 + p.m_eq) / (2.0 * p.t1)) * s_plus);
  gen.matrix += dissipator(std::sqrt((1.0 - p.m_eq) / (2.0 * p.t1)) * s_minus);
  const double phi_rate = p.t_phi.rate();
  if (phi_rate > 0.0) {
    gen.matrix += dissipator(std::sqrt(0.5 * phi_rate) * s_z);
  }
  return gen;
}

Superoperator rotation_generator(Axis axis, double omega1) {
  const Matrix2cd h = 0.5 * omega1 * pauli(axis);
  const Matrix2cd id = Matrix2cd::Identity();
  Superoperator gen;
  gen.matrix = -1i * (kron(h, id) - kron(id, h.transpose()));
  return gen;
}

AffineMap free_evolution_map(const SystemParams& p, double t) {
  if (t < 0.0) throw NegativeDuration("free evolution requires t >= 0");
  const double e2 = std::exp(-t / p.t2);
  const double e1 = std::exp(-t / p.t1);
  AffineMap map;
  map.linear = Eigen::Vector3d(e2, e2, e1).asDiagonal();
  map.offset = Eigen::Vector3d(0.0, 0.0, p.m_eq * (1.0 - e1));
  return map;
}

AffineMap rotation_map(const PulseSpec& pulse) {
  const double c = std::cos(pulse.theta());
  const double s = std::sin(pulse.theta());
  AffineMap map;
  if (pulse.axis() == Axis::y) {
    map.linear << c, 0, s,
                  0, 1, 0,
                 -s, 0, c;
  } else {
    map.linear << 1, 0, 0,
                  0, c, -s,
                  0, s, c;
  }
  return map;
}

AffineMap exact_segment_map(const Superoperator& gen, double t) {
  if (t < 0.0) throw NegativeDuration("segment propagation requires t >= 0");
  const Matrix4cd u = expm(gen.matrix * t);
  AffineMap map;
  map.offset = push_bloch(u, Eigen::Vector3d::Zero());
  for (int i = 0; i < 3; ++i) {
    map.linear.col(i) = push_bloch(u, Eigen::Vector3d::Unit(i)) - map.offset;
  }
  return map;
}

AffineMap cycle_map(const SystemParams& p, double tau, const PulseSpec& pulse,
                    bool dissipative_pulse) {
  if (tau < 0.0) throw NegativeDuration("delay requires tau >= 0");
  const AffineMap delay = free_evolution_map(p, tau);
  AffineMap drive;
  if (dissipative_pulse) {
    Superoperator gen = lindblad_superoperator(p);
    const double sign = pulse.theta() < 0.0 ? -1.0 : 1.0;
    gen.matrix += rotation_generator(pulse.axis(), sign * p.omega1).matrix;
    drive = exact_segment_map(gen, pulse.duration());
  } else {
    drive = rotation_map(pulse);
  }
  return compose(drive, delay);
}

}  // namespace edtc
