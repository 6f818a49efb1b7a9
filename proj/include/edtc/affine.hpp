#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "edtc/core.hpp"

namespace edtc {

/// Affine map m -> linear * m + offset on Bloch vectors. Every segment
/// propagator (free decay, rotation, full cycle) is one of these.
struct AffineMap {
  Eigen::Matrix3d linear = Eigen::Matrix3d::Identity();
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();

  static AffineMap identity() { return {}; }

  Eigen::Vector3d apply(const Eigen::Vector3d& m) const {
    return linear * m + offset;
  }
  Magnetization apply(const Magnetization& m) const {
    const Eigen::Vector3d v = apply(Eigen::Vector3d(m.mx, m.my, m.mz));
    return {v(0), v(1), v(2)};
  }
};

/// Composition: apply `inner` first, then `outer`.
inline AffineMap compose(const AffineMap& outer, const AffineMap& inner) {
  AffineMap out;
  out.linear = outer.linear * inner.linear;
  out.offset = outer.linear * inner.offset + outer.offset;
  return out;
}

/// n-fold self-composition by exponentiation-by-squaring on the (A, b) pair.
/// compose_n(m, 0) is the identity.
AffineMap compose_n(const AffineMap& map, std::uint64_t n);

/// Largest singular value of the linear part.
double operator_norm(const AffineMap& map);

}  // namespace edtc
