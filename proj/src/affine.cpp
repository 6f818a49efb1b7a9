#include "edtc/affine.hpp"

namespace edtc {

AffineMap compose_n(const AffineMap& map, std::uint64_t n) {
  AffineMap result = AffineMap::identity();
  AffineMap base = map;
  while (n > 0) {
    if (n & 1u) result = compose(base, result);
    n >>= 1u;
    if (n > 0) base = compose(base, base);
  }
  return result;
}

double operator_norm(const AffineMap& map) {
  return map.linear.jacobiSvd().singularValues()(0);
}

}  // namespace edtc
