#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "edtc/core.hpp"

using namespace edtc;

TEST_CASE("missing timescale is solved from the 1/T2 identity") {
  RawParams raw;
  raw.t1 = 100.0;
  raw.t_phi = Timescale::finite(100.0 / 0.98);
  raw.m_eq = 0.8;
  const SystemParams p = validate_params(raw);
  CHECK(1.0 / p.t2 == doctest::Approx(1.0 / 200.0 + 0.98 / 100.0).epsilon(1e-14));
  CHECK(p.t1 == 100.0);
  CHECK(p.t_phi.value() == 100.0 / 0.98);
}

TEST_CASE("pure relaxation limit: t_phi = inf gives t2 = 2 t1") {
  RawParams raw;
  raw.t1 = 1.0;
  raw.t_phi = Timescale::infinite();
  raw.m_eq = 0.0;
  const SystemParams p = validate_params(raw);
  CHECK(p.t2 == 2.0);
  CHECK(p.t_phi.rate() == 0.0);
}

TEST_CASE("proton-in-HDO timescales solve t_phi") {
  RawParams raw;
  raw.t1 = 7.57;
  raw.t2 = 0.6;
  raw.m_eq = 0.3;
  const SystemParams p = validate_params(raw);
  CHECK(p.t_phi.value() ==
        doctest::Approx(0.62475928473177444).epsilon(1e-12));
}

TEST_CASE("t2 exactly 2 t1 solves to infinite t_phi") {
  RawParams raw;
  raw.t1 = 3.0;
  raw.t2 = 6.0;
  raw.m_eq = 0.0;
  const SystemParams p = validate_params(raw);
  CHECK(p.t_phi.is_infinite());
}

TEST_CASE("solving t1 from t2 and t_phi") {
  RawParams raw;
  raw.t2 = 1.0;
  raw.t_phi = Timescale::finite(1.25);
  raw.m_eq = 0.5;
  const SystemParams p = validate_params(raw);
  // 1/(2 t1) = 1 - 0.8 = 0.2
  CHECK(p.t1 == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("validation rejections") {
  RawParams raw;
  raw.t1 = -1.0;
  raw.t2 = 1.0;
  raw.m_eq = 0.0;
  CHECK_THROWS_AS(validate_params(raw), NonPositiveTimescale);

  raw.t1 = 100.0;
  raw.t2 = 1.0;
  raw.t_phi = Timescale::finite(2.0);  // wildly inconsistent triple
  CHECK_THROWS_AS(validate_params(raw), InconsistentT2);

  raw = {};
  raw.t1 = 1.0;
  raw.t2 = 1.0;
  raw.m_eq = 1.5;
  CHECK_THROWS_AS(validate_params(raw), MagnetizationOutOfRange);

  raw = {};
  raw.t1 = 1.0;
  raw.t2 = 3.0;  // t2 > 2 t1
  raw.m_eq = 0.0;
  CHECK_THROWS_AS(validate_params(raw), NonPositiveTimescale);

  raw = {};
  raw.t1 = 1.0;  // only one timescale
  raw.m_eq = 0.0;
  CHECK_THROWS_AS(validate_params(raw), NonPositiveTimescale);
}

TEST_CASE("a 1e-9-consistent triple is accepted and canonicalized") {
  RawParams raw;
  raw.t1 = 100.0;
  raw.t_phi = Timescale::finite(100.0 / 0.98);
  raw.m_eq = 0.8;
  const SystemParams exact = validate_params(raw);

  raw.t2 = exact.t2 * (1.0 + 2e-10);  // within tolerance
  const SystemParams p = validate_params(raw);
  CHECK(p.t2 == exact.t2);

  raw.t2 = exact.t2 * (1.0 + 1e-8);  // beyond tolerance
  CHECK_THROWS_AS(validate_params(raw), InconsistentT2);
}

TEST_CASE("validate_params is idempotent") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> log_t(-2.0, 3.0);
  std::uniform_real_distribution<double> meq(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    RawParams raw;
    raw.t1 = std::pow(10.0, log_t(rng));
    raw.t_phi = Timescale::finite(std::pow(10.0, log_t(rng)));
    raw.m_eq = meq(rng);
    const SystemParams p = validate_params(raw);

    // identity holds to 1e-12 on every constructed SystemParams
    const double inv = 0.5 / p.t1 + p.t_phi.rate();
    CHECK(std::abs(1.0 / p.t2 - inv) <= 1e-12 * inv);

    RawParams again;
    again.t1 = p.t1;
    again.t2 = p.t2;
    again.t_phi = p.t_phi;
    again.m_eq = p.m_eq;
    again.omega1 = p.omega1;
    const SystemParams q = validate_params(again);
    CHECK(q.t1 == p.t1);
    CHECK(q.t2 == p.t2);
    CHECK(q.t_phi == p.t_phi);
    CHECK(q.m_eq == p.m_eq);
    CHECK(q.omega1 == p.omega1);
  }
}

TEST_CASE("bloch to liouville basis cases") {
  const LiouvilleState mixed = bloch_to_liouville({0.0, 0.0, 0.0});
  CHECK(mixed.rho00() == std::complex<double>(0.5, 0.0));
  CHECK(mixed.rho11() == std::complex<double>(0.5, 0.0));
  CHECK(mixed.rho01() == std::complex<double>(0.0, 0.0));

  const LiouvilleState up = bloch_to_liouville({0.0, 0.0, 1.0});
  CHECK(up.rho00() == std::complex<double>(1.0, 0.0));
  CHECK(up.rho11() == std::complex<double>(0.0, 0.0));

  const LiouvilleState tilted = bloch_to_liouville({0.6, 0.0, 0.8});
  CHECK(tilted.rho01().real() == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(tilted.rho00().real() == doctest::Approx(0.9).epsilon(1e-15));
  const Magnetization back = liouville_to_bloch(tilted);
  CHECK(back.mx == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(back.mz == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("bloch/liouville round trip on random states") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    Magnetization m{u(rng), u(rng), u(rng)};
    const double norm = m.norm();
    if (norm > 1.0) {
      m.mx /= norm;
      m.my /= norm;
      m.mz /= norm;
    }
    const Magnetization back = liouville_to_bloch(bloch_to_liouville(m));
    CHECK(std::abs(back.mx - m.mx) <= 1e-14);
    CHECK(std::abs(back.my - m.my) <= 1e-14);
    CHECK(std::abs(back.mz - m.mz) <= 1e-14);
  }
}

TEST_CASE("liouville_to_bloch rejects unphysical states") {
  LiouvilleState s = bloch_to_liouville({0.0, 0.0, 0.5});
  s.rho(0) += 1e-6;  // trace off
  CHECK_THROWS_AS(liouville_to_bloch(s), NonPhysicalState);

  s = bloch_to_liouville({0.3, 0.1, 0.5});
  s.rho(2) += std::complex<double>(0.0, 1e-6);  // breaks hermiticity
  CHECK_THROWS_AS(liouville_to_bloch(s), NonPhysicalState);

  // |m| > 1 means a negative eigenvalue
  CHECK_THROWS_AS(liouville_to_bloch(bloch_to_liouville({0.8, 0.0, 0.8})),
                  NonPhysicalState);
}
