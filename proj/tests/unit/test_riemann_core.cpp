#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "ashll/riemann_core.hpp"
#include "test_support.hpp"

namespace ashll {
namespace {

const GasModel kAir{};
using Flux = FluxVector (*)(const PrimitiveState&, const PrimitiveState&, UnitNormal,
                            const GasModel&);

struct Named {
  const char* name;
  Flux flux;
};

const Named kFluxes[] = {{"hll", &hll_flux}, {"hllem", &hllem_flux}, {"hllc", &hllc_flux}};

// Golden values from tests/oracles/flux_golden.py.
const PrimitiveState kSodL{1.0, 0.0, 0.0, 1.0};
const PrimitiveState kSodR{0.125, 0.0, 0.0, 0.1};
const FluxVector kHllSod{0.51765698102121638, 0.55000000000000004, 0, 1.3311179511974138};
const FluxVector kHllcSod{0.43026034786179024, 0.49090909090909085, 0, 1.1617029392268339};
const FluxVector kHllemSod{0.40128273573377515, 0.55000000000000004, 0, 1.3311179511974138};

const PrimitiveState kMovingL{1.0, 0.75, -0.3, 1.0};
const PrimitiveState kMovingR{0.125, 0.1, 0.4, 0.1};
const UnitNormal kOblique{0.6, 0.8};
const FluxVector kHllMoving{0.65231806360057643, 0.9060124409043786, 0.27636299157412147,
                            2.02377321038494};
const FluxVector kHllcMoving{0.57215246566583677, 0.77201160358633747, 0.28555059941619543,
                             1.7987261692254979};
const FluxVector kHllemMoving{0.55021453356727035, 0.72006334326804922, 0.38335529765803822,
                              1.9212347882088616};

void expect_flux_near(const FluxVector& got, const FluxVector& want, double tol) {
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(got[k], want[k], tol) << "component " << k;
}

TEST(WaveSpeeds, DavisExamples) {
  const auto rest = davis_wave_speeds({1.4, 0.0, 0.0, 1.0}, {1.4, 0.0, 0.0, 1.0}, {1.0, 0.0}, kAir);
  EXPECT_DOUBLE_EQ(rest.s_l, -1.0);
  EXPECT_DOUBLE_EQ(rest.s_r, 1.0);
  const auto s = davis_wave_speeds({1.4, 2.0, 0.0, 1.0}, {1.4, 0.0, 0.0, 1.0}, {1.0, 0.0}, kAir);
  EXPECT_DOUBLE_EQ(s.s_l, -1.0);
  EXPECT_DOUBLE_EQ(s.s_r, 3.0);
}

TEST(Fluxes, SodGolden) {
  expect_flux_near(hll_flux(kSodL, kSodR, {1.0, 0.0}, kAir), kHllSod, 1e-14);
  expect_flux_near(hllc_flux(kSodL, kSodR, {1.0, 0.0}, kAir), kHllcSod, 1e-14);
  expect_flux_near(hllem_flux(kSodL, kSodR, {1.0, 0.0}, kAir), kHllemSod, 1e-14);
}

TEST(Fluxes, MovingObliqueGolden) {
  expect_flux_near(hll_flux(kMovingL, kMovingR, kOblique, kAir), kHllMoving, 1e-14);
  expect_flux_near(hllc_flux(kMovingL, kMovingR, kOblique, kAir), kHllcMoving, 1e-14);
  expect_flux_near(hllem_flux(kMovingL, kMovingR, kOblique, kAir), kHllemMoving, 1e-14);
}

TEST(Fluxes, HllSmearsStationaryContact) {
  const PrimitiveState l{1.0, 0.0, 0.0, 1.0};
  const PrimitiveState r{0.125, 0.0, 0.0, 1.0};
  const auto f = hll_flux(l, r, {1.0, 0.0}, kAir);
  // Davis bounds: both come from the lighter side, a_R = sqrt(11.2)
  const double sl = -std::sqrt(11.2);
  const double sr = std::sqrt(11.2);
  EXPECT_NEAR(f.mass(), sl * sr * (0.125 - 1.0) / (sr - sl), 1e-14);
  EXPECT_GT(std::fabs(f.mass()), 0.1);

  const auto g = hll_flux({1.4, 0.0, 0.0, 1.0}, {1.0, 0.0, 0.0, 1.0}, {1.0, 0.0}, kAir);
  expect_flux_near(g, {0.23664319132398456, 1, 0, 0}, 1e-14);
}

TEST(Fluxes, ContactExactForHllcAndHllem) {
  const PrimitiveState l{1.0, 0.0, 0.0, 1.0};
  const PrimitiveState r{0.125, 0.0, 0.0, 1.0};
  for (const auto n : {UnitNormal{1.0, 0.0}, UnitNormal{0.6, -0.8}}) {
    const FluxVector want(0.0, n.nx, n.ny, 0.0);
    EXPECT_EQ(hllc_flux(l, r, n, kAir), want);
    expect_flux_near(hllem_flux(l, r, n, kAir), want, 1e-15);
  }
  const WaveSpeeds s = davis_wave_speeds(l, r, {1.0, 0.0}, kAir);
  EXPECT_DOUBLE_EQ(hllc_contact_speed(l, r, {1.0, 0.0}, s), 0.0);
  EXPECT_DOUBLE_EQ(hllc_star_pressure(l, r, {1.0, 0.0}, s), 1.0);
}

TEST(Fluxes, ShearDiffusion) {
  const PrimitiveState l{1.0, 0.0, 0.0, 1.0};
  const PrimitiveState r{1.0, 0.0, 1.0, 1.0};
  const double hll = hll_flux(l, r, {1.0, 0.0}, kAir).y_momentum();
  const double hllem = hllem_flux(l, r, {1.0, 0.0}, kAir).y_momentum();
  EXPECT_LT(std::fabs(hllem), std::fabs(hll));
  EXPECT_NEAR(hllem, 0.0, 1e-15);
  EXPECT_NEAR(hll, -std::sqrt(1.4) * 0.5, 1e-14);
}

TEST(Fluxes, ShearGolden) {
  const PrimitiveState l{1.0, 0.0, 1.0, 1.0};
  const PrimitiveState r{1.0, 0.0, -1.0, 1.0};
  expect_flux_near(hll_flux(l, r, {1.0, 0.0}, kAir), {0, 1, 1.1832159566199232, 0}, 1e-14);
  expect_flux_near(hllem_flux(l, r, {1.0, 0.0}, kAir), {0, 1, 0, 0}, 1e-14);
}

TEST(FluxProperties, Consistency) {
  testing::StateSampler rng(21);
  for (int k = 0; k < 1000; ++k) {
    const auto w = rng.state();
    const auto n = rng.normal();
    const auto exact = physical_flux(w, n, kAir);
    for (const auto& f : kFluxes) {
      EXPECT_LT(testing::relative_gap(f.flux(w, w, n, kAir), exact), 1e-12) << f.name;
    }
  }
}

TEST(FluxProperties, Upwinding) {
  testing::StateSampler rng(22);
  int left = 0;
  int right = 0;
  for (int k = 0; k < 4000 && (left < 1000 || right < 1000); ++k) {
    const auto n = rng.normal();
    auto wl = rng.state(1.0);
    auto wr = rng.state(1.0);
    const double push = rng.uniform(2.0, 12.0) * (k % 2 == 0 ? 1.0 : -1.0);
    wl.u += push * n.nx;
    wl.v += push * n.ny;
    wr.u += push * n.nx;
    wr.v += push * n.ny;
    const auto s = davis_wave_speeds(wl, wr, n, kAir);
    if (s.s_l >= 0.0) {
      ++left;
      for (const auto& f : kFluxes) EXPECT_EQ(f.flux(wl, wr, n, kAir), physical_flux(wl, n, kAir)) << f.name;
    } else if (s.s_r <= 0.0) {
      ++right;
      for (const auto& f : kFluxes) EXPECT_EQ(f.flux(wl, wr, n, kAir), physical_flux(wr, n, kAir)) << f.name;
    }
  }
  EXPECT_GE(left, 1000);
  EXPECT_GE(right, 1000);
}

TEST(FluxProperties, RotationalInvariance) {
  testing::StateSampler rng(23);
  for (int k = 0; k < 1000; ++k) {
    const auto wl = rng.state();
    const auto wr = rng.state();
    const auto n = rng.normal();
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (const auto& f : kFluxes) {
      const auto base = f.flux(wl, wr, n, kAir);
      const auto turned = f.flux(testing::rotate(wl, angle), testing::rotate(wr, angle),
                                 testing::rotate(n, angle), kAir);
      EXPECT_LT(testing::relative_gap(turned, testing::rotate(base, angle)), 1e-12) << f.name;
    }
  }
}

TEST(FluxProperties, FlipSymmetry) {
  testing::StateSampler rng(24);
  for (int k = 0; k < 1000; ++k) {
    const auto wl = rng.state();
    const auto wr = rng.state();
    const auto n = rng.normal();
    for (const auto& f : kFluxes) {
      EXPECT_LT(testing::relative_gap(f.flux(wl, wr, n, kAir), -f.flux(wr, wl, -n, kAir)), 1e-12)
          << f.name;
    }
  }
}

TEST(FluxProperties, ContactExactness) {
  testing::StateSampler rng(25);
  for (int k = 0; k < 1000; ++k) {
    const auto n = rng.normal();
    const double p = rng.state().p;
    const double t = rng.uniform(-3.0, 3.0);
    // q = 0 on both sides; tangential velocity may jump
    const PrimitiveState wl{rng.state().rho, -t * n.ny, t * n.nx, p};
    const double t2 = rng.uniform(-3.0, 3.0);
    const PrimitiveState wr{rng.state().rho, -t2 * n.ny, t2 * n.nx, p};
    for (const Flux f : std::array<Flux, 2>{&hllc_flux, &hllem_flux}) {
      const auto flux = f(wl, wr, n, kAir);
      EXPECT_LT(std::fabs(flux.mass()), 1e-12);
      EXPECT_LT(std::fabs(flux.energy()), 1e-12);
    }
    if (std::fabs(wl.rho - wr.rho) > 1e-3) {
      EXPECT_GT(std::fabs(hll_flux(wl, wr, n, kAir).mass()), 1e-6);
    }
  }
}

TEST(FluxProperties, HllcJumpConditions) {
  testing::StateSampler rng(26);
  int checked = 0;
  for (int k = 0; k < 2000 && checked < 1000; ++k) {
    const auto wl = rng.state();
    const auto wr = rng.state();
    const auto n = rng.normal();
    const auto s = davis_wave_speeds(wl, wr, n, kAir);
    if (!(s.s_l < 0.0 && s.s_r > 0.0)) continue;
    ++checked;
    const double s_star = hllc_contact_speed(wl, wr, n, s);
    EXPECT_LE(s.s_l, s_star);
    EXPECT_LE(s_star, s.s_r);
    const double ql = normal_velocity(wl, n);
    const double qr = normal_velocity(wr, n);
    const auto star_l = detail::hllc_star_state(wl, ql, wl.rho * (s.s_l - ql), s.s_l, s_star, n, kAir);
    const auto star_r = detail::hllc_star_state(wr, qr, wr.rho * (s.s_r - qr), s.s_r, s_star, n, kAir);
    const auto ul = primitive_to_conserved(wl, kAir);
    const auto ur = primitive_to_conserved(wr, kAir);
    // F_R = F_L + S_L (U*_L - U_L) + S* (U*_R - U*_L) + S_R (U_R - U*_R)
    const auto chain = physical_flux(wl, n, kAir) + rate(s.s_l, star_l - ul) +
                       rate(s_star, star_r - star_l) + rate(s.s_r, ur - star_r);
    EXPECT_LT(testing::relative_gap(chain, physical_flux(wr, n, kAir)), 1e-11);
    // both star states move with the contact
    for (const auto& star : {star_l, star_r}) {
      const double q_star = (star.rho_u() * n.nx + star.rho_v() * n.ny) / star.rho();
      EXPECT_NEAR(q_star, s_star, 1e-11 * std::max(1.0, std::fabs(s_star)));
    }
  }
  EXPECT_GE(checked, 1000);
}

TEST(Fluxes, DegenerateContactSpeedThrows) {
  EXPECT_THROW(hllc_contact_speed({1.0, 0.0, 0.0, 1.0}, {1.0, 0.0, 0.0, 1.0}, {1.0, 0.0},
                                  WaveSpeeds{0.0, 0.0, std::nullopt}),
               DegenerateWaveSpeeds);
}

}  // namespace
}  // namespace ashll
