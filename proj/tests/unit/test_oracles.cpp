#include <gtest/gtest.h>

#include <cmath>

#include "ashll/oracles.hpp"
#include "test_support.hpp"

namespace ashll {
namespace {

const GasModel kAir{};

// Shock-frame mass, momentum and energy fluxes across a discontinuity moving at s.
void expect_rankine_hugoniot(const PrimitiveState& a, const PrimitiveState& b, double s) {
  auto fluxes = [&](const PrimitiveState& w) {
    const double rel = w.u - s;
    const double e = w.p / ((kAir.gamma - 1.0) * w.rho) + 0.5 * rel * rel;
    return std::array<double, 3>{w.rho * rel, w.rho * rel * rel + w.p, w.rho * rel * (e + w.p / w.rho)};
  };
  const auto fa = fluxes(a);
  const auto fb = fluxes(b);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(fa[k], fb[k], 1e-10 * std::max(1.0, std::fabs(fa[k])));
}

TEST(ExactRiemann, IdenticalStates) {
  const PrimitiveState w{0.7, 0.3, -0.2, 1.9};
  const auto sol = exact_riemann(w, w, kAir);
  EXPECT_NEAR(sol.star_pressure(), w.p, 1e-12);
  EXPECT_NEAR(sol.star_velocity(), w.u, 1e-12);
  for (double s : {-3.0, -0.5, 0.0, 0.3, 2.0}) {
    const auto got = sol.sample(s);
    EXPECT_NEAR(got.rho, w.rho, 1e-12);
    EXPECT_NEAR(got.p, w.p, 1e-12);
  }
}

TEST(ExactRiemann, SymmetricCollision) {
  const auto sol = exact_riemann({1.0, 1.0, 0.0, 1.0}, {1.0, -1.0, 0.0, 1.0}, kAir);
  EXPECT_NEAR(sol.star_velocity(), 0.0, 1e-14);
  EXPECT_EQ(sol.left_wave(), WaveKind::shock);
  EXPECT_EQ(sol.right_wave(), WaveKind::shock);
  EXPECT_NEAR(sol.star_density_left(), sol.star_density_right(), 1e-13);
}

TEST(ExactRiemann, SodStructure) {
  const PrimitiveState l{1.0, 0.0, 0.0, 1.0};
  const PrimitiveState r{0.125, 0.0, 0.0, 0.1};
  const auto sol = exact_riemann(l, r, kAir);
  // pinned from the first verified run
  EXPECT_NEAR(sol.star_pressure(), 0.30313017805064679, 1e-12);
  EXPECT_NEAR(sol.star_velocity(), 0.92745262004895057, 1e-12);
  EXPECT_EQ(sol.left_wave(), WaveKind::rarefaction);
  EXPECT_EQ(sol.right_wave(), WaveKind::shock);

  // right shock satisfies the jump conditions
  const double s = sol.right_head_speed();
  expect_rankine_hugoniot(r, {sol.star_density_right(), sol.star_velocity(), 0.0, sol.star_pressure()}, s);
  EXPECT_EQ(sol.sample(s + 1e-9).rho, r.rho);

  // left fan is isentropic with a constant left Riemann invariant
  const double entropy = l.p / std::pow(l.rho, kAir.gamma);
  const double invariant = l.u + 2.0 * std::sqrt(kAir.gamma * l.p / l.rho) / (kAir.gamma - 1.0);
  for (double x = sol.left_head_speed(); x < sol.star_velocity(); x += 0.05) {
    const auto w = sol.sample(x);
    EXPECT_NEAR(w.p / std::pow(w.rho, kAir.gamma), entropy, 1e-10);
    EXPECT_NEAR(w.u + 2.0 * std::sqrt(kAir.gamma * w.p / w.rho) / (kAir.gamma - 1.0), invariant, 1e-10);
  }
  // contact: pressure and velocity continuous, density jumps
  const auto a = sol.sample(sol.star_velocity() - 1e-9);
  const auto b = sol.sample(sol.star_velocity() + 1e-9);
  EXPECT_EQ(a.p, b.p);
  EXPECT_NEAR(a.rho, 0.42631942817849544, 1e-10);
  EXPECT_NEAR(b.rho, 0.26557371170530708, 1e-10);
}

TEST(ExactRiemann, RandomShocksSatisfyJumps) {
  testing::StateSampler rng(51);
  int shocks = 0;
  for (int k = 0; k < 500; ++k) {
    const auto l = rng.state(1.0);
    const auto r = rng.state(1.0);
    const auto sol = exact_riemann(l, r, kAir);
    const PrimitiveState star_r{sol.star_density_right(), sol.star_velocity(), r.v, sol.star_pressure()};
    const PrimitiveState star_l{sol.star_density_left(), sol.star_velocity(), l.v, sol.star_pressure()};
    if (sol.right_wave() == WaveKind::shock) {
      ++shocks;
      expect_rankine_hugoniot(r, star_r, sol.right_head_speed());
    }
    if (sol.left_wave() == WaveKind::shock) {
      ++shocks;
      expect_rankine_hugoniot(l, star_l, sol.left_head_speed());
    }
  }
  EXPECT_GT(shocks, 100);
}

TEST(ExactRiemann, Errors) {
  EXPECT_THROW(exact_riemann({1.0, -10.0, 0.0, 0.4}, {1.0, 10.0, 0.0, 0.4}, kAir), VacuumGenerated);
  EXPECT_THROW(exact_riemann({0.0, 0.0, 0.0, 1.0}, {1.0, 0.0, 0.0, 1.0}, kAir), NonPhysicalState);
}

TEST(NormalShock, Ratios) {
  const auto m10 = normal_shock_rh(10.0, kAir);
  EXPECT_NEAR(m10.density_ratio, 600.0 / 105.0, 1e-13);
  EXPECT_NEAR(m10.pressure_ratio, 1.0 + 2.8 * 99.0 / 2.4, 1e-12);
  EXPECT_NEAR(normal_shock_rh(20.0, kAir).density_ratio, 6.0 * 400.0 / 405.0, 1e-13);
  const auto m1 = normal_shock_rh(1.0, kAir);
  EXPECT_DOUBLE_EQ(m1.density_ratio, 1.0);
  EXPECT_DOUBLE_EQ(m1.pressure_ratio, 1.0);
  EXPECT_DOUBLE_EQ(m1.velocity_ratio, 1.0);
  EXPECT_THROW(normal_shock_rh(0.9, kAir), std::domain_error);
}

TEST(NormalShock, JumpConditionsRandomMach) {
  testing::StateSampler rng(52);
  for (int k = 0; k < 1000; ++k) {
    const double mach = rng.uniform(1.0, 30.0);
    const auto r = normal_shock_rh(mach, kAir);
    const PrimitiveState up{1.0, mach * std::sqrt(kAir.gamma), 0.0, 1.0};
    const PrimitiveState down{r.density_ratio, up.u * r.velocity_ratio, 0.0, r.pressure_ratio};
    expect_rankine_hugoniot(up, down, 0.0);
  }
}

TEST(ObliqueShock, NinetyDegreesIsNormal) {
  const PrimitiveState up{1.4, 0.0, 0.0, 1.0};
  const auto post = oblique_post_shock(up, 3.0, 90.0, kAir);
  const auto r = normal_shock_rh(3.0, kAir);
  EXPECT_NEAR(post.rho, 1.4 * r.density_ratio, 1e-13);
  EXPECT_NEAR(post.p, r.pressure_ratio, 1e-12);
  EXPECT_NEAR(post.v, 0.0, 1e-14);
  // lab frame: a shock moving at M a into gas at rest
  EXPECT_NEAR(post.u, 3.0 * (1.0 - 1.0 / r.density_ratio), 1e-13);
}

TEST(ObliqueShock, TangentialVelocityPreserved) {
  testing::StateSampler rng(53);
  for (int k = 0; k < 1000; ++k) {
    const auto up = rng.state(1.0);
    const double angle = rng.uniform(10.0, 170.0);
    const double t = angle * std::numbers::pi / 180.0;
    const auto post = oblique_post_shock(up, rng.uniform(1.0, 15.0), angle, kAir);
    // tangent along the shock line (cos, sin)
    EXPECT_NEAR(post.u * std::cos(t) + post.v * std::sin(t), up.u * std::cos(t) + up.v * std::sin(t),
                1e-12 * (1.0 + std::fabs(post.u) + std::fabs(post.v)));
  }
}

TEST(ObliqueShock, DoubleMachReflectionState) {
  const auto post = oblique_post_shock({1.4, 0.0, 0.0, 1.0}, 10.0, 60.0, kAir);
  EXPECT_NEAR(post.rho, 8.0, 1e-12);
  EXPECT_NEAR(post.u, 8.25 * std::cos(std::numbers::pi / 6.0), 1e-12);
  EXPECT_NEAR(post.u, 7.14470958122, 1e-10);
  EXPECT_NEAR(post.v, -4.125, 1e-12);
  EXPECT_NEAR(post.p, 116.5, 1e-11);
}

TEST(Couette, Profiles) {
  GasModel gas;
  const auto still = couette_exact(0.0, 1.0, 0.05, gas);
  EXPECT_EQ(still.velocity(0.3), 0.0);
  EXPECT_EQ(still.temperature(0.3), 1.0);
  const auto c = couette_exact(0.2, 2.0, 0.05, gas);
  EXPECT_DOUBLE_EQ(c.velocity(1.0), 0.1);
  EXPECT_DOUBLE_EQ(c.temperature(0.0), 1.0);
  EXPECT_DOUBLE_EQ(c.temperature(2.0), 1.0);
  // mu U^2 / (8 k) above the walls at midheight
  EXPECT_NEAR(c.temperature(1.0) - 1.0, 0.05 * 0.04 / (8.0 * gas.conductivity(0.05)), 1e-15);
  EXPECT_THROW(couette_exact(0.2, 1.0, 0.0, gas), std::invalid_argument);
}

}  // namespace
}  // namespace ashll
