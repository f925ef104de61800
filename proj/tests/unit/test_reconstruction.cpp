#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "ashll/reconstruction.hpp"

namespace ashll {
namespace {

constexpr LimiterKind kLimited[] = {LimiterKind::minmod, LimiterKind::van_albada};

TEST(Limiters, Examples) {
  EXPECT_EQ(minmod(1.0, 2.0), 1.0);
  EXPECT_EQ(minmod(-1.0, 2.0), 0.0);
  EXPECT_EQ(minmod(-3.0, -2.0), -2.0);
  EXPECT_EQ(limited_slope(1.0, 2.0, LimiterKind::minmod), 1.0);
  EXPECT_NEAR(limited_slope(0.7, 0.7, LimiterKind::van_albada), 0.7, 1e-15);
  EXPECT_EQ(limited_slope(-0.7, 0.7, LimiterKind::van_albada), 0.0);
  EXPECT_EQ(limited_slope(1.0, 2.0, LimiterKind::first_order), 0.0);
}

TEST(Muscl, UniformLine) {
  const std::vector<double> line(8, 2.5);
  for (auto kind : {LimiterKind::first_order, LimiterKind::minmod, LimiterKind::van_albada}) {
    for (const auto& f : muscl_faces(line, kind, 1.0 / 3.0)) {
      EXPECT_EQ(f.left, 2.5);
      EXPECT_EQ(f.right, 2.5);
    }
  }
}

TEST(Muscl, FirstOrderCopiesCells) {
  const std::vector<double> line{1.0, 4.0, 2.0, 8.0, 3.0};
  const auto faces = muscl_faces(line, LimiterKind::first_order, 1.0 / 3.0);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    EXPECT_EQ(faces[f].left, line[f]);
    EXPECT_EQ(faces[f].right, line[f + 1]);
  }
}

TEST(Muscl, LinearDataIsInterpolatedExactly) {
  std::vector<double> line;
  for (int c = 0; c < 10; ++c) line.push_back(0.3 + 1.7 * c);
  for (auto kind : kLimited) {
    for (double kappa : {-1.0, 0.0, 1.0 / 3.0, 0.5}) {
      const auto faces = muscl_faces(line, kind, kappa);
      // faces touching the ghost cells stay first order
      for (std::size_t f = 1; f + 1 < faces.size(); ++f) {
        const double exact = 0.3 + 1.7 * (static_cast<double>(f) + 0.5);
        EXPECT_NEAR(faces[f].left, exact, 1e-12);
        EXPECT_NEAR(faces[f].right, exact, 1e-12);
      }
      EXPECT_EQ(faces.front().left, line[0]);
      EXPECT_EQ(faces.back().right, line.back());
    }
  }
}

TEST(Muscl, NoNewExtrema) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> line(12);
    for (auto& v : line) v = u(rng);
    if (trial % 2 == 0) std::sort(line.begin(), line.end());  // monotone steps
    for (auto kind : kLimited) {
      const auto faces = muscl_faces(line, kind, 1.0 / 3.0);
      for (std::size_t f = 0; f < faces.size(); ++f) {
        const double lo = std::min(line[f], line[f + 1]);
        const double hi = std::max(line[f], line[f + 1]);
        EXPECT_GE(faces[f].left, lo - 1e-12);
        EXPECT_LE(faces[f].left, hi + 1e-12);
        EXPECT_GE(faces[f].right, lo - 1e-12);
        EXPECT_LE(faces[f].right, hi + 1e-12);
      }
    }
  }
}

TEST(Muscl, RejectsBadInput) {
  const std::vector<double> one{1.0};
  EXPECT_THROW(muscl_faces(one, LimiterKind::minmod, 0.0), std::invalid_argument);
  const std::vector<double> two{1.0, 2.0};
  EXPECT_THROW(muscl_faces(two, LimiterKind::minmod, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace ashll
