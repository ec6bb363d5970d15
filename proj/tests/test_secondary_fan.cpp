#include <gtest/gtest.h>

#include <set>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "toricwall/secondary_fan.hpp"

using namespace tw;

namespace {

const StackyFan& with_cones(const std::vector<StackyFan>& fans, size_t n) {
  for (const auto& f : fans)
    if (f.cones.size() == n) return f;
  throw std::runtime_error("no fan with that many cones");
}

}  // namespace

TEST(SecondaryFan, FanCounts) {
  EXPECT_EQ(enumerate_adapted_fans(oracle::a1()).size(), 2u);
  EXPECT_EQ(enumerate_adapted_fans(oracle::p2()).size(), 1u);
  EXPECT_EQ(enumerate_adapted_fans(oracle::blowup_c2()).size(), 2u);
  for (long d = 3; d <= 5; ++d) EXPECT_EQ(enumerate_adapted_fans(oracle::cyclic(d)).size(), 2u);
  EXPECT_EQ(enumerate_adapted_fans(oracle::bl_line()).size(), 2u);
}

TEST(SecondaryFan, A1ChambersMeetAlongTheWall) {
  auto fans = enumerate_adapted_fans(oracle::a1());
  const auto& s1 = with_cones(fans, 1);
  const auto& s2 = with_cones(fans, 2);
  auto pl1 = cpl_cone(s1), pl2 = cpl_cone(s2);
  ASSERT_EQ(pl1.cpl_rays.size(), 1u);
  ASSERT_EQ(pl2.cpl_rays.size(), 1u);
  // the two chambers are the two half-lines of L*
  EXPECT_EQ(pl1.cpl_rays[0][0] * pl2.cpl_rays[0][0] < 0, true);
  // integral structure: 2Z on the side of Sigma1, Z on the side of Sigma2
  ASSERT_EQ(pl1.pl_Z.size(), 1u);
  ASSERT_EQ(pl2.pl_Z.size(), 1u);
  EXPECT_EQ(abs(pl1.pl_Z[0][0]), 2);
  EXPECT_EQ(abs(pl2.pl_Z[0][0]), 1);
}

TEST(SecondaryFan, DualityOnEveryChart) {
  for (const auto& S : {oracle::a1(), oracle::p2(), oracle::blowup_c2(), oracle::cyclic(3), oracle::cyclic(5), oracle::bl_line()})
    for (const auto& f : enumerate_adapted_fans(S)) {
      auto pl = cpl_cone(f);
      auto mori = extended_mori_cones(f);
      EXPECT_TRUE(cpl_oe_duality(f, pl, mori));
      EXPECT_TRUE(pl_lambda_duality(f, pl, mori));
      // every OE generator pairs nonnegatively with every CPL_+ ray, checked directly
      for (const auto& g : mori.oe_generators)
        for (const auto& c : pl.cpl_plus_rays) EXPECT_GE(dot(g, c), 0);
    }
}

TEST(SecondaryFan, SecondaryFanIsComplete) {
  for (const auto& S : {oracle::a1(), oracle::blowup_c2(), oracle::cyclic(4), oracle::bl_line()}) {
    auto rep = verify_secondary_fan(S, enumerate_adapted_fans(S));
    EXPECT_TRUE(rep.ok());
  }
}

TEST(SecondaryFan, WallKinds) {
  {
    auto f = enumerate_adapted_fans(oracle::a1());
    auto w = wall_between(f[0], f[1]);
    EXPECT_EQ(w.kind, WallKind::Crepant);
    EXPECT_EQ(w.discrepancy, 0);
    auto cc = curve_chart(w);
    EXPECT_EQ(cc.e_plus, 2);
    EXPECT_EQ(cc.e_minus, 1);
    EXPECT_EQ(cc.glue_exponent, -2);
    EXPECT_TRUE(cc.gluing_consistent);
  }
  {
    auto f = enumerate_adapted_fans(oracle::blowup_c2());
    auto w = wall_between(f[0], f[1]);
    EXPECT_EQ(w.kind, WallKind::ContractDivisor);
    ASSERT_TRUE(w.J.has_value());
    EXPECT_EQ(*w.J, 1);
    EXPECT_GT(w.discrepancy, 0);
  }
  {
    auto f = enumerate_adapted_fans(oracle::bl_line());
    auto w = wall_between(f[0], f[1]);
    EXPECT_EQ(w.kind, WallKind::ContractDivisor);
    ASSERT_TRUE(w.J.has_value());
    EXPECT_EQ(*w.J, 2);
    EXPECT_EQ(w.M_minus.size(), 1u);
    EXPECT_EQ(w.M_plus.size(), 3u);
    EXPECT_EQ(w.plus.cones.size(), 9u);
  }
}

TEST(SecondaryFan, DiscrepancyIsSumOfW) {
  // discrepancy equals sum_b w_b, computed independently from the kernel element
  for (const auto& S : {oracle::blowup_c2(), oracle::cyclic(3), oracle::cyclic(5), oracle::bl_line()}) {
    auto f = enumerate_adapted_fans(S);
    auto w = wall_between(f[0], f[1]);
    Q s = 0;
    for (const auto& x : w.w) s += x;
    EXPECT_EQ(s, w.discrepancy);
    EXPECT_GE(w.discrepancy, 0);
  }
}

TEST(SecondaryFan, NotAdjacent) {
  // three chambers in a row for F_2-like data: the end chambers do not share a wall
  auto S = VectorSet::make({2, {}}, {{1, 0}, {0, 1}, {-1, 2}, {0, -1}, {-1, 1}});
  auto fans = enumerate_adapted_fans(S);
  bool seen = false;
  for (size_t i = 0; i < fans.size(); ++i)
    for (size_t j = i + 1; j < fans.size(); ++j) {
      try {
        wall_between(fans[i], fans[j]);
      } catch (const Error& e) {
        EXPECT_EQ(e.kind(), "NotAdjacent");
        seen = true;
      }
    }
  EXPECT_TRUE(seen);
}
