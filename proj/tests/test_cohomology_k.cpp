#include <gtest/gtest.h>

#include <random>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "toricwall/cohomology_k.hpp"
#include "toricwall/secondary_fan.hpp"

using namespace tw;

namespace {

ChowRing ring_of(const VectorSet& S) { return ChowRing::build(enumerate_adapted_fans(S).front()); }

std::vector<long> bundle(int size, std::initializer_list<std::pair<int, long>> xs) {
  std::vector<long> a(size, 0);
  for (auto [b, k] : xs) a[b] = k;
  return a;
}

std::vector<KClass> random_bundles(const ChowRing& R, int count, long range, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-range, range);
  std::vector<KClass> out;
  for (int i = 0; i < count; ++i) {
    std::vector<long> a(R.fan().S.size(), 0);
    for (int b : R.fan().rays) a[b] = d(rng);
    out.push_back(line_bundle(R, a));
  }
  return out;
}

}  // namespace

TEST(CohomologyK, PointIntegralOfProjectiveSpace) {
  auto R = ring_of(oracle::p4());
  EXPECT_EQ(R.integrate(R.pow(R.divisor(0), 4)), 1);
  auto R2 = ring_of(oracle::p1xp1());
  EXPECT_EQ(R2.integrate(R2.mul(R2.divisor(0), R2.divisor(1))), 1);
  EXPECT_EQ(R2.integrate(R2.mul(R2.divisor(0), R2.divisor(2))), 0);
}

TEST(CohomologyK, HrrOnProjectiveSpaces) {
  for (long n : {2L, 4L}) {
    auto R = ring_of(n == 2 ? oracle::p2() : oracle::p4());
    auto O = line_bundle(R, std::vector<long>(n + 1, 0));
    for (long k = -6; k <= 6; ++k) {
      auto Ok = line_bundle(R, bundle(static_cast<int>(n + 1), {{0, k}}));
      EXPECT_EQ(euler_pairing_hrr(R, O, Ok), oracle::chi_pn(n, k)) << "n=" << n << " k=" << k;
    }
  }
}

TEST(CohomologyK, HrrOnP1xP1) {
  auto R = ring_of(oracle::p1xp1());
  auto O = line_bundle(R, {0, 0, 0, 0});
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b)
      EXPECT_EQ(euler_pairing_hrr(R, O, line_bundle(R, {a, b, 0, 0})), oracle::chi_pn(1, a) * oracle::chi_pn(1, b));
}

TEST(CohomologyK, GammaClassRoutesAgree) {
  for (const auto& S : {oracle::p2(), oracle::p4(), oracle::p1xp1(), oracle::bl_line()})
    EXPECT_TRUE(gamma_class(ring_of(S)).routes_agree);
}

TEST(CohomologyK, GammaPairingMatchesHrrOnRandomBundles) {
  std::mt19937_64 rng(2024);
  for (const auto& S : {oracle::p2(), oracle::p4(), oracle::p1xp1(), oracle::bl_line()}) {
    auto R = ring_of(S);
    auto g = gamma_class(R);
    auto cls = random_bundles(R, 20, 3, rng);
    auto G = gram_hrr(R, cls);
    double worst = 0;
    for (size_t i = 0; i < cls.size(); ++i)
      for (size_t j = 0; j < cls.size(); ++j)
        worst = std::max(worst, std::abs(euler_pairing_gamma(R, g, cls[i], cls[j]) - G[i][j].get_d()));
    EXPECT_LE(worst, 1e-6);
  }
}

TEST(CohomologyK, BeilinsonCollectionIsExceptional) {
  auto R = ring_of(oracle::p2());
  std::vector<KClass> cls;
  for (long k = 0; k < 3; ++k) cls.push_back(line_bundle(R, {k, 0, 0}));
  auto G = gram_hrr(R, cls);
  ZMat want = {{1, 3, 6}, {0, 1, 3}, {0, 0, 1}};
  EXPECT_EQ(G, want);
}

TEST(CohomologyK, OrlovDecompositionOfBlowupOfLine) {
  auto fans = enumerate_adapted_fans(oracle::bl_line());
  auto w = wall_between(fans[0], fans[1]);
  auto plus = ChowRing::build(w.plus), minus = ChowRing::build(w.minus);
  auto kr = verify_k_relations(plus, w);
  EXPECT_TRUE(kr.m_plus_relation);
  EXPECT_TRUE(kr.l_relation);
  for (int h = 0; h <= 2; ++h) {
    auto ob = orlov_basis(plus, minus, w, h);
    EXPECT_EQ(ob.classes.size(), 9u);
    auto rep = verify_sod(plus, ob.classes, ob.block_sizes);
    EXPECT_TRUE(rep.block_upper_triangular) << h;
    EXPECT_TRUE(rep.unipotent_blocks) << h;
    EXPECT_TRUE(rep.unimodular) << h;
    EXPECT_EQ(abs(rep.det), 1);
  }
  EXPECT_EQ(orlov_basis(plus, minus, w, 1).block_sizes, (std::vector<int>{2, 5, 2}));
}

TEST(CohomologyK, NoncompactRejected) {
  auto f = enumerate_adapted_fans(oracle::blowup_c2()).front();
  EXPECT_TW_ERROR(ChowRing::build(f), "NotComplete");
  EXPECT_TW_ERROR(ChowRing::build(enumerate_adapted_fans(oracle::cyclic(3)).front()), "NotSmooth");
}
