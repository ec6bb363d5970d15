#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "toricwall/secondary_fan.hpp"

using namespace tw;

namespace {

QVec qv(std::initializer_list<long> xs) { return to_q(std::vector<long>(xs)); }

// kernel rows must be integral, annihilated by S, and generate a saturated lattice
void expect_kernel(const VectorSet& S, const ZMat& L) {
  for (const auto& row : L)
    for (int i = 0; i < S.n(); ++i) {
      Z s = 0;
      for (int b = 0; b < S.size(); ++b) s += row[b] * S.vectors[b][i];
      EXPECT_EQ(s, 0);
    }
}

}  // namespace

TEST(ToricCore, A1KernelIsMinusOneMinusOneTwo) {
  auto seq = extended_sequences(oracle::a1());
  ASSERT_EQ(seq.r(), 1);
  QVec row = to_q(seq.L[0]);
  EXPECT_TRUE(row == qv({-1, -1, 2}) || row == qv({1, 1, -2})) << to_string(row);
}

TEST(ToricCore, KernelRowsAnnihilateS) {
  for (const auto& S : {oracle::p2(), oracle::p4(), oracle::bl_line(), oracle::cyclic(5), oracle::p1xp1()}) {
    auto seq = extended_sequences(S);
    EXPECT_EQ(seq.r(), S.size() - S.n());
    expect_kernel(S, seq.L);
  }
}

TEST(ToricCore, A1OPlusGenerators) {
  auto fans = enumerate_adapted_fans(oracle::a1());
  ASSERT_EQ(fans.size(), 2u);
  const StackyFan* s1 = nullptr;
  for (const auto& f : fans)
    if (f.cones.size() == 1) s1 = &f;
  ASSERT_NE(s1, nullptr);
  auto mori = extended_mori_cones(*s1);
  std::set<std::string> got, want = {"(1,0,0)|(-1,1)|ray", "(0,1,0)|(1,1)|ray", "(1/2,1/2,0)|(0,1)|box",
                                     "(-1/2,-1/2,1)|(0,0)|curve"};
  for (const auto& g : mori.o_plus) got.insert(to_string(g.lambda) + "|" + to_string(g.v) + "|" + g.origin);
  EXPECT_EQ(got, want);
}

TEST(ToricCore, BoxCountsMatchVolumes) {
  // C^2 / mu_d: the cone spanned by (0,1) and (d,-1) has index d
  for (long d = 2; d <= 6; ++d) {
    auto f = validate_stacky_fan(oracle::cyclic(d), {{0, 1}}, "c");
    auto box = box_elements(f);
    EXPECT_EQ(static_cast<long>(box.size()), d);
    EXPECT_EQ(cone_multiplicity(f, 0), d);
    // brute force: lattice points a(0,1)+b(d,-1) with a,b in [0,1); x = b d, y = a - b
    long count = 0;
    for (long x = 0; x < d; ++x)
      for (long y = -1; y <= 1; ++y) {
        Q b(x, d), a = Q(y) + b;
        if (a >= 0 && a < 1 && b >= 0 && b < 1) ++count;
      }
    EXPECT_EQ(count, d);
  }
}

TEST(ToricCore, AgesOfCyclicQuotient) {
  // (k, 0) = (k/3)(0,1) + (k/3)(3,-1) for k = 0, 1, 2
  auto f = validate_stacky_fan(oracle::cyclic(3), {{0, 1}}, "c");
  std::multiset<std::string> ages;
  for (const auto& b : box_elements(f)) ages.insert(b.age.get_str());
  EXPECT_EQ(ages, (std::multiset<std::string>{"0", "2/3", "4/3"}));
}

TEST(ToricCore, OrbifoldDimensionTwoWays) {
  for (const auto& S : {oracle::p2(), oracle::a1(), oracle::cyclic(4), oracle::bl_line()})
    for (const auto& f : enumerate_adapted_fans(S)) {
      auto d = dim_orbifold_cohomology(f);
      EXPECT_EQ(d.by_volume, d.by_box) << f.name;
    }
  auto f = enumerate_adapted_fans(oracle::p2()).front();
  EXPECT_EQ(dim_orbifold_cohomology(f).by_volume, 3);
}

TEST(ToricCore, ValidationErrors) {
  auto S = oracle::p2();
  EXPECT_TW_ERROR(validate_stacky_fan(S, {{0, 1}, {1, 2}}), "SupportMismatch");
  EXPECT_TW_ERROR(VectorSet::make({2, {}}, {{1, 0}, {0, 1, 1}}), "InvalidVector");
  EXPECT_TW_ERROR(VectorSet::make({-1, {}}, {{1}}), "InvalidLattice");
}

TEST(ToricCore, PsiIsLinearOnCones) {
  auto f = enumerate_adapted_fans(oracle::p2()).front();
  QVec v = qv({2, 3});
  QVec c = psi_map(f, v);
  // sum_b c_b b recovers v
  QVec back(2, Q(0));
  for (int b = 0; b < 3; ++b) back = add(back, scale(to_q(oracle::p2().vectors[b]), c[b]));
  EXPECT_EQ(back, v);
  EXPECT_GE(containing_cone(f, v), 0);
}
