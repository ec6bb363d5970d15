#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "toricwall/mutation_stokes.hpp"

using namespace tw;
using oracle::cplx;

namespace {

ZMat random_unipotent(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-4, 4);
  ZMat g(n, ZVec(n, 0));
  for (int i = 0; i < n; ++i) {
    g[i][i] = 1;
    for (int j = i + 1; j < n; ++j) g[i][j] = d(rng);
  }
  return g;
}

// markings on a line of decreasing imaginary part, so the order is the index order
std::vector<cplx> staircase(int n) {
  std::vector<cplx> u;
  for (int i = 0; i < n; ++i) u.push_back(cplx(0.3 * i, -static_cast<double>(i)));
  return u;
}

QMat pairing_matrix(const MarkedReflectionSystem& m) {
  QMat p(m.size(), QVec(m.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) p[i][j] = m.pair(i, j);
  return p;
}

}  // namespace

// Right mutation of v_i past a later v_j is undone by the left mutation of the
// result past v_j, and the other way round for an earlier v_j.
TEST(Mutation, InverseMutationsOnRandomGrams) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 2 + static_cast<int>(rng() % 5);
    auto g = random_unipotent(n, rng);
    auto m = MarkedReflectionSystem::abstract(g, {}, staircase(n), 0.0);
    int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
    if (i == j) continue;
    Direction first = i < j ? Direction::Right : Direction::Left;
    Direction second = i < j ? Direction::Left : Direction::Right;
    auto r = mutate(m, i, j, first);
    auto back = mutate(r, i, j, second);
    ASSERT_EQ(back.vectors, m.vectors) << trial;
    Q d0 = det(pairing_matrix(m)), d1 = det(pairing_matrix(r));
    ASSERT_EQ(d0, d1) << trial;
    ASSERT_EQ(d0, 1);
  }
}

TEST(Mutation, RightMutationFormula) {
  // v_i' = v_i - [v_i, v_j) v_j, pairings computed from the original Gram matrix
  ZMat g = {{1, 3, 6}, {0, 1, 3}, {0, 0, 1}};
  auto m = MarkedReflectionSystem::abstract(g, {"O", "O(1)", "O(2)"}, staircase(3), 0.0);
  auto r = mutate(m, 0, 1, Direction::Right);
  // v0' = e0 - [e0, e1) e1 = e0 - 3 e1
  auto G = [&](int a, int b) { return Q(g[a][b]); };
  EXPECT_EQ(r.pair(0, 2), G(0, 2) - 3 * G(1, 2));
  EXPECT_EQ(r.pair(1, 0), G(1, 0) - 3 * G(1, 1));
  EXPECT_EQ(r.pair(0, 0), G(0, 0) - 3 * G(0, 1) - 3 * G(1, 0) + 9 * G(1, 1));
}

TEST(Mutation, StokesMatrixRejectsNonSemiorthogonal) {
  ZMat g = {{1, 0}, {2, 1}};
  auto m = MarkedReflectionSystem::abstract(g, {}, staircase(2), 0.0);
  EXPECT_TW_ERROR(stokes_matrix(m), "NotSemiorthogonal");
  EXPECT_TW_ERROR(mutate(m, 0, 5, Direction::Left), "IndexOutOfRange");
}

TEST(Mutation, AdmissiblePhase) {
  EXPECT_TRUE(admissible(0.0, {cplx(0, 1), cplx(0, -1)}));
  EXPECT_FALSE(admissible(0.0, {cplx(0, 1), cplx(2, 1)}));
}

TEST(Mutation, CrossingProducesOneEventAndKeepsSemiorthogonality) {
  // u1 moves from below u0 to above it, passing through the ray u0 + R_{>0}
  ZMat g = {{1, 2}, {0, 1}};
  auto m = MarkedReflectionSystem::abstract(g, {"A", "B"}, {cplx(0, 0), cplx(1, -1)}, 0.0);
  auto path = [](double s) { return std::vector<cplx>{cplx(0, 0), cplx(1, -1 + 2 * s)}; };
  auto res = evolve_markings(m, path, 20);
  ASSERT_EQ(res.events.size(), 1u);
  EXPECT_FALSE(res.events[0].pass_through);
  auto sd = stokes_matrix(res.system);
  EXPECT_EQ(sd.order, (std::vector<int>{1, 0}));
  for (int i = 0; i < 2; ++i) EXPECT_EQ(sd.gram[i][i], 1);
  EXPECT_EQ(abs(sd.gram[0][1]), 2);
}

TEST(Mutation, OrthogonalCrossingIsPassThrough) {
  ZMat g = {{1, 0}, {0, 1}};
  auto m = MarkedReflectionSystem::abstract(g, {"A", "B"}, {cplx(0, 0), cplx(1, -1)}, 0.0);
  auto path = [](double s) { return std::vector<cplx>{cplx(0, 0), cplx(1, -1 + 2 * s)}; };
  auto res = evolve_markings(m, path, 20);
  ASSERT_EQ(res.events.size(), 1u);
  EXPECT_TRUE(res.events[0].pass_through);
  EXPECT_EQ(res.system.vectors, m.vectors);
}

TEST(Mutation, CrossingBehindTheRayDoesNothing) {
  // the marking crosses the horizontal line to the left of u0, off the ray
  ZMat g = {{1, 2}, {0, 1}};
  auto m = MarkedReflectionSystem::abstract(g, {"A", "B"}, {cplx(0, 0), cplx(-1, -1)}, 0.0);
  auto path = [](double s) { return std::vector<cplx>{cplx(0, 0), cplx(-1, -1 + 2 * s)}; };
  auto res = evolve_markings(m, path, 20);
  // a crossing event is still recorded, with the roles swapped so the mover lies on the pivot's ray
  for (const auto& e : res.events) EXPECT_NE(e.moving, e.pivot);
  EXPECT_NO_THROW(stokes_matrix(res.system));
}

TEST(Mutation, MutationReversesAlongReversedPath) {
  std::mt19937_64 rng(5);
  auto g = random_unipotent(4, rng);
  std::vector<cplx> u0 = {cplx(0, 3), cplx(1, 1), cplx(-1, 0), cplx(2, -2)};
  auto m = MarkedReflectionSystem::abstract(g, {}, u0, 0.0);
  auto path = [&](double s) {
    auto u = u0;
    u[3] = u0[3] + cplx(0, 6 * s);
    return u;
  };
  auto fwd = evolve_markings(m, path, 50);
  auto rev = evolve_markings(fwd.system, [&](double s) { return path(1 - s); }, 50);
  for (int i = 0; i < 4; ++i) {
    auto a = rev.system.vectors[i], b = m.vectors[i];
    EXPECT_TRUE(a == b || a == scale(b, -1)) << i;
  }
}
