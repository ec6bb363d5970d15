#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <numbers>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "toricwall/lg_model.hpp"
#include "toricwall/secondary_fan.hpp"

using namespace tw;
using oracle::cplx;

namespace {

LGFamily bl_line_family(const std::string& q1, const std::string& q2, const std::string& var) {
  auto S = oracle::bl_line();
  QMat basis;
  for (const auto& r : extended_sequences(S).L) basis.push_back(to_q(r));
  return LGFamily::chart(S, basis, {Expr::parse(q1, var), Expr::parse(q2, var)});
}

}  // namespace

TEST(Expr, ArithmeticAndPowers) {
  auto e = Expr::parse("(l^(2/3)+l^(2/5))^(-1)", "l");
  double l = 12.5;
  EXPECT_NEAR(e.eval(l).real(), 1 / (std::pow(l, 2.0 / 3) + std::pow(l, 0.4)), 1e-15);
  auto f = Expr::parse("2*i*s - 3/s", "s");
  EXPECT_NEAR(std::abs(f.eval(2.0) - cplx(-1.5, 4)), 0, 1e-15);
  auto d = Expr::parse("s^3", "s").eval_dual(2.0);
  EXPECT_NEAR(d.d.real(), 12, 1e-12);
}

TEST(Expr, SyntaxErrors) {
  EXPECT_TW_ERROR(Expr::parse("l^x", "l"), "ExpressionSyntax");
  EXPECT_TW_ERROR(Expr::parse("(l+1", "l"), "ExpressionSyntax");
  EXPECT_TW_ERROR(Expr::parse("sin(l)", "l"), "ExpressionSyntax");
}

TEST(LGModel, P2CriticalValues) {
  std::mt19937_64 rng(1);
  const cplx q(0.7, 0.2);
  auto F = LGPotential::from_terms(2, {{1, 0}, {0, 1}, {-1, -1}}, {1.0, 1.0, q});
  auto cs = critical_points(F, rng);
  ASSERT_EQ(cs.points.size(), 3u);
  std::vector<cplx> want, got;
  for (int k = 0; k < 3; ++k)
    want.push_back(3.0 * std::pow(q, 1.0 / 3) * std::polar(1.0, 2 * std::numbers::pi * k / 3));
  for (const auto& p : cs.points) got.push_back(p.value);
  EXPECT_LT(oracle::match_error(got, want), 1e-10);
  for (const auto& p : cs.points) EXPECT_TRUE(p.nondegenerate);
}

TEST(LGModel, BlLineCriticalValuesAtBothEnds) {
  auto fam = bl_line_family("(l^(2/3)+l^(2/5))^(-1)", "l*(l^(2/3)+l^(2/5))^(-3/2)", "l");
  std::mt19937_64 rng(3);
  for (double lambda : {0.0009, 12.5}) {
    auto cs = critical_points(fam.at(lambda), rng);
    std::vector<cplx> got;
    for (const auto& p : cs.points) got.push_back(p.value);
    ASSERT_EQ(got.size(), 9u);
    EXPECT_LT(oracle::match_error(got, oracle::bl_line_values(lambda)), 1e-8) << lambda;
  }
}

TEST(LGModel, ConifoldPointOfP1) {
  auto F = LGPotential::from_terms(1, {{1}, {-1}}, {1.0, 4.0});
  auto cp = conifold_point(F);
  EXPECT_NEAR(cp.value.real(), 4, 1e-12);
  EXPECT_NEAR(cp.value.imag(), 0, 1e-12);
}

TEST(LGModel, NonPositiveCoefficientsRejectedForConifold) {
  auto F = LGPotential::from_terms(1, {{1}, {-1}}, {1.0, -4.0});
  EXPECT_TW_ERROR(conifold_point(F), "NotPositiveReal");
}

TEST(LGModel, NewtonNondegenerateP2) {
  std::mt19937_64 rng(2);
  auto F = LGPotential::from_terms(2, {{1, 0}, {0, 1}, {-1, -1}}, {1.0, 1.0, 1.0});
  auto nd = newton_nondegenerate(F, rng);
  EXPECT_TRUE(nd.nondegenerate);
  EXPECT_TRUE(nd.origin_interior);
  EXPECT_EQ(expected_count(F).value_or(-1), 3);
}

TEST(LGModel, CyclicCountUsesTorsionAndVolume) {
  // Z/3 torsion: three copies of the P^1 mirror
  auto S = VectorSet::make({1, {3}}, {{1, 1}, {-1, 0}});
  QMat basis;
  for (const auto& r : extended_sequences(S).L) basis.push_back(to_q(r));
  auto F = assemble_potential(S, basis, {std::log(cplx(2.0))});
  EXPECT_EQ(expected_count(F).value_or(-1), 6);
  std::mt19937_64 rng(4);
  EXPECT_EQ(critical_points(F, rng).points.size(), 6u);
}

TEST(LGModel, DiscriminantCrossing) {
  // x^5 (x^2+1)^2 - lambda has a double root where its derivative vanishes at a nonzero root:
  // x^4 (x^2+1)(9x^2+5) = 0, so x^2 = -5/9
  std::vector<cplx> lam;
  for (cplx x : oracle::poly_roots({5.0, 0.0, 9.0})) lam.push_back(std::pow(x, 5) * std::pow(x * x + 1.0, 2));
  double target = 0;
  for (cplx l : lam)
    if (l.imag() > 0) target = l.imag();
  ASSERT_GT(target, 0.02);
  ASSERT_LT(target, 0.08);

  auto fam = bl_line_family("((i*s)^(2/3)+(i*s)^(2/5))^(-1)", "(i*s)*((i*s)^(2/3)+(i*s)^(2/5))^(-3/2)", "s");
  std::mt19937_64 rng(9);
  auto start = critical_points(fam.at(0.02), rng);
  auto tr = track_critical_values(fam, 0.02, 0.08, 60, start.points);
  ASSERT_EQ(tr.events.size(), 1u);
  EXPECT_NEAR(tr.events[0].param.real(), target, 1e-6);
}

TEST(LGModel, TrajectoryCsvLayout) {
  auto fam = LGFamily::explicit_terms(1, {{1}, {-1}}, {Expr::constant(1.0), Expr::parse("t", "t")});
  std::mt19937_64 rng(1);
  auto start = critical_points(fam.at(1.0), rng);
  auto tr = track_critical_values(fam, 1.0, 2.0, 4, start.points);
  auto csv = trajectory_csv(tr);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,param,re_u0,im_u0,re_u1,im_u1");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

TEST(LGModel, CurveLawOnBlowup) {
  auto f = enumerate_adapted_fans(oracle::blowup_c2());
  auto w = wall_between(f[0], f[1]);
  std::mt19937_64 rng(5);
  for (cplx t : {cplx(0.5), cplx(2.0), cplx(1, 1)}) {
    auto solve = curve_critical_points(w, t, rng);
    std::vector<cplx> law;
    for (const auto& v : curve_critical_values(w, t, solve.zero_multiplicity))
      if (v.branch == "nonzero") law.push_back(v.value);
    EXPECT_LT(oracle::match_error(solve.nonzero_values, law), 1e-8);
  }
}

// order-0 pairing against the Grothendieck residue sum phi1 phi2 / det(log Hessian) at closed-form critical points
TEST(LGModel, HigherResidueOrderZeroIsResidue) {
  std::mt19937_64 rng(6);
  {
    const cplx q(1.3, 0.4);
    auto F = LGPotential::from_terms(1, {{1}, {-1}}, {1.0, q});
    auto cs = critical_points(F, rng);
    Insertion x;
    x.exps = {{1}};
    x.coef = {1.0};
    // x = +-sqrt(q), log Hessian x + q/x = 2x; phi1 phi2 = x
    cplx res = 0;
    for (cplx r : {std::sqrt(q), -std::sqrt(q)}) res += r / (2.0 * r);
    auto P = higher_residue_pairing(F, cs.points, Insertion::one(1), x, 0);
    EXPECT_LT(std::abs(P[0] - res), 1e-8);
    auto P2 = higher_residue_pairing(F, cs.points, x, x, 0);
    cplx res2 = 0;
    for (cplx r : {std::sqrt(q), -std::sqrt(q)}) res2 += r * r / (2.0 * r);
    EXPECT_LT(std::abs(P2[0] - res2), 1e-8);
  }
  {
    const cplx q(0.8, -0.3);
    auto F = LGPotential::from_terms(2, {{1, 0}, {0, 1}, {-1, -1}}, {1.0, 1.0, q});
    auto cs = critical_points(F, rng);
    // x = y = r with r^3 = q; log Hessian r [[2,1],[1,2]] has determinant 3 r^2
    for (int a = 0; a <= 2; ++a) {
      Insertion xa;
      xa.exps = {{a, 0}};
      xa.coef = {1.0};
      cplx res = 0;
      for (int k = 0; k < 3; ++k) {
        cplx r = std::pow(q, 1.0 / 3) * std::polar(1.0, 2 * std::numbers::pi * k / 3);
        res += std::pow(r, a) / (3.0 * r * r);
      }
      auto P = higher_residue_pairing(F, cs.points, Insertion::one(2), xa, 0);
      EXPECT_LT(std::abs(P[0] - res), 1e-8) << a;
    }
  }
}

// Asym order 1 against direct quadrature of the oscillatory integral along the real thimble of x + 1/x
TEST(LGModel, AsymOrderOneAgainstQuadrature) {
  auto F = LGPotential::from_terms(1, {{1}, {-1}}, {1.0, 1.0});
  auto cp = conifold_point(F);
  auto a = asym_expansion(F, cp, Insertion::one(1), 3);
  using boost::math::quadrature::gauss_kronrod;
  // The expansion is of int e^{F/z}; at z = -w < 0 this is e^{-2/w} sqrt(2 pi w) (a0 - a1 w + ...).
  // R(w) = e^{2/w} / sqrt(2 pi w) * int e^{-2 cosh(l) / w} dl
  auto R = [](double z) {
    auto f = [z](double l) { return std::exp(-(2 * std::cosh(l) - 2) / z); };
    double L = std::acosh(1 + 40 * z);
    double I = gauss_kronrod<double, 61>::integrate(f, -L, L, 15, 1e-15);
    return I / std::sqrt(2 * std::numbers::pi * z);
  };
  // fit R(z) = c0 + c1 z + c2 z^2 + c3 z^3 + c4 z^4 on five small z
  const std::vector<double> zs = {0.005, 0.01, 0.015, 0.02, 0.025};
  Eigen::MatrixXd V(5, 5);
  Eigen::VectorXd y(5);
  for (int i = 0; i < 5; ++i) {
    for (int k = 0; k < 5; ++k) V(i, k) = std::pow(zs[i], k);
    y(i) = R(zs[i]);
  }
  Eigen::VectorXd c = V.fullPivLu().solve(y);
  EXPECT_NEAR(a[0].real(), c(0), 1e-9);
  EXPECT_NEAR(a[1].real(), -c(1), 1e-6);
  EXPECT_NEAR(a[1].imag(), 0, 1e-12);
}
