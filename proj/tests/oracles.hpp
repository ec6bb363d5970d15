#pragma once

#include <Eigen/Eigenvalues>
#include <complex>
#include <vector>

#include "toricwall/toric_core.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline tw::VectorSet p1() { return tw::VectorSet::make({1, {}}, {{1}, {-1}}); }
inline tw::VectorSet p2() { return tw::VectorSet::make({2, {}}, {{1, 0}, {0, 1}, {-1, -1}}); }
inline tw::VectorSet p1xp1() { return tw::VectorSet::make({2, {}}, {{1, 0}, {0, 1}, {-1, 0}, {0, -1}}); }
inline tw::VectorSet p4() {
  return tw::VectorSet::make({4, {}}, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {-1, -1, -1, -1}});
}
inline tw::VectorSet a1() { return tw::VectorSet::make({2, {}}, {{-1, 1}, {1, 1}, {0, 1}}); }
inline tw::VectorSet blowup_c2() { return tw::VectorSet::make({2, {}}, {{1, 0}, {0, 1}, {1, 1}}); }
inline tw::VectorSet cyclic(long d) { return tw::VectorSet::make({2, {}}, {{0, 1}, {d, -1}, {1, 0}}); }
// e1..e4, e0 = -(e1+..+e4), b6 = e1+e2+e3
inline tw::VectorSet bl_line() {
  return tw::VectorSet::make({4, {}}, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {-1, -1, -1, -1}, {1, 1, 1, 0}});
}

// roots of sum c[k] x^k via the companion matrix
inline std::vector<cplx> poly_roots(std::vector<cplx> c) {
  while (!c.empty() && c.back() == cplx(0)) c.pop_back();
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C);
  std::vector<cplx> r;
  for (int i = 0; i < n; ++i) r.push_back(es.eigenvalues()[i]);
  return r;
}

// The nine critical values of the Bl_line P^4 mirror: t^{-1/2}(5x + 3x^3) over x^5 (x^2+1)^2 = lambda.
inline std::vector<cplx> bl_line_values(double lambda) {
  std::vector<cplx> c(10, 0.0);
  c[9] = 1;
  c[7] = 2;
  c[5] = 1;
  c[0] = -lambda;
  const double t = std::pow(lambda, 2.0 / 3) + std::pow(lambda, 0.4);
  std::vector<cplx> out;
  for (cplx x : poly_roots(c)) out.push_back((5.0 * x + 3.0 * x * x * x) / std::sqrt(t));
  return out;
}

// largest relative distance from each of `want` to the nearest unused element of `got`
inline double match_error(const std::vector<cplx>& got, const std::vector<cplx>& want) {
  if (got.size() != want.size()) return 1e300;
  std::vector<bool> used(got.size(), false);
  double worst = 0;
  for (cplx w : want) {
    double best = 1e300;
    size_t bi = 0;
    for (size_t i = 0; i < got.size(); ++i)
      if (!used[i] && std::abs(got[i] - w) / std::abs(w) < best) {
        best = std::abs(got[i] - w) / std::abs(w);
        bi = i;
      }
    used[bi] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

inline long binom(long n, long k) {
  if (k < 0 || n < k) return 0;
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}
// chi(P^n, O(k)) as a polynomial in k, valid for all integers
inline long chi_pn(long n, long k) {
  long num = 1;
  for (long i = 1; i <= n; ++i) num *= (k + i);
  long den = 1;
  for (long i = 2; i <= n; ++i) den *= i;
  return num / den;
}

}  // namespace oracle
