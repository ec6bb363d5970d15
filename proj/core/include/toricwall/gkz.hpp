#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "toricwall/lg_model.hpp"
#include "toricwall/secondary_fan.hpp"

namespace tw {

// Splitting e_b^* = D^_b + chi(b) of the divisor sequence, fixed by one
// maximal cone sigma: D^_b is supported off sigma and chi(b) is the dual basis
// of the rays of sigma (zero for b outside sigma).
struct Splitting {
  int cone = -1;
  std::vector<QVec> D_hat;  // per b, in (Q^S)^*
  std::vector<QVec> chi;    // per b, in M_Q
  bool consistent = false;  // D^_b + chi(b) o bar == e_b^* for every b
};
Splitting psi_splitting(const StackyFan& fan);

// One factor z D_b(theta) + chi(b) - shift z.  The form D_b is stored in the
// coordinates theta_k dual to the chart basis of Lambda(Sigma).
struct GKZFactor {
  int b = -1;
  QVec form;
  Q shift;
};

struct GKZOperator {
  QVec v;       // free part of the generator index
  QVec lambda;  // element of L in Z^S
  QVec lambda_coords;  // lambda in the chart basis, for q^lambda
  std::vector<GKZFactor> lhs, rhs;  // P = prod(lhs) - q^lambda prod(rhs)
  int order() const;
  // canonical text form; chi(b) terms are printed only when equivariant
  std::string str(const StackyFan& fan, bool equivariant = false) const;
};

// Throws NotInMoriCone unless lambda lies in L and in NE-hat(X_Sigma).
GKZOperator gkz_relation(const StackyFan& fan, const QVec& v, const QVec& lambda);
bool in_extended_mori_cone(const StackyFan& fan, const QVec& lambda);

// Elements of the module, written in the monomials u^c (c in Q^S) with
// polynomial coefficients in z.
struct QVecLess {
  bool operator()(const QVec& a, const QVec& b) const;
};
using ZPoly = std::map<int, Q>;
using UElement = std::map<QVec, ZPoly, QVecLess>;

UElement generator(const StackyFan& fan, const QVec& v);  // w_v = u^{Psi(v)}
// The factor acts through its splitting data: sum_b' a_b' (z u_b' d/du_b' + u_b') - shift z.
UElement act(const StackyFan& fan, const Splitting& sp, const GKZFactor& f, const UElement& x);

struct AnnihilationReport {
  bool annihilated = false;
  UElement lhs, rhs;  // prod(lhs) w_v and q^lambda prod(rhs) w_v
  std::size_t terms = 0;
};
AnnihilationReport check_annihilation(const StackyFan& fan, const GKZOperator& P);

// Polynomials in xi_1..xi_m (and z as the last variable when expanded).
using XiPoly = std::map<std::vector<int>, Q>;
XiPoly poly_mul(const XiPoly& a, const XiPoly& b);
std::string poly_str(const XiPoly& p, int m, bool with_z = false);

struct Symbol {
  XiPoly one_part;  // sigma = one_part - q^lambda q_part
  XiPoly q_part;
  QVec lambda_coords;
  int order = 0;
  bool operator==(const Symbol& o) const {
    return one_part == o.one_part && q_part == o.q_part && lambda_coords == o.lambda_coords;
  }
};
// Top-degree part of the full expansion of both products.
Symbol principal_symbol(const GKZOperator& P);
// The three-case formula by the sign of sum lambda_b.
Symbol principal_symbol_by_cases(const GKZOperator& P);
std::string symbol_str(const Symbol& s);

// Commutative expansion of a product of factors as a polynomial in (xi, z)
// with chi set to the given numerical values (one per coordinate of M).
XiPoly expand_factors(const StackyFan& fan, const Splitting& sp, const std::vector<GKZFactor>& fs, const QVec& chi);
XiPoly top_degree(const XiPoly& p, int m);

struct WeakFanoReport {
  bool weak_fano = false;
  std::vector<int> outside;  // elements b of S with phi(b) > 1
};
WeakFanoReport weak_fano(const StackyFan& fan);

struct CharWitness {
  std::vector<int> support;  // candidate set {b : D_b(xi) != 0}
  QVec lambda;               // killing relation, empty if none
  bool realizable = false;
  bool killed = false;
};
struct CharVarietyReport {
  bool pass = false;
  std::vector<CharWitness> witnesses;  // realizable candidate supports
  int candidates = 0;
  std::string detail;
};
// Throws NotWeakFano.
CharVarietyReport char_variety_at_limit(const StackyFan& fan);

struct RankReport {
  long count = 0;
  long expected = 0;
  Z volume;
  long torsion = 1;
  bool ok = false;
};
// Volume of the fan polytope against the solver count at a random generic
// (equivariant) parameter.  Throws NotWeakFano or RankMismatch.
RankReport generic_rank_check(const StackyFan& fan, std::mt19937_64& rng);

}  // namespace tw
