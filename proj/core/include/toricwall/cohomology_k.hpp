#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "toricwall/secondary_fan.hpp"
#include "toricwall/toric_core.hpp"

namespace tw {

// Polynomial in the Euler constant gamma and zeta(2), ..., zeta(n); exponent
// vector index 0 is gamma, index k-1 is zeta(k).
struct SymPoly {
  std::map<std::vector<int>, Q> terms;
  int nvars = 0;

  static SymPoly constant(int nvars, const Q& c);
  static SymPoly variable(int nvars, int idx);
  bool is_zero() const;
  SymPoly operator+(const SymPoly& o) const;
  SymPoly operator*(const SymPoly& o) const;
  SymPoly scaled(const Q& c) const;
  double eval() const;
  std::string str() const;
};

// Rational cohomology ring of a smooth complete toric variety.
class ChowRing {
 public:
  static ChowRing build(const StackyFan& fan);

  int n() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const StackyFan& fan() const { return fan_; }
  int degree(int basis_index) const { return basis_deg_[basis_index]; }
  std::string basis_name(int i) const;

  QVec zero() const { return QVec(dim(), Q(0)); }
  QVec one() const;
  QVec divisor(int b) const;  // class of the toric divisor of S-element b (0 for a ghost)
  QVec mul(const QVec& a, const QVec& b) const;
  QVec pow(const QVec& a, int k) const;
  QVec exp(const QVec& a) const;         // a nilpotent (no degree-0 part)
  QVec truncate(const QVec& a, int max_degree) const;
  QVec degree_part(const QVec& a, int k) const;
  Q integrate(const QVec& a) const;
  QVec dual(const QVec& ch) const;       // negate odd degrees
  QVec c1() const;                       // first Chern class = sum of D_b over rays
  QVec todd() const;
  // 1-dimensional series in a nilpotent class: sum coef[k] a^k
  QVec series(const QVec& a, const std::vector<Q>& coef) const;

  // generic products for other coefficient rings
  template <class T, class FromQ>
  std::vector<T> mul_generic(const std::vector<T>& a, const std::vector<T>& b, FromQ from_q, const T& zero) const {
    std::vector<T> r(dim(), zero);
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) {
        if (basis_deg_[i] + basis_deg_[j] > n_) continue;
        for (const auto& [k, c] : table_[i][j]) r[k] = r[k] + a[i] * b[j] * from_q(c);
      }
    return r;
  }

  // coefficient of the top class in the basis and its integral
  int top_index() const { return top_; }
  Q top_integral() const { return top_value_; }

 private:
  StackyFan fan_;
  int n_ = 0;
  std::vector<int> rays_;
  std::vector<std::vector<int>> basis_;  // exponent vectors over rays
  std::vector<int> basis_deg_;
  std::vector<std::vector<std::vector<std::pair<int, Q>>>> table_;
  int top_ = 0;
  Q top_value_ = 1;
  std::map<std::vector<int>, QVec> monomial_nf_;
  QVec normal_form(const std::vector<int>& exps) const;
  // per-degree reduction data
  struct DegreeData {
    std::vector<std::vector<int>> monomials;
    std::map<std::vector<int>, int> index;
    QMat rref_rows;
    std::vector<int> pivots;
    std::vector<int> basis_cols;  // non-pivot monomials
    int basis_offset = 0;
  };
  std::vector<DegreeData> deg_;
};

struct GammaData {
  std::vector<SymPoly> gamma_class;  // coefficients on the ring basis
  std::vector<SymPoly> gamma_class_by_product;  // second expansion route
  bool routes_agree = false;
};

GammaData gamma_class(const ChowRing& ring);

struct KClass {
  QVec ch;
  std::string label;
};

// O(sum a_b D_b) for integer coefficients a over S (ghost entries must be 0).
KClass line_bundle(const ChowRing& ring, const std::vector<long>& a, std::string label = {});
KClass structure_sheaf_of_divisor(const ChowRing& ring, const QVec& divisor_class, std::string label = {});
KClass tensor(const ChowRing& ring, const KClass& a, const KClass& b);
KClass shift(const KClass& a);  // [-1]
KClass dual(const ChowRing& ring, const KClass& a);
KClass combine(const KClass& a, const Q& ca, const KClass& b, const Q& cb, std::string label = {});

// exact Euler pairing by Hirzebruch-Riemann-Roch (throws NonIntegral)
Z euler_pairing_hrr(const ChowRing& ring, const KClass& a, const KClass& b);
Q euler_pairing_hrr_exact(const ChowRing& ring, const KClass& a, const KClass& b);
// Euler pairing through the Gamma-integral structure, evaluated at 50 digits
std::complex<double> euler_pairing_gamma(const ChowRing& ring, const GammaData& g, const KClass& a, const KClass& b);

// Gram matrix G_ij = chi(V_i, V_j)
ZMat gram_hrr(const ChowRing& ring, const std::vector<KClass>& classes);
// Bilinear form matrix on the ring basis: chi(x, y) = x^T B y for ch vectors x, y.
QMat hrr_form(const ChowRing& ring);

struct OrlovBasis {
  std::vector<KClass> classes;
  std::vector<int> block_sizes;
  std::vector<std::vector<long>> kx_minus_basis;  // line bundles on X_- (coefficients over S)
  std::vector<std::vector<long>> kz_basis;
};

// Pull-back of the divisor class D_b^- to X_+ through the blow-down.
QVec pullback_divisor(const ChowRing& plus, const WallCrossing& wall, int b);
QVec pullback_line_bundle_c1(const ChowRing& plus, const WallCrossing& wall, const std::vector<long>& a);

OrlovBasis orlov_basis(const ChowRing& plus, const ChowRing& minus, const WallCrossing& wall, int h);

struct KRelationReport {
  bool m_plus_relation = false;
  bool l_relation = false;
};
KRelationReport verify_k_relations(const ChowRing& plus, const WallCrossing& wall);

struct SODReport {
  bool block_upper_triangular = false;
  bool unipotent_blocks = false;
  bool unimodular = false;
  ZMat gram;
  Z det;
};
SODReport verify_sod(const ChowRing& ring, const std::vector<KClass>& classes, const std::vector<int>& blocks);

}  // namespace tw
