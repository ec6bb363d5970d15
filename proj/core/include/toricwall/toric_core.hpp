#pragma once

#include <string>
#include <vector>

#include "toricwall/exact.hpp"

namespace tw {

struct AbelianLattice {
  int rank = 0;
  std::vector<long> torsion;  // invariant factors, each >= 2, dividing successively

  long torsion_order() const;
  void validate() const;
};

// An element of N is its free part followed by one residue per torsion factor.
using LatticeElem = std::vector<long>;

struct VectorSet {
  AbelianLattice lattice;
  std::vector<LatticeElem> vectors;
  std::vector<std::string> labels;

  static VectorSet make(AbelianLattice lattice, std::vector<LatticeElem> vectors, std::vector<std::string> labels = {});

  int n() const { return lattice.rank; }
  int size() const { return static_cast<int>(vectors.size()); }
  QVec bar(int i) const;  // image in N/N_tor
  std::vector<QVec> bars() const;
  const std::vector<QVec>& support_facets() const { return support_facets_; }
  bool in_support(const QVec& v) const;

 private:
  std::vector<QVec> support_facets_;
};

// Extended fan sequence 0 -> L -> Z^S -> N and its dual.
struct Sequences {
  ZMat L;       // rows: Z-basis of the kernel, each of length |S|
  bool surjective = true;
  int r() const { return static_cast<int>(L.size()); }
  // D_b in L* coordinates (dual to the rows of L): D_b(l_i) = L[i][b]
  QVec D(int b) const;
  // linear map R^S -> L*_R
  QVec apply_D(const QVec& c) const;
  // element of Q^S from coordinates in the basis of L
  QVec from_coords(const QVec& y) const;
};

Sequences extended_sequences(const VectorSet& S);

struct StackyFan {
  VectorSet S;
  std::vector<int> rays;                // sorted indices into S
  std::vector<std::vector<int>> cones;  // maximal cones, sorted index lists, sorted
  Sequences seq;
  std::string name;

  bool is_ray(int b) const;
  std::vector<int> ghosts() const;
  // all faces (including the zero cone) of the maximal cones
  std::vector<std::vector<int>> all_cones() const;
  // coefficients of v in the rays of cone c (may be negative)
  QVec cone_coefficients(int cone, const QVec& v) const;
};

StackyFan validate_stacky_fan(const VectorSet& S, std::vector<std::vector<int>> cones, std::string name = {});

// Are the cones spanned by index sets a and b meeting in their common face?
bool proper_intersection(const VectorSet& S, const std::vector<int>& a, const std::vector<int>& b);
// Exact LP certificate for a strictly convex support function.
bool has_convex_support_function(const VectorSet& S, const std::vector<std::vector<int>>& cones);

struct BoxElement {
  QVec free;                 // v-bar in N/N_tor
  std::vector<long> torsion; // torsion residues of v
  std::vector<int> cone;     // minimal cone (indices into S)
  QVec coefficients;         // c_b for b in cone, in (0,1)
  Q age;
};

std::vector<BoxElement> box_elements(const StackyFan& fan);

struct OrbifoldDimension {
  long by_volume = 0;
  long by_box = 0;
};
OrbifoldDimension dim_orbifold_cohomology(const StackyFan& fan);

// Normalized volume of conv(0, rays of the cone), i.e. |det|.
Z cone_multiplicity(const StackyFan& fan, int cone);

// Psi^Sigma(v) in Q^S.
QVec psi_map(const StackyFan& fan, const QVec& v);
// Index of the first maximal cone containing v-bar, or -1.
int containing_cone(const StackyFan& fan, const QVec& v);

struct MoriData {
  std::vector<QVec> oe_generators;  // extreme rays of OE-hat in Q^S
  std::vector<QVec> ne_generators;  // extreme rays of NE-hat, as vectors of Q^S
  QMat lambda_basis;                // Z-basis of Lambda(Sigma) in Q^S
  std::vector<QVec> lambda_plus;    // Hilbert basis of Lambda(Sigma)_+ in Q^S
  // generators (lambda, v) of the monoid O(Sigma)_+
  struct OGen {
    QVec lambda;
    QVec v;
    std::string origin;  // "ray", "box" or "curve"
  };
  std::vector<OGen> o_plus;
};

// Generators of OE-hat before extreme-ray reduction.
std::vector<QVec> oe_raw_generators(const StackyFan& fan);
MoriData extended_mori_cones(const StackyFan& fan);

// delta_b = e_b - Psi(b) for a ghost b.
QVec ghost_delta(const StackyFan& fan, int b);

}  // namespace tw
