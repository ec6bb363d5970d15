#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toricwall/toric_core.hpp"

namespace tw {

struct PLConeData {
  std::vector<QVec> inequalities;  // rows a with a.c >= 0 describing CPL_+ in R^S
  std::vector<QVec> cpl_plus_rays; // extreme rays of CPL_+ in R^S
  std::vector<QVec> cpl_rays;      // extreme rays of cpl in L* coordinates
  std::vector<QVec> cpl_facets;    // inward normals of cpl, in L coordinates
  ZMat PL_Z;                       // Z-basis of PL_Z in Z^S
  QMat pl_Z;                       // Z-basis of pl_Z in L* coordinates
};

PLConeData cpl_cone(const StackyFan& fan);

// CPL_+^dual and OE-hat have the same extreme rays.
bool cpl_oe_duality(const StackyFan& fan, const PLConeData& pl, const MoriData& mori);
// pl_Z is the dual lattice of Lambda(Sigma) (both inside L*/L rational spans).
bool pl_lambda_duality(const StackyFan& fan, const PLConeData& pl, const MoriData& mori);

// eta_c for c in CPL_+(Sigma): eta_c(v) = sum Psi(v)_b c_b.
Q eta(const StackyFan& fan, const QVec& c, const QVec& v);
// Integrality of eta_c at all lattice points of the support with |v|_inf <= height.
bool tilde_tau_check(const StackyFan& fan, const QVec& c, int height);

struct EnumerationLimits {
  int max_vectors = 16;
  int max_rank = 6;
  long max_nodes = 200000;
};

std::vector<StackyFan> enumerate_adapted_fans(const VectorSet& S, const EnumerationLimits& lim = {});

struct SecondaryFanReport {
  bool full_dimensional = true;
  bool interiors_disjoint = true;
  bool covers = true;
  bool ok() const { return full_dimensional && interiors_disjoint && covers; }
};
SecondaryFanReport verify_secondary_fan(const VectorSet& S, const std::vector<StackyFan>& fans);

enum class WallKind { Flip, ContractDivisor, ExtractDivisor, Root, Crepant, Unclassified };
std::string to_string(WallKind k);

struct WallCrossing {
  StackyFan plus, minus;
  bool swapped = false;  // inputs were exchanged to make the discrepancy nonnegative
  QVec w;                // primitive element of L inside Z^S
  QVec w_coords;         // w in the basis of L
  std::vector<int> M_plus, M_minus;
  Q discrepancy;
  WallKind kind = WallKind::Unclassified;
  std::string pattern;   // ray-set pattern, also recorded for crepant walls
  std::optional<QVec> hat_b;
  std::optional<long> J;
  std::optional<Z> K;
  // Law for the nonzero critical values valid for every discrepant wall:
  // gamma^J_w = -1/(K_w t_w) with t_w = q^{-w}.
  long J_w = 0;
  Q K_w;
  long k(int b) const { return w[b].get_num().get_si(); }
};

WallCrossing wall_between(const StackyFan& a, const StackyFan& b);

struct CurveChart {
  long e_plus = 1, e_minus = 1;
  // chart coordinates y_plus = q^{w/e_plus} near 0_{Sigma_+}, y_minus = q^{-w/e_minus}
  // glued by y_minus = y_plus^{-e_plus/e_minus}
  Q glue_exponent;
  struct Product {
    QVec v1, v2;
    bool zero = true;
    long power = 0;  // w_{v1} w_{v2} = y^power w_{v1+v2}
  };
  std::vector<Product> plus_products, minus_products;
  struct Glue {
    QVec v;
    Q power;  // w_v^- = y_plus^power w_v^+
  };
  std::vector<Glue> gluing;
  bool gluing_consistent = true;
};

CurveChart curve_chart(const WallCrossing& wall, int bound = 1);

}  // namespace tw
