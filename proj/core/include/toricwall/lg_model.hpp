#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "toricwall/expr.hpp"
#include "toricwall/secondary_fan.hpp"

namespace tw {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

struct Tolerances {
  double newton = 1e-12;   // relative residual of x dF/dx - chi
  double hess = 1e-9;      // relative determinant of the log-Hessian
  double collide = 1e-4;   // relative distance of two critical values
  double dedupe = 1e-7;    // log-coordinate identification
  int budget_factor = 200; // random starts per expected critical point
  int max_newton = 100;
};

// Laurent polynomial sum_j c_j x^{b_j} on the torus of N, possibly with an
// equivariant shift: F_T = F - sum chi_i log x_i.
struct LGPotential {
  int n = 0;
  std::vector<std::vector<long>> exps;  // free parts of the exponents
  std::vector<std::vector<long>> tors;  // torsion residues of the exponents
  std::vector<long> torsion;            // invariant factors of N_tor
  std::vector<cplx> coef;
  std::vector<cplx> chi;

  static LGPotential from_terms(int n, std::vector<std::vector<long>> exps, std::vector<cplx> coef,
                                std::vector<cplx> chi = {});

  long torsion_order() const;
  // Potential on the k-th component of the torus: coefficients twisted by the
  // k-th character of N_tor, torsion data dropped.
  LGPotential component(long k) const;

  cplx value(const CVec& ell) const;         // F_T at x = exp(ell)
  CVec log_gradient(const CVec& ell) const;  // x dF/dx - chi
  CMat log_hessian(const CVec& ell) const;
  // sum_j |c_j x^{b_j}| (1 + |b_j|), the scale used for relative residuals
  double scale(const CVec& ell) const;
  bool equivariant() const;
};

// Potential in the chart coordinates: each q_k = exp(log_q[k]) is the value of
// q^{basis_k} for rows basis_k of Q^S spanning L_Q.  The torus is normalised by
// setting the coefficients of a fixed basis subset of S to one.
LGPotential assemble_potential(const VectorSet& S, const QMat& basis, const std::vector<cplx>& log_q,
                               const std::vector<cplx>& chi = {});
// Same, with the Z-basis of Lambda(Sigma) of the chart as coordinate basis.
LGPotential assemble_potential(const StackyFan& chart, const std::vector<cplx>& q, const std::vector<cplx>& chi = {});
// Exponents of the term coefficients in the log_q: log c_b = sum_k M[b][k] log q_k.
QMat chart_exponents(const VectorSet& S, const QMat& basis);

struct CriticalDatum {
  CVec log_point;
  cplx value;
  CMat log_hessian;
  cplx det_hessian;
  cplx sqrt_det;
  bool nondegenerate = false;
  std::string tag = "unknown";  // convergent | divergent | unknown
  long component = 0;
};

CriticalDatum make_datum(const LGPotential& F, const CVec& ell, const Tolerances& tol = {});

// Damped Newton in log coordinates; true on convergence.
bool newton_solve(const LGPotential& F, CVec& ell, const Tolerances& tol, int max_iter);

struct PolytopeData {
  Z volume;              // normalized volume of conv(exponents)
  Z volume_with_origin;  // normalized volume of conv(exponents and 0)
  bool origin_interior = false;
};
PolytopeData newton_polytope(const std::vector<std::vector<long>>& exps, int n);

// Count predicted by the polytope: nullopt when no assertion applies.
std::optional<long> expected_count(const LGPotential& F);

struct CriticalSet {
  std::vector<CriticalDatum> points;
  std::optional<long> expected;
  long starts_used = 0;
};

CriticalSet critical_points(const LGPotential& F, std::mt19937_64& rng, const Tolerances& tol = {},
                            const std::vector<CVec>& extra_starts = {});

CriticalDatum conifold_point(const LGPotential& F, const Tolerances& tol = {});

struct CurveValue {
  cplx value;
  std::string branch;  // "zero" or "nonzero"
  long root_index = 0;
  long multiplicity = 1;
};

// gamma^J = -1/(K t) values for t = q^{-w}, plus the zero branch.
std::vector<CurveValue> curve_critical_values(const WallCrossing& wall, cplx t, long zero_multiplicity);

// Critical values of the potential restricted to the circuit of the wall, on
// the torus of the saturated span of the circuit, at t = q^{-w}.
struct CurveSolve {
  std::vector<cplx> nonzero_values;
  LGPotential circuit_potential;
  long zero_multiplicity = 0;
};
CurveSolve curve_critical_points(const WallCrossing& wall, cplx t, std::mt19937_64& rng, const Tolerances& tol = {});

struct FaceReport {
  std::vector<int> terms;  // indices of the terms on the face
  int dimension = 0;
  bool critical_point_found = false;
};
struct NondegeneracyReport {
  bool origin_interior = false;
  bool nondegenerate = false;
  int starts_per_face = 0;
  double window = 0;
  std::vector<FaceReport> faces;
};
NondegeneracyReport newton_nondegenerate(const LGPotential& F, std::mt19937_64& rng, int starts_per_face = 60);

// Laurent polynomial insertion phi = sum_j a_j x^{e_j}.
struct Insertion {
  std::vector<std::vector<long>> exps;
  std::vector<cplx> coef;
  static Insertion one(int n);
};

// a_0..a_order of the formal expansion of the oscillatory integral at p.
std::vector<cplx> asym_expansion(const LGPotential& F, const CriticalDatum& p, const Insertion& phi, int order);

// P(phi1, phi2) = sum_p Asym_p(phi1)(-z) Asym_p(phi2)(z), coefficients of z^0..z^order.
std::vector<cplx> higher_residue_pairing(const LGPotential& F, const std::vector<CriticalDatum>& pts,
                                         const Insertion& phi1, const Insertion& phi2, int order);

// A one-parameter family: coefficient_b(v) = prod_k q_k(v)^{M[b][k]}.
struct LGFamily {
  int n = 0;
  std::vector<std::vector<long>> exps;
  std::vector<std::vector<long>> tors;
  std::vector<long> torsion;
  std::vector<Expr> q;
  QMat M;
  std::vector<cplx> chi;

  static LGFamily chart(const VectorSet& S, const QMat& basis, std::vector<Expr> q, std::vector<cplx> chi = {});
  static LGFamily explicit_terms(int n, std::vector<std::vector<long>> exps, std::vector<Expr> coef,
                                 std::vector<cplx> chi = {});
  LGPotential at(cplx v) const;
  std::vector<cplx> dcoef(cplx v) const;  // derivative of each coefficient in v
};

struct TrackEvent {
  int step = 0;           // grid step at whose end the event lies
  double s = 0;           // path parameter in [0, 1]
  cplx param;             // value of the path variable
  std::string kind;       // collision_near_discriminant | branch_lost
  int branch_a = -1, branch_b = -1;
  cplx value;
};

struct Trajectory {
  LGFamily family;
  cplx v0, v1;                               // straight path v(s) = v0 + s (v1 - v0)
  std::vector<double> s;                     // grid parameters
  std::vector<std::vector<CriticalDatum>> points;  // points[step][branch]
  std::vector<TrackEvent> events;
  cplx param(double s) const { return v0 + s * (v1 - v0); }
  int branches() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
};

Trajectory track_critical_values(const LGFamily& family, cplx v0, cplx v1, int steps,
                                 const std::vector<CriticalDatum>& start, const Tolerances& tol = {});

// Re-solve all branches of a trajectory at a parameter between grid steps k and k+1.
std::vector<CriticalDatum> points_between(const Trajectory& tr, int k, double s, const Tolerances& tol = {});

// CSV with columns step, param, then Re/Im per branch; events as JSON text.
std::string trajectory_csv(const Trajectory& tr);
std::string trajectory_events_json(const Trajectory& tr);

}  // namespace tw
