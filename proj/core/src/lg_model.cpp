#include "toricwall/lg_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "toricwall/format.hpp"
#include "toricwall/polyhedral.hpp"

namespace tw {

namespace {
const char* kMod = "lg_model";
constexpr double kPi = 3.14159265358979323846;
const cplx kI(0.0, 1.0);

double wrap_angle(double a) {
  a = std::remainder(a, 2 * kPi);
  return a;
}

// distance of two log points modulo 2 pi i Z^n
double log_distance(const CVec& a, const CVec& b) {
  double s = 0;
  for (int i = 0; i < a.size(); ++i) {
    double re = a[i].real() - b[i].real();
    double im = wrap_angle(a[i].imag() - b[i].imag());
    s += re * re + im * im;
  }
  return std::sqrt(s);
}

cplx bdot(const std::vector<long>& b, const CVec& v) {
  cplx out = 0;
  for (size_t i = 0; i < b.size(); ++i) out += static_cast<double>(b[i]) * v[i];
  return out;
}

double bnorm(const std::vector<long>& b) {
  double s = 0;
  for (long x : b) s += static_cast<double>(x * x);
  return std::sqrt(s);
}

}  // namespace

// ---------------------------------------------------------------- LGPotential

LGPotential LGPotential::from_terms(int n, std::vector<std::vector<long>> exps, std::vector<cplx> coef,
                                    std::vector<cplx> chi) {
  LGPotential F;
  F.n = n;
  F.exps = std::move(exps);
  F.tors.assign(F.exps.size(), {});
  F.coef = std::move(coef);
  F.chi = chi.empty() ? std::vector<cplx>(n, 0.0) : std::move(chi);
  return F;
}

long LGPotential::torsion_order() const {
  long o = 1;
  for (long t : torsion) o *= t;
  return o;
}

LGPotential LGPotential::component(long k) const {
  LGPotential F = *this;
  if (torsion.empty()) return F;
  // mixed-radix digits of k index the characters of N_tor
  std::vector<long> ch(torsion.size());
  for (size_t j = 0; j < torsion.size(); ++j) {
    ch[j] = k % torsion[j];
    k /= torsion[j];
  }
  for (size_t t = 0; t < coef.size(); ++t) {
    double phase = 0;
    for (size_t j = 0; j < torsion.size(); ++j)
      phase += 2 * kPi * static_cast<double>(ch[j] * tors[t][j]) / static_cast<double>(torsion[j]);
    F.coef[t] = coef[t] * std::exp(kI * phase);
  }
  F.torsion.clear();
  F.tors.assign(F.exps.size(), {});
  return F;
}

bool LGPotential::equivariant() const {
  return std::any_of(chi.begin(), chi.end(), [](cplx c) { return std::abs(c) > 0; });
}

cplx LGPotential::value(const CVec& ell) const {
  cplx v = 0;
  for (size_t j = 0; j < exps.size(); ++j) v += coef[j] * std::exp(bdot(exps[j], ell));
  for (int i = 0; i < n; ++i) v -= chi[i] * ell[i];
  return v;
}

CVec LGPotential::log_gradient(const CVec& ell) const {
  CVec g = CVec::Zero(n);
  for (size_t j = 0; j < exps.size(); ++j) {
    cplx w = coef[j] * std::exp(bdot(exps[j], ell));
    for (int i = 0; i < n; ++i) g[i] += w * static_cast<double>(exps[j][i]);
  }
  for (int i = 0; i < n; ++i) g[i] -= chi[i];
  return g;
}

CMat LGPotential::log_hessian(const CVec& ell) const {
  CMat h = CMat::Zero(n, n);
  for (size_t j = 0; j < exps.size(); ++j) {
    cplx w = coef[j] * std::exp(bdot(exps[j], ell));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) h(a, b) += w * static_cast<double>(exps[j][a] * exps[j][b]);
  }
  return h;
}

double LGPotential::scale(const CVec& ell) const {
  double s = 0;
  for (size_t j = 0; j < exps.size(); ++j) s += std::abs(coef[j] * std::exp(bdot(exps[j], ell))) * (1 + bnorm(exps[j]));
  for (const auto& c : chi) s += std::abs(c);
  return s;
}

// ---------------------------------------------------------------- assembly

namespace {

// Lexicographically first basis subset of S with the smallest |det|.
std::vector<int> normalising_subset(const VectorSet& S) {
  const int n = S.n(), m = S.size();
  auto bars = S.bars();
  std::vector<int> best;
  Q best_det = -1;
  std::vector<int> idx(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      QMat a;
      for (int i : idx) a.push_back(bars[i]);
      Q d = abs(det(a));
      if (d != 0 && (best_det < 0 || d < best_det)) {
        best_det = d;
        best = idx;
      }
      return;
    }
    for (int i = start; i < m; ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  if (best.empty()) throw Error("InvalidParameter", kMod, "S does not span N_Q");
  return best;
}

void exps_from_set(const VectorSet& S, std::vector<std::vector<long>>& exps, std::vector<std::vector<long>>& tors) {
  const int n = S.n();
  for (const auto& v : S.vectors) {
    exps.emplace_back(v.begin(), v.begin() + n);
    tors.emplace_back(v.begin() + n, v.end());
  }
}

}  // namespace

QMat chart_exponents(const VectorSet& S, const QMat& basis) {
  const int m = S.size();
  const int r = static_cast<int>(basis.size());
  auto base = normalising_subset(S);
  std::vector<int> rest;
  for (int b = 0; b < m; ++b)
    if (!std::count(base.begin(), base.end(), b)) rest.push_back(b);
  if (static_cast<int>(rest.size()) != r) throw Error("InvalidParameter", kMod, "basis has the wrong rank");
  QMat A(r, QVec(r));
  for (int k = 0; k < r; ++k)
    for (int j = 0; j < r; ++j) A[k][j] = basis[k][rest[j]];
  auto inv = inverse(A);
  if (!inv) throw Error("InvalidParameter", kMod, "coordinate basis does not span L");
  QMat M(m, QVec(r, Q(0)));
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < r; ++k) M[rest[j]][k] = (*inv)[j][k];
  return M;
}

LGPotential assemble_potential(const VectorSet& S, const QMat& basis, const std::vector<cplx>& log_q,
                               const std::vector<cplx>& chi) {
  QMat M = chart_exponents(S, basis);
  LGPotential F;
  F.n = S.n();
  exps_from_set(S, F.exps, F.tors);
  F.torsion = S.lattice.torsion;
  for (int b = 0; b < S.size(); ++b) {
    cplx lc = 0;
    for (size_t k = 0; k < log_q.size(); ++k) lc += M[b][k].get_d() * log_q[k];
    F.coef.push_back(std::exp(lc));
  }
  F.chi = chi.empty() ? std::vector<cplx>(F.n, 0.0) : chi;
  return F;
}

LGPotential assemble_potential(const StackyFan& chart, const std::vector<cplx>& q, const std::vector<cplx>& chi) {
  auto mori = extended_mori_cones(chart);
  std::vector<cplx> lq;
  for (cplx x : q) {
    if (x == 0.0) throw Error("InvalidParameter", kMod, "chart coordinate at the large radius limit");
    lq.push_back(std::log(x));
  }
  if (lq.size() != mori.lambda_basis.size()) throw Error("InvalidParameter", kMod, "wrong number of chart coordinates");
  return assemble_potential(chart.S, mori.lambda_basis, lq, chi);
}

// ---------------------------------------------------------------- Newton

bool newton_solve(const LGPotential& F, CVec& ell, const Tolerances& tol, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    CVec g = F.log_gradient(ell);
    double sc = F.scale(ell);
    double res = g.norm();
    if (!std::isfinite(res) || !std::isfinite(sc)) return false;
    if (res <= tol.newton * sc) {
      // one polishing step
      CMat h = F.log_hessian(ell);
      CVec d = h.fullPivLu().solve(-g);
      if (d.allFinite()) {
        CVec t = ell + d;
        if (F.log_gradient(t).norm() <= res) ell = t;
      }
      return true;
    }
    CMat h = F.log_hessian(ell);
    CVec d = h.fullPivLu().solve(-g);
    if (!d.allFinite()) return false;
    double dn = d.norm();
    if (dn > 2.0) d *= 2.0 / dn;
    double alpha = 1.0;
    bool moved = false;
    while (alpha > 1e-6) {
      CVec t = ell + alpha * d;
      double r2 = F.log_gradient(t).norm();
      if (std::isfinite(r2) && r2 < res * (1 - 1e-4 * alpha)) {
        ell = t;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) return false;
  }
  return F.log_gradient(ell).norm() <= tol.newton * F.scale(ell);
}

CriticalDatum make_datum(const LGPotential& F, const CVec& ell, const Tolerances& tol) {
  CriticalDatum d;
  d.log_point = ell;
  for (int i = 0; i < ell.size(); ++i) d.log_point[i] = cplx(ell[i].real(), wrap_angle(ell[i].imag()));
  if (F.equivariant()) d.log_point = ell;  // the branch of log matters for F_T
  d.value = F.value(d.log_point);
  d.log_hessian = F.log_hessian(d.log_point);
  d.det_hessian = F.n == 0 ? cplx(1.0) : d.log_hessian.determinant();
  d.sqrt_det = std::sqrt(d.det_hessian);
  double hn = d.log_hessian.norm();
  d.nondegenerate = std::abs(d.det_hessian) > tol.hess * std::pow(std::max(hn, 1e-300), F.n);
  return d;
}

// ---------------------------------------------------------------- polytope

PolytopeData newton_polytope(const std::vector<std::vector<long>>& exps, int n) {
  PolytopeData P;
  auto volume_of = [n](std::vector<QVec> pts, bool& interior) -> Z {
    interior = false;
    QMat a(pts.begin(), pts.end());
    if (rank(a) < n + 1) return 0;
    auto verts = extreme_rays_of(pts, n + 1);
    Z vol = 0;
    for (const auto& simplex : triangulate(verts, n + 1)) {
      QMat m;
      for (int i : simplex) m.push_back(verts[i]);
      vol += Q(abs(det(m))).get_num();
    }
    auto facets = facets_of(verts, n + 1);
    interior = std::all_of(facets.begin(), facets.end(), [n](const QVec& f) { return f[n] > 0; });
    return vol;
  };
  std::vector<QVec> pts;
  for (const auto& e : exps) {
    QVec v = to_q(e);
    v.push_back(1);
    pts.push_back(v);
  }
  bool interior = false;
  P.volume = volume_of(pts, interior);
  P.origin_interior = interior;
  QVec o(n + 1, Q(0));
  o[n] = 1;
  pts.push_back(o);
  bool dummy = false;
  P.volume_with_origin = volume_of(pts, dummy);
  return P;
}

std::optional<long> expected_count(const LGPotential& F) {
  auto P = newton_polytope(F.exps, F.n);
  if (F.equivariant()) return F.torsion_order() * P.volume_with_origin.get_si();
  if (P.origin_interior) return F.torsion_order() * P.volume.get_si();
  return std::nullopt;
}

// ---------------------------------------------------------------- critical points

namespace {

bool positive_real(const LGPotential& F) {
  for (cplx c : F.coef)
    if (!(c.real() > 0) || std::abs(c.imag()) > 1e-12 * std::abs(c)) return false;
  for (cplx c : F.chi)
    if (std::abs(c.imag()) > 1e-12 * (1 + std::abs(c))) return false;
  return F.torsion.empty();
}

double log_window(const LGPotential& F) {
  double w = 0;
  for (cplx c : F.coef) w = std::max(w, std::abs(std::log(std::abs(c))));
  return 3.0 + w;
}

bool point_less(const CriticalDatum& a, const CriticalDatum& b) {
  if (a.component != b.component) return a.component < b.component;
  if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
  return a.value.imag() < b.value.imag();
}

}  // namespace

CriticalSet critical_points(const LGPotential& F, std::mt19937_64& rng, const Tolerances& tol,
                            const std::vector<CVec>& extra_starts) {
  CriticalSet out;
  out.expected = expected_count(F);
  const long comps = F.torsion_order();
  long budget_units = 1;
  if (out.expected)
    budget_units = std::max(1L, *out.expected);
  else
    budget_units = std::max(1L, newton_polytope(F.exps, F.n).volume_with_origin.get_si());
  const double w = log_window(F);
  std::uniform_real_distribution<double> ure(-w, w), uim(-kPi, kPi);
  for (long c = 0; c < comps; ++c) {
    LGPotential Fc = F.component(c);
    const long target = out.expected ? *out.expected / comps : -1;
    const long budget = static_cast<long>(tol.budget_factor) * budget_units / comps + 1;
    std::vector<CVec> found;
    std::vector<CVec> starts = c == 0 ? extra_starts : std::vector<CVec>{};
    if (positive_real(Fc) && !Fc.equivariant() && newton_polytope(Fc.exps, Fc.n).origin_interior) {
      try {
        starts.insert(starts.begin(), conifold_point(Fc, tol).log_point);
      } catch (const Error&) {
      }
    }
    auto try_start = [&](CVec ell) {
      ++out.starts_used;
      if (!newton_solve(Fc, ell, tol, tol.max_newton)) return;
      for (const auto& f : found)
        if (log_distance(f, ell) < tol.dedupe * (1 + ell.norm())) return;
      found.push_back(ell);
    };
    for (const auto& s : starts) try_start(s);
    for (long k = 0; k < budget && (target < 0 || static_cast<long>(found.size()) < target); ++k) {
      CVec ell(F.n);
      for (int i = 0; i < F.n; ++i) ell[i] = cplx(ure(rng), uim(rng));
      try_start(ell);
    }
    for (const auto& ell : found) {
      CriticalDatum d = make_datum(Fc, ell, tol);
      d.component = c;
      out.points.push_back(d);
    }
  }
  std::sort(out.points.begin(), out.points.end(), point_less);
  if (out.expected && static_cast<long>(out.points.size()) != *out.expected)
    throw Error("IncompleteCount", kMod,
                "found " + std::to_string(out.points.size()) + " critical points, expected " +
                    std::to_string(*out.expected));
  return out;
}

CriticalDatum conifold_point(const LGPotential& F, const Tolerances& tol) {
  if (!positive_real(F)) throw Error("NotPositiveReal", kMod, "parameter is not on the positive real locus");
  if (!newton_polytope(F.exps, F.n).origin_interior)
    throw Error("NotPositiveReal", kMod, "origin is not interior to the Newton polytope, F has no minimum");
  const int n = F.n;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  auto to_c = [](const Eigen::VectorXd& v) { return CVec(v.cast<cplx>()); };
  for (int it = 0; it < 500; ++it) {
    CVec cx = to_c(x);
    Eigen::VectorXd g = F.log_gradient(cx).real();
    Eigen::MatrixXd h = F.log_hessian(cx).real();
    if (g.norm() <= tol.newton * F.scale(cx)) break;
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    if (llt.info() != Eigen::Success) throw Error("NotPositiveReal", kMod, "Hessian is not positive definite");
    Eigen::VectorXd d = llt.solve(-g);
    if (d.norm() > 2.0) d *= 2.0 / d.norm();
    double f0 = F.value(cx).real();
    double alpha = 1.0;
    while (alpha > 1e-12) {
      Eigen::VectorXd t = x + alpha * d;
      double f1 = F.value(to_c(t)).real();
      if (f1 <= f0 + 1e-4 * alpha * g.dot(d)) break;
      alpha *= 0.5;
    }
    x += alpha * d;
  }
  CVec cx = to_c(x);
  CriticalDatum d = make_datum(F, cx, tol);
  Eigen::LLT<Eigen::MatrixXd> check(d.log_hessian.real());
  if (check.info() != Eigen::Success) throw Error("NotPositiveReal", kMod, "Hessian at the minimum is not positive definite");
  d.tag = "convergent";
  d.sqrt_det = std::sqrt(std::abs(d.det_hessian));
  return d;
}

// ---------------------------------------------------------------- wall curve

std::vector<CurveValue> curve_critical_values(const WallCrossing& wall, cplx t, long zero_multiplicity) {
  std::vector<CurveValue> out;
  out.push_back({0.0, "zero", 0, zero_multiplicity});
  const long J = wall.J_w;
  if (J <= 0) return out;
  const double K = wall.K_w.get_d();
  cplx base = -1.0 / (K * t);
  for (long k = 0; k < J; ++k) {
    cplx gamma = std::exp((std::log(base) + 2.0 * kPi * kI * static_cast<double>(k)) / static_cast<double>(J));
    out.push_back({static_cast<double>(J) * gamma, "nonzero", k, 1});
  }
  return out;
}

CurveSolve curve_critical_points(const WallCrossing& wall, cplx t, std::mt19937_64& rng, const Tolerances& tol) {
  const VectorSet& S = wall.plus.S;
  const int n = S.n();
  std::vector<int> circuit;
  for (int b = 0; b < S.size(); ++b)
    if (wall.w[b] != 0) circuit.push_back(b);
  // saturated lattice N' = N cap span(circuit)
  QMat rows;
  for (int b : circuit) rows.push_back(S.bar(b));
  auto normals = nullspace(rows, n);
  QMat basis;
  if (normals.empty()) {
    for (int i = 0; i < n; ++i) {
      QVec e(n, Q(0));
      e[i] = 1;
      basis.push_back(e);
    }
  } else {
    ZMat a;
    for (const auto& v : normals) a.push_back(primitive(v));
    for (const auto& r : integer_kernel(a, n)) basis.push_back(to_q(r));
  }
  const int m = static_cast<int>(basis.size());
  std::vector<std::vector<long>> exps;
  for (int b : circuit) {
    auto c = coordinates(basis, S.bar(b));
    if (!c) throw Error("InvalidParameter", kMod, "circuit vector outside its span lattice");
    exps.push_back(to_long(to_z(*c)));
  }
  // one circuit element carries the parameter: prod y_b^{k_b} = 1/t
  int g = -1;
  for (size_t i = 0; i < circuit.size(); ++i) {
    long k = wall.k(circuit[i]);
    if (g < 0 || std::labs(k) <= std::labs(wall.k(circuit[g]))) g = static_cast<int>(i);
  }
  std::vector<cplx> coef(circuit.size(), 1.0);
  coef[g] = std::exp(-std::log(t) / static_cast<double>(wall.k(circuit[g])));
  CurveSolve out;
  out.circuit_potential = LGPotential::from_terms(m, exps, coef);
  auto cs = critical_points(out.circuit_potential, rng, tol);
  for (const auto& p : cs.points) out.nonzero_values.push_back(p.value);
  out.zero_multiplicity = dim_orbifold_cohomology(wall.minus).by_volume;
  return out;
}

// ---------------------------------------------------------------- non-degeneracy

NondegeneracyReport newton_nondegenerate(const LGPotential& F, std::mt19937_64& rng, int starts_per_face) {
  NondegeneracyReport rep;
  rep.starts_per_face = starts_per_face;
  const int n = F.n;
  auto P = newton_polytope(F.exps, n);
  rep.origin_interior = P.origin_interior;
  if (!P.origin_interior) return rep;
  std::vector<QVec> pts;
  for (const auto& e : F.exps) {
    QVec v = to_q(e);
    v.push_back(1);
    pts.push_back(v);
  }
  auto verts = extreme_rays_of(pts, n + 1);
  auto facets = facets_of(verts, n + 1);
  // faces are intersections of facets, described by the terms lying on them
  std::set<std::vector<int>> faces;
  std::vector<std::vector<int>> frontier;
  for (const auto& f : facets) {
    std::vector<int> on;
    for (size_t j = 0; j < pts.size(); ++j)
      if (dot(f, pts[j]) == 0) on.push_back(static_cast<int>(j));
    if (faces.insert(on).second) frontier.push_back(on);
  }
  std::vector<std::vector<int>> facet_sets(frontier.begin(), frontier.end());
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& a : frontier)
      for (const auto& b : facet_sets) {
        std::vector<int> c;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
        if (!c.empty() && faces.insert(c).second) next.push_back(c);
      }
    frontier = std::move(next);
  }
  rep.window = log_window(F);
  std::uniform_real_distribution<double> ure(-rep.window, rep.window), uim(-kPi, kPi);
  rep.nondegenerate = true;
  for (const auto& face : faces) {
    FaceReport fr;
    fr.terms = face;
    QMat a;
    for (int j : face) a.push_back(pts[j]);
    fr.dimension = rank(a) - 1;
    LGPotential f;
    f.n = n;
    f.chi.assign(n, 0.0);
    for (int j : face) {
      f.exps.push_back(F.exps[j]);
      f.coef.push_back(F.coef[j]);
      f.tors.push_back({});
    }
    // minimum-norm Gauss-Newton on x df/dx = 0 with a scale-free residual
    for (int s = 0; s < starts_per_face && !fr.critical_point_found; ++s) {
      CVec ell(n);
      for (int i = 0; i < n; ++i) ell[i] = cplx(ure(rng), uim(rng));
      for (int it = 0; it < 80; ++it) {
        CVec g = f.log_gradient(ell);
        double sc = f.scale(ell);
        if (!std::isfinite(sc) || sc == 0) break;
        if (g.norm() < 1e-11 * sc) {
          fr.critical_point_found = true;
          break;
        }
        CMat h = f.log_hessian(ell);
        CVec d = h.completeOrthogonalDecomposition().solve(-g);
        if (!d.allFinite()) break;
        if (d.norm() > 2.0) d *= 2.0 / d.norm();
        ell += d;
      }
    }
    if (fr.critical_point_found) rep.nondegenerate = false;
    rep.faces.push_back(fr);
  }
  return rep;
}

// ---------------------------------------------------------------- asymptotic expansion

namespace {

using Mono = std::vector<int>;
using Poly = std::map<Mono, cplx>;

int mono_degree(const Mono& m) { return std::accumulate(m.begin(), m.end(), 0); }

Poly poly_mul(const Poly& a, const Poly& b, int max_deg) {
  Poly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Mono e(ea.size());
      int d = 0;
      for (size_t i = 0; i < e.size(); ++i) {
        e[i] = ea[i] + eb[i];
        d += e[i];
      }
      if (d > max_deg) continue;
      r[e] += ca * cb;
    }
  return r;
}

// truncated Taylor series of w * exp(b . ell)
Poly exp_linear(int n, const std::vector<long>& b, cplx w, int min_deg, int max_deg) {
  Poly lin;
  for (int i = 0; i < n; ++i)
    if (b[i] != 0) {
      Mono e(n, 0);
      e[i] = 1;
      lin[e] = static_cast<double>(b[i]);
    }
  Poly r;
  Poly p;
  p[Mono(n, 0)] = 1.0;
  double fact = 1;
  for (int k = 0; k <= max_deg; ++k) {
    if (k > 0) {
      p = poly_mul(p, lin, max_deg);
      fact *= k;
    }
    if (k >= min_deg)
      for (const auto& [e, c] : p) r[e] += w * c / fact;
  }
  return r;
}

// Gaussian expectation of a homogeneous polynomial of degree 2m with covariance C.
cplx wick(const Poly& p, const CMat& C, int m) {
  const int n = static_cast<int>(C.rows());
  Poly cur = p;
  for (int step = 0; step < m; ++step) {
    Poly next;
    for (const auto& [e, c] : cur)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Mono f = e;
          double coeff = 1;
          if (i == j) {
            if (f[i] < 2) continue;
            coeff = f[i] * (f[i] - 1);
            f[i] -= 2;
          } else {
            if (f[i] < 1 || f[j] < 1) continue;
            coeff = f[i];
            f[i] -= 1;
            coeff *= f[j];
            f[j] -= 1;
          }
          next[f] += 0.5 * C(i, j) * coeff * c;
        }
    cur = std::move(next);
  }
  double mf = 1;
  for (int k = 2; k <= m; ++k) mf *= k;
  auto it = cur.find(Mono(n, 0));
  return it == cur.end() ? cplx(0) : it->second / mf;
}

}  // namespace

Insertion Insertion::one(int n) {
  Insertion i;
  i.exps.push_back(std::vector<long>(n, 0));
  i.coef.push_back(1.0);
  return i;
}

std::vector<cplx> asym_expansion(const LGPotential& F, const CriticalDatum& p, const Insertion& phi, int order) {
  if (!p.nondegenerate) throw Error("DegenerateCritical", kMod, "critical point is degenerate");
  const int n = F.n;
  LGPotential Fc = F.component(p.component);
  const int jmax = 2 * order;
  const int D = 2 * (order + jmax);
  Poly f3, ph;
  for (size_t j = 0; j < Fc.exps.size(); ++j) {
    cplx w = Fc.coef[j] * std::exp(bdot(Fc.exps[j], p.log_point));
    for (const auto& [e, c] : exp_linear(n, Fc.exps[j], w, 3, D)) f3[e] += c;
  }
  for (size_t j = 0; j < phi.exps.size(); ++j) {
    cplx w = phi.coef[j] * std::exp(bdot(phi.exps[j], p.log_point));
    for (const auto& [e, c] : exp_linear(n, phi.exps[j], w, 0, D)) ph[e] += c;
  }
  CMat C = -p.log_hessian.inverse();
  std::vector<cplx> a(order + 1, 0.0);
  Poly pj = ph;
  double jf = 1;
  for (int j = 0; j <= jmax; ++j) {
    if (j > 0) {
      pj = poly_mul(pj, f3, 2 * (order + jmax));
      jf *= j;
    }
    for (int k = 0; k <= order; ++k) {
      const int deg = 2 * (k + j);
      Poly part;
      for (const auto& [e, c] : pj)
        if (mono_degree(e) == deg) part[e] = c;
      if (!part.empty()) a[k] += wick(part, C, k + j) / jf;
    }
  }
  cplx norm = 1.0 / (static_cast<double>(F.torsion_order()) * p.sqrt_det);
  for (auto& x : a) x *= norm;
  return a;
}

std::vector<cplx> higher_residue_pairing(const LGPotential& F, const std::vector<CriticalDatum>& pts,
                                         const Insertion& phi1, const Insertion& phi2, int order) {
  std::vector<cplx> P(order + 1, 0.0);
  for (const auto& p : pts) {
    auto a1 = asym_expansion(F, p, phi1, order);
    auto a2 = asym_expansion(F, p, phi2, order);
    for (int m = 0; m <= order; ++m)
      for (int i = 0; i <= m; ++i) P[m] += ((i % 2) ? -1.0 : 1.0) * a1[i] * a2[m - i];
  }
  return P;
}

// ---------------------------------------------------------------- families

LGFamily LGFamily::chart(const VectorSet& S, const QMat& basis, std::vector<Expr> q, std::vector<cplx> chi) {
  LGFamily f;
  f.n = S.n();
  exps_from_set(S, f.exps, f.tors);
  f.torsion = S.lattice.torsion;
  f.M = chart_exponents(S, basis);
  f.q = std::move(q);
  f.chi = chi.empty() ? std::vector<cplx>(f.n, 0.0) : std::move(chi);
  return f;
}

LGFamily LGFamily::explicit_terms(int n, std::vector<std::vector<long>> exps, std::vector<Expr> coef,
                                  std::vector<cplx> chi) {
  LGFamily f;
  f.n = n;
  f.exps = std::move(exps);
  f.tors.assign(f.exps.size(), {});
  f.q = std::move(coef);
  f.M.assign(f.exps.size(), QVec(f.exps.size(), Q(0)));
  for (size_t i = 0; i < f.exps.size(); ++i) f.M[i][i] = 1;
  f.chi = chi.empty() ? std::vector<cplx>(n, 0.0) : std::move(chi);
  return f;
}

LGPotential LGFamily::at(cplx v) const {
  LGPotential F;
  F.n = n;
  F.exps = exps;
  F.tors = tors;
  F.torsion = torsion;
  F.chi = chi;
  std::vector<cplx> lq;
  for (const auto& e : q) {
    cplx x = e.eval(v);
    if (x == 0.0) throw Error("InvalidParameter", kMod, "coefficient vanishes at a path point");
    lq.push_back(std::log(x));
  }
  for (size_t b = 0; b < exps.size(); ++b) {
    cplx lc = 0;
    for (size_t k = 0; k < lq.size(); ++k)
      if (M[b][k] != 0) lc += M[b][k].get_d() * lq[k];
    F.coef.push_back(std::exp(lc));
  }
  return F;
}

std::vector<cplx> LGFamily::dcoef(cplx v) const {
  std::vector<Dual> d;
  for (const auto& e : q) d.push_back(e.eval_dual(v));
  LGPotential F = at(v);
  std::vector<cplx> out(exps.size(), 0.0);
  for (size_t b = 0; b < exps.size(); ++b) {
    cplx s = 0;
    for (size_t k = 0; k < q.size(); ++k)
      if (M[b][k] != 0) s += M[b][k].get_d() * d[k].d / d[k].v;
    out[b] = F.coef[b] * s;
  }
  return out;
}

// ---------------------------------------------------------------- tracking

namespace {

class Tracker {
 public:
  Tracker(const LGFamily& fam, cplx v0, cplx v1, const Tolerances& tol) : fam_(fam), v0_(v0), v1_(v1), tol_(tol) {}

  cplx param(cplx s) const { return v0_ + s * (v1_ - v0_); }

  LGPotential potential(cplx s, long comp) const { return fam_.at(param(s)).component(comp); }

  // derivative of the coefficients along the path parameter s
  std::vector<cplx> dcoef_ds(cplx s, long comp) const {
    auto d = fam_.dcoef(param(s));
    LGPotential F0 = fam_.at(param(s));
    LGPotential Fc = F0.component(comp);
    for (size_t b = 0; b < d.size(); ++b) d[b] = d[b] * (Fc.coef[b] / F0.coef[b]) * (v1_ - v0_);
    return d;
  }

  CVec g_s(const LGPotential& F, const std::vector<cplx>& dc, const CVec& ell) const {
    CVec g = CVec::Zero(F.n);
    for (size_t j = 0; j < F.exps.size(); ++j) {
      cplx w = dc[j] * std::exp(bdot(F.exps[j], ell));
      for (int i = 0; i < F.n; ++i) g[i] += w * static_cast<double>(F.exps[j][i]);
    }
    return g;
  }

  // Advance the branches in mask from s to s + h; false if any corrector step
  // is not clearly attached to its own branch.
  bool attempt(std::vector<CVec>& ell, const std::vector<long>& comp, const std::vector<bool>& mask, double s,
               double h) const {
    const size_t N = ell.size();
    std::vector<double> sep(N, 1e300);
    for (size_t i = 0; i < N; ++i)
      for (size_t j = 0; j < N; ++j)
        if (i != j && comp[i] == comp[j]) sep[i] = std::min(sep[i], log_distance(ell[i], ell[j]));
    std::vector<CVec> next = ell;
    for (size_t i = 0; i < N; ++i) {
      if (!mask[i]) continue;
      LGPotential F = potential(s, comp[i]);
      CMat H = F.log_hessian(ell[i]);
      CVec gs = g_s(F, dcoef_ds(s, comp[i]), ell[i]);
      CVec tangent = H.fullPivLu().solve(-gs);
      if (!tangent.allFinite()) return false;
      CVec pred = ell[i] + h * tangent;
      LGPotential F1 = potential(s + h, comp[i]);
      CVec x = pred;
      if (!newton_solve(F1, x, tol_, 12)) return false;
      double corr = (x - pred).norm();
      double move = (x - ell[i]).norm();
      if (corr > 0.2 * sep[i] || move > 0.35 * sep[i] || corr > 0.25) return false;
      next[i] = x;
    }
    for (size_t i = 0; i < N; ++i)
      for (size_t j = i + 1; j < N; ++j)
        if (comp[i] == comp[j] && log_distance(next[i], next[j]) < 1e-9) return false;
    ell = std::move(next);
    return true;
  }

  struct Fold {
    bool found = false;
    cplx s;
    CVec ell, v;
  };

  // Bordered Newton for a fold: g = 0, H v = 0, a.v = 1 in (ell, v, s).
  Fold locate_fold(const CVec& ell0, const CVec& v0, double s0, long comp) const {
    const int n = fam_.n;
    Fold f;
    CVec ell = ell0, v = v0 / v0.norm();
    CVec a = v.conjugate();
    cplx s = s0;
    for (int it = 0; it < 60; ++it) {
      LGPotential F = potential(s, comp);
      auto dc = dcoef_ds(s, comp);
      CVec g = F.log_gradient(ell);
      CMat H = F.log_hessian(ell);
      CMat Tv = CMat::Zero(n, n);
      CMat Hs = CMat::Zero(n, n);
      CVec gs = CVec::Zero(n);
      for (size_t j = 0; j < F.exps.size(); ++j) {
        cplx xb = std::exp(bdot(F.exps[j], ell));
        cplx w = F.coef[j] * xb;
        cplx bv = bdot(F.exps[j], v);
        cplx ws = dc[j] * xb;
        for (int p = 0; p < n; ++p) {
          gs[p] += ws * static_cast<double>(F.exps[j][p]);
          for (int q = 0; q < n; ++q) {
            double bb = static_cast<double>(F.exps[j][p] * F.exps[j][q]);
            Tv(p, q) += w * bv * bb;
            Hs(p, q) += ws * bb;
          }
        }
      }
      CVec r(2 * n + 1);
      r.head(n) = g;
      r.segment(n, n) = H * v;
      r[2 * n] = (a.transpose() * v)(0) - 1.0;
      double sc = F.scale(ell);
      if (r.head(2 * n).norm() < 1e-12 * sc && std::abs(r[2 * n]) < 1e-12) {
        f.found = true;
        break;
      }
      CMat Jm = CMat::Zero(2 * n + 1, 2 * n + 1);
      Jm.block(0, 0, n, n) = H;
      Jm.block(0, 2 * n, n, 1) = gs;
      Jm.block(n, 0, n, n) = Tv;
      Jm.block(n, n, n, n) = H;
      Jm.block(n, 2 * n, n, 1) = Hs * v;
      Jm.block(2 * n, n, 1, n) = a.transpose();
      CVec d = Jm.fullPivLu().solve(-r);
      if (!d.allFinite()) break;
      if (d.norm() > 0.5) d *= 0.5 / d.norm();
      ell += d.head(n);
      v += d.segment(n, n);
      s += d[2 * n];
    }
    f.s = s;
    f.ell = ell;
    f.v = v;
    return f;
  }

  const LGFamily& fam_;
  cplx v0_, v1_;
  Tolerances tol_;
};

}  // namespace

Trajectory track_critical_values(const LGFamily& family, cplx v0, cplx v1, int steps,
                                 const std::vector<CriticalDatum>& start, const Tolerances& tol) {
  if (steps < 1) throw Error("InvalidParameter", kMod, "steps must be positive");
  Trajectory tr;
  tr.family = family;
  tr.v0 = v0;
  tr.v1 = v1;
  Tracker T(tr.family, v0, v1, tol);
  const size_t N = start.size();
  std::vector<CVec> ell;
  std::vector<long> comp;
  for (const auto& p : start) {
    ell.push_back(p.log_point);
    comp.push_back(p.component);
  }
  std::vector<cplx> sqrt_prev;
  auto record = [&](int step, double s) {
    std::vector<CriticalDatum> row;
    for (size_t i = 0; i < N; ++i) {
      LGPotential F = T.potential(s, comp[i]);
      CriticalDatum d = make_datum(F, ell[i], tol);
      d.log_point = ell[i];
      d.value = F.value(ell[i]);
      d.component = comp[i];
      if (step == 0) {
        d.sqrt_det = start[i].sqrt_det;
        if (std::abs(d.sqrt_det * d.sqrt_det - d.det_hessian) > 1e-8 * (1 + std::abs(d.det_hessian)))
          d.sqrt_det = std::sqrt(d.det_hessian);
        d.tag = start[i].tag;
      } else {
        if (std::abs(d.sqrt_det - sqrt_prev[i]) > std::abs(-d.sqrt_det - sqrt_prev[i])) d.sqrt_det = -d.sqrt_det;
        d.tag = tr.points.back()[i].tag;
      }
      row.push_back(d);
    }
    sqrt_prev.clear();
    for (const auto& d : row) sqrt_prev.push_back(d.sqrt_det);
    tr.s.push_back(s);
    tr.points.push_back(std::move(row));
  };
  record(0, 0.0);
  const double H = 1.0 / steps;
  const double hmin = 1e-10;
  double s = 0;
  std::vector<bool> all(N, true);
  for (int k = 0; k < steps; ++k) {
    const double s_end = (k + 1) * H;
    double h = s_end - s;
    while (s < s_end - 1e-15) {
      h = std::min(h, s_end - s);
      std::vector<CVec> trial = ell;
      if (T.attempt(trial, comp, all, s, h)) {
        ell = std::move(trial);
        s += h;
        h *= 2;
        continue;
      }
      h *= 0.5;
      if (h >= hmin) continue;
      // persistent failure: look for a fold between the two closest branches
      int bi = -1, bj = -1;
      double best = 1e300;
      for (size_t i = 0; i < N; ++i)
        for (size_t j = i + 1; j < N; ++j)
          if (comp[i] == comp[j]) {
            double d = log_distance(ell[i], ell[j]);
            if (d < best) {
              best = d;
              bi = static_cast<int>(i);
              bj = static_cast<int>(j);
            }
          }
      Tracker::Fold fold;
      if (bi >= 0) {
        CVec mid = 0.5 * (ell[bi] + ell[bj]);
        CVec dir = ell[bi] - ell[bj];
        fold = T.locate_fold(mid, dir, s, comp[bi]);
      }
      const bool on_path = fold.found && std::abs(fold.s.imag()) < 1e-8 && fold.s.real() > s - 1e-6 &&
                           fold.s.real() < s_end + 1e-9;
      if (!on_path) {
        TrackEvent ev;
        ev.step = k + 1;
        ev.s = s;
        ev.param = T.param(s);
        ev.kind = "branch_lost";
        ev.branch_a = bi;
        ev.branch_b = bj;
        tr.events.push_back(ev);
        throw Error("LostBranch", kMod, "Newton continuation failed near s = " + fmt17(s));
      }
      const double sf = fold.s.real();
      LGPotential Ff = T.potential(sf, comp[bi]);
      TrackEvent ev;
      ev.step = k + 1;
      ev.s = sf;
      ev.param = T.param(sf);
      ev.kind = "collision_near_discriminant";
      ev.branch_a = bi;
      ev.branch_b = bj;
      ev.value = Ff.value(fold.ell);
      tr.events.push_back(ev);
      // move the other branches to just past the fold, then split the pair
      double ds = std::min(1e-5, 0.5 * (s_end - sf));
      if (ds <= 0) ds = 1e-7;
      std::vector<bool> others(N, true);
      others[bi] = others[bj] = false;
      double s2 = s;
      double h2 = sf + ds - s;
      int guard = 0;
      while (s2 < sf + ds - 1e-15 && guard++ < 200) {
        h2 = std::min(h2, sf + ds - s2);
        std::vector<CVec> tr2 = ell;
        if (T.attempt(tr2, comp, others, s2, h2)) {
          ell = std::move(tr2);
          s2 += h2;
        } else {
          h2 *= 0.5;
        }
      }
      auto dc = T.dcoef_ds(sf, comp[bi]);
      CVec gs = T.g_s(Ff, dc, fold.ell);
      cplx T3 = 0;
      for (size_t j = 0; j < Ff.exps.size(); ++j) {
        cplx bv = bdot(Ff.exps[j], fold.v);
        T3 += Ff.coef[j] * std::exp(bdot(Ff.exps[j], fold.ell)) * bv * bv * bv;
      }
      cplx eps = std::sqrt(-2.0 * (fold.v.transpose() * gs)(0) * ds / T3);
      LGPotential F2 = T.potential(sf + ds, comp[bi]);
      CVec a = fold.ell + eps * fold.v, b = fold.ell - eps * fold.v;
      if (!newton_solve(F2, a, tol, 30) || !newton_solve(F2, b, tol, 30))
        throw Error("LostBranch", kMod, "could not continue past the fold at s = " + fmt17(sf));
      ell[bi] = a;
      ell[bj] = b;
      s = sf + ds;
      h = std::max(1e-6, ds);
    }
    s = s_end;
    record(k + 1, s);
  }
  return tr;
}

std::vector<CriticalDatum> points_between(const Trajectory& tr, int k, double s_target, const Tolerances& tol) {
  Tracker T(tr.family, tr.v0, tr.v1, tol);
  const auto& row = tr.points.at(k);
  const size_t N = row.size();
  std::vector<CVec> ell;
  std::vector<long> comp;
  for (const auto& p : row) {
    ell.push_back(p.log_point);
    comp.push_back(p.component);
  }
  std::vector<bool> all(N, true);
  double s = tr.s[k];
  double h = s_target - s;
  int guard = 0;
  while (std::abs(s_target - s) > 1e-15) {
    if (++guard > 10000) throw Error("LostBranch", kMod, "refinement did not converge");
    if (std::abs(h) > std::abs(s_target - s)) h = s_target - s;
    std::vector<CVec> trial = ell;
    if (T.attempt(trial, comp, all, s, h)) {
      ell = std::move(trial);
      s += h;
      h *= 2;
    } else {
      h *= 0.5;
      if (std::abs(h) < 1e-13) throw Error("LostBranch", kMod, "refinement failed near s = " + fmt17(s));
    }
  }
  std::vector<CriticalDatum> out;
  for (size_t i = 0; i < N; ++i) {
    LGPotential F = T.potential(s_target, comp[i]);
    CriticalDatum d = make_datum(F, ell[i], tol);
    d.log_point = ell[i];
    d.value = F.value(ell[i]);
    d.component = comp[i];
    d.tag = row[i].tag;
    out.push_back(d);
  }
  return out;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  const bool real_path = tr.v0.imag() == 0 && tr.v1.imag() == 0;
  os << "step,param";
  for (int b = 0; b < tr.branches(); ++b) os << ",re_u" << b << ",im_u" << b;
  os << "\n";
  for (size_t k = 0; k < tr.points.size(); ++k) {
    os << k << "," << fmt17(real_path ? tr.param(tr.s[k]).real() : tr.s[k]);
    for (const auto& p : tr.points[k]) os << "," << fmt17(p.value.real()) << "," << fmt17(p.value.imag());
    os << "\n";
  }
  return os.str();
}

std::string trajectory_events_json(const Trajectory& tr) {
  std::ostringstream os;
  os << "{\n  \"events\": [";
  for (size_t i = 0; i < tr.events.size(); ++i) {
    const auto& e = tr.events[i];
    os << (i ? "," : "") << "\n    {\"step\": " << e.step << ", \"kind\": \"" << e.kind << "\", \"s\": " << fmt17(e.s)
       << ", \"param\": [" << fmt17(e.param.real()) << ", " << fmt17(e.param.imag()) << "], \"branches\": ["
       << e.branch_a << ", " << e.branch_b << "], \"value\": [" << fmt17(e.value.real()) << ", "
       << fmt17(e.value.imag()) << "]}";
  }
  os << (tr.events.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return os.str();
}

}  // namespace tw
