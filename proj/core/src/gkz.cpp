#include "toricwall/gkz.hpp"

#include <algorithm>
#include <sstream>

#include "toricwall/polyhedral.hpp"
#include "toricwall/toric_core.hpp"

namespace tw {

namespace {
const char* kMod = "gkz";

QMat chart_basis(const StackyFan& fan) { return extended_mori_cones(fan).lambda_basis; }

// D_b as a linear form in the coordinates dual to the chart basis
QVec form_of(const QMat& basis, int b) {
  QVec f;
  for (const auto& row : basis) f.push_back(row[b]);
  return f;
}

Q dotq(const QVec& a, const QVec& b) {
  Q s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::string qstr(const Q& q) { return q.get_str(); }

// first full-dimensional maximal cone
int splitting_cone(const StackyFan& fan) {
  const int n = fan.S.n();
  for (size_t c = 0; c < fan.cones.size(); ++c) {
    if (static_cast<int>(fan.cones[c].size()) != n) continue;
    QMat R;
    for (int b : fan.cones[c]) R.push_back(fan.S.bar(b));
    if (rank(R) == n) return static_cast<int>(c);
  }
  throw Error("InvalidParameter", kMod, "no full-dimensional maximal cone for the splitting");
}

// dual basis of the rays of a simplicial full-dimensional cone: rows m_j with m_j(rho_k) = delta_jk
QMat dual_basis(const StackyFan& fan, int cone) {
  QMat R;
  for (int b : fan.cones[cone]) R.push_back(fan.S.bar(b));
  auto inv = inverse(R);
  if (!inv) throw Error("InvalidParameter", kMod, "cone is not simplicial");
  return transpose(*inv);
}

// xi^ supported off the splitting cone with xi^(lambda_k) = xi_k
QVec split_form(const StackyFan& fan, const Splitting& sp, const QMat& basis, const QVec& xi) {
  const int N = fan.S.size();
  std::vector<int> off;
  const auto& cone = fan.cones[sp.cone];
  for (int b = 0; b < N; ++b)
    if (!std::binary_search(cone.begin(), cone.end(), b)) off.push_back(b);
  QMat A(basis.size(), QVec(off.size()));
  for (size_t k = 0; k < basis.size(); ++k)
    for (size_t j = 0; j < off.size(); ++j) A[k][j] = basis[k][off[j]];
  auto y = solve(A, xi, static_cast<int>(off.size()));
  if (!y) throw Error("InvalidParameter", kMod, "form does not lift off the splitting cone");
  QVec out(N, Q(0));
  for (size_t j = 0; j < off.size(); ++j) out[off[j]] = (*y)[j];
  return out;
}

void add_to(UElement& x, const QVec& c, int zpow, const Q& coef) {
  if (coef == 0) return;
  auto& p = x[c];
  p[zpow] += coef;
  if (p[zpow] == 0) p.erase(zpow);
  if (p.empty()) x.erase(c);
}

bool in_lattice_L(const StackyFan& fan, const QVec& lambda) {
  const auto& S = fan.S;
  if (static_cast<int>(lambda.size()) != S.size() || !is_integral(lambda)) return false;
  QVec s(S.n(), Q(0));
  for (int b = 0; b < S.size(); ++b) s = add(s, scale(S.bar(b), lambda[b]));
  if (!is_zero(s)) return false;
  const auto& tor = S.lattice.torsion;
  for (size_t t = 0; t < tor.size(); ++t) {
    Z r = 0;
    for (int b = 0; b < S.size(); ++b) r += lambda[b].get_num() * S.vectors[b][S.n() + t];
    if (r % tor[t] != 0) return false;
  }
  return true;
}

// z D_b(theta) as text: zθ1, -zθ1, (1/3)zθ1, z(θ1 + θ2)
std::string form_str(const QVec& f) {
  int nz = 0, last = -1;
  for (size_t k = 0; k < f.size(); ++k)
    if (f[k] != 0) {
      ++nz;
      last = static_cast<int>(k);
    }
  if (nz == 0) return "0";
  if (nz == 1) {
    Q c = f[last], a = abs(c);
    std::string coef = a == 1 ? "" : (a.get_den() == 1 ? qstr(a) : "(" + qstr(a) + ")");
    return (c < 0 ? "-" : "") + coef + "zθ" + std::to_string(last + 1);
  }
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < f.size(); ++k) {
    if (f[k] == 0) continue;
    Q c = f[k];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    Q a = abs(c);
    if (a != 1) os << qstr(a);
    os << "θ" << k + 1;
    first = false;
  }
  return "z(" + os.str() + ")";
}

std::string chi_str(const QVec& m) {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    Q a = abs(m[i]);
    os << (m[i] < 0 ? " - " : " + ");
    if (a != 1) os << qstr(a);
    os << "χ" << i + 1;
    first = false;
  }
  return first ? "" : os.str();
}

std::string product_str(const StackyFan& fan, const Splitting& sp, const std::vector<GKZFactor>& fs, bool equivariant) {
  std::vector<std::string> parts;
  for (const auto& f : fs) {
    std::string s = form_str(f.form);
    if (equivariant) s += chi_str(sp.chi[f.b]);
    if (f.shift != 0) s += (f.shift < 0 ? " + " : " - ") + (abs(f.shift) == 1 ? std::string() : qstr(abs(f.shift))) + "z";
    parts.push_back("(" + s + ")");
  }
  (void)fan;
  std::string out;
  for (size_t i = 0; i < parts.size();) {
    size_t j = i;
    while (j < parts.size() && parts[j] == parts[i]) ++j;
    out += parts[i];
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

std::string monomial_q(const QVec& y) {
  std::string s;
  for (size_t k = 0; k < y.size(); ++k) {
    if (y[k] == 0) continue;
    if (!s.empty()) s += "*";
    s += "q" + std::to_string(k + 1);
    if (y[k] != 1) s += y[k].get_den() == 1 ? "^" + qstr(y[k]) : "^(" + qstr(y[k]) + ")";
  }
  return s.empty() ? "1" : s;
}

XiPoly linear_poly(const QVec& form) {
  XiPoly p;
  for (size_t k = 0; k < form.size(); ++k)
    if (form[k] != 0) {
      std::vector<int> e(form.size(), 0);
      e[k] = 1;
      p[e] = form[k];
    }
  return p;
}

XiPoly one_poly(int m) { return {{std::vector<int>(m, 0), Q(1)}}; }

}  // namespace

// ---------------------------------------------------------------- splitting

Splitting psi_splitting(const StackyFan& fan) {
  Splitting sp;
  sp.cone = splitting_cone(fan);
  const int N = fan.S.size(), n = fan.S.n();
  QMat dual = dual_basis(fan, sp.cone);
  const auto& cone = fan.cones[sp.cone];
  QMat basis = chart_basis(fan);
  sp.consistent = true;
  for (int b = 0; b < N; ++b) {
    QVec chi(n, Q(0));
    auto it = std::find(cone.begin(), cone.end(), b);
    if (it != cone.end()) chi = dual[it - cone.begin()];
    sp.chi.push_back(chi);
    QVec dh(N, Q(0));
    for (int c = 0; c < N; ++c) dh[c] = Q(b == c ? 1 : 0) - dotq(chi, fan.S.bar(c));
    sp.D_hat.push_back(dh);
  }
  // the hat of D_b computed through the lift must agree with e_b^* - chi(b)
  for (int b = 0; b < N; ++b)
    if (split_form(fan, sp, basis, form_of(basis, b)) != sp.D_hat[b]) sp.consistent = false;
  return sp;
}

// ---------------------------------------------------------------- operators

bool QVecLess::operator()(const QVec& a, const QVec& b) const {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

int GKZOperator::order() const { return static_cast<int>(std::max(lhs.size(), rhs.size())); }

bool in_extended_mori_cone(const StackyFan& fan, const QVec& lambda) {
  if (!in_lattice_L(fan, lambda)) return false;
  if (is_zero(lambda)) return true;
  auto mori = extended_mori_cones(fan);
  const int k = static_cast<int>(mori.ne_generators.size());
  const int N = fan.S.size();
  QMat ge(k, QVec(k, Q(0)));
  for (int i = 0; i < k; ++i) ge[i][i] = 1;
  QMat eq(N, QVec(k));
  for (int b = 0; b < N; ++b)
    for (int i = 0; i < k; ++i) eq[b][i] = mori.ne_generators[i][b];
  return lp_feasible(ge, QVec(k, Q(0)), eq, lambda, k).has_value();
}

GKZOperator gkz_relation(const StackyFan& fan, const QVec& v, const QVec& lambda) {
  if (!in_extended_mori_cone(fan, lambda))
    throw Error("NotInMoriCone", kMod, "lambda = " + to_string(lambda) + " is not in L ∩ NE-hat");
  if (containing_cone(fan, v) < 0) throw Error("InvalidParameter", kMod, "v lies outside the support of the fan");
  QMat basis = chart_basis(fan);
  GKZOperator P;
  P.v = v;
  P.lambda = lambda;
  auto y = coordinates(basis, lambda);
  if (!y) throw Error("NotInMoriCone", kMod, "lambda is not in the span of the chart basis");
  P.lambda_coords = *y;
  QVec psi = psi_map(fan, v);
  for (int b = 0; b < fan.S.size(); ++b) {
    long l = lambda[b].get_num().get_si();
    auto& side = l > 0 ? P.lhs : P.rhs;
    for (long c = 0; c < std::labs(l); ++c) side.push_back({b, form_of(basis, b), psi[b] + c});
  }
  return P;
}

std::string GKZOperator::str(const StackyFan& fan, bool equivariant) const {
  Splitting sp = psi_splitting(fan);
  std::string l = lhs.empty() ? "1" : product_str(fan, sp, lhs, equivariant);
  std::string r = rhs.empty() ? "" : product_str(fan, sp, rhs, equivariant);
  std::string q = monomial_q(lambda_coords);
  std::string rt = q == "1" ? (r.empty() ? "1" : r) : (r.empty() ? q : q + "*" + r);
  return l + " - " + rt;
}

// ---------------------------------------------------------------- action

UElement generator(const StackyFan& fan, const QVec& v) {
  UElement x;
  x[psi_map(fan, v)][0] = 1;
  return x;
}

UElement act(const StackyFan& fan, const Splitting& sp, const GKZFactor& f, const UElement& x) {
  const int N = fan.S.size();
  QMat basis = chart_basis(fan);
  QVec hat = split_form(fan, sp, basis, f.form);
  QVec a(N);
  for (int c = 0; c < N; ++c) a[c] = hat[c] + dotq(sp.chi[f.b], fan.S.bar(c));
  UElement out;
  for (const auto& [c, poly] : x)
    for (const auto& [k, coef] : poly) {
      for (int b = 0; b < N; ++b) {
        if (a[b] == 0) continue;
        add_to(out, c, k + 1, a[b] * coef * c[b]);  // z u_b d/du_b
        QVec c2 = c;
        c2[b] += 1;
        add_to(out, c2, k, a[b] * coef);  // u_b
      }
      add_to(out, c, k + 1, -f.shift * coef);
    }
  return out;
}

AnnihilationReport check_annihilation(const StackyFan& fan, const GKZOperator& P) {
  Splitting sp = psi_splitting(fan);
  AnnihilationReport rep;
  UElement w = generator(fan, P.v);
  rep.lhs = w;
  for (auto it = P.lhs.rbegin(); it != P.lhs.rend(); ++it) rep.lhs = act(fan, sp, *it, rep.lhs);
  UElement r = w;
  for (auto it = P.rhs.rbegin(); it != P.rhs.rend(); ++it) r = act(fan, sp, *it, r);
  // q^lambda multiplies by u^lambda
  for (const auto& [c, poly] : r) rep.rhs[add(c, P.lambda)] = poly;
  UElement diff = rep.lhs;
  for (const auto& [c, poly] : rep.rhs)
    for (const auto& [k, coef] : poly) add_to(diff, c, k, -coef);
  rep.terms = rep.lhs.size() + rep.rhs.size();
  rep.annihilated = diff.empty();
  return rep;
}

// ---------------------------------------------------------------- symbols

XiPoly poly_mul(const XiPoly& a, const XiPoly& b) {
  XiPoly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

std::string poly_str(const XiPoly& p, int m, bool with_z) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // highest total degree first
  std::vector<std::pair<std::vector<int>, Q>> terms(p.begin(), p.end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
    int dx = 0, dy = 0;
    for (int e : x.first) dx += e;
    for (int e : y.first) dy += e;
    if (dx != dy) return dx > dy;
    return x.first > y.first;
  });
  for (const auto& [e, c] : terms) {
    os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    Q a = abs(c);
    std::string mono;
    for (int k = 0; k < static_cast<int>(e.size()); ++k) {
      if (e[k] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += (with_z && k == m) ? "z" : "ξ" + std::to_string(k + 1);
      if (e[k] > 1) mono += "^" + std::to_string(e[k]);
    }
    if (mono.empty()) os << qstr(a);
    else if (a != 1) os << qstr(a) << "*" << mono;
    else os << mono;
    first = false;
  }
  return os.str();
}

XiPoly expand_factors(const StackyFan& fan, const Splitting& sp, const std::vector<GKZFactor>& fs, const QVec& chi) {
  if (fs.empty()) return {};
  const int m = static_cast<int>(fs.front().form.size());
  (void)fan;
  XiPoly out = one_poly(m + 1);
  for (const auto& f : fs) {
    XiPoly lin;
    for (int k = 0; k < m; ++k)
      if (f.form[k] != 0) {
        std::vector<int> e(m + 1, 0);
        e[k] = 1;
        lin[e] = f.form[k];
      }
    Q c0 = chi.empty() ? Q(0) : dotq(sp.chi[f.b], chi);
    if (c0 != 0) lin[std::vector<int>(m + 1, 0)] += c0;
    if (f.shift != 0) {
      std::vector<int> e(m + 1, 0);
      e[m] = 1;
      lin[e] = -f.shift;
    }
    out = poly_mul(out, lin);
  }
  return out;
}

XiPoly top_degree(const XiPoly& p, int m) {
  int top = -1;
  for (const auto& [e, c] : p) {
    int d = 0;
    for (int k = 0; k < m; ++k) d += e[k];
    top = std::max(top, d);
  }
  XiPoly out;
  for (const auto& [e, c] : p) {
    int d = 0;
    for (int k = 0; k < m; ++k) d += e[k];
    if (d != top) continue;
    std::vector<int> key(e.begin(), e.begin() + m);
    out[key] += c;
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

Symbol principal_symbol(const GKZOperator& P) {
  Symbol s;
  s.lambda_coords = P.lambda_coords;
  const int m = static_cast<int>(P.lambda_coords.size());
  // symbols do not depend on chi or the shifts, so expand with both set to zero
  auto expand = [&](const std::vector<GKZFactor>& fs) {
    XiPoly out = one_poly(m);
    for (const auto& f : fs) out = poly_mul(out, linear_poly(f.form));
    return out;
  };
  const int dl = static_cast<int>(P.lhs.size()), dr = static_cast<int>(P.rhs.size());
  s.order = std::max(dl, dr);
  if (dl == 0 && dr == 0) return s;  // 1 - 1
  if (dl == s.order) s.one_part = expand(P.lhs);
  if (dr == s.order) s.q_part = expand(P.rhs);
  return s;
}

Symbol principal_symbol_by_cases(const GKZOperator& P) {
  Symbol s;
  s.lambda_coords = P.lambda_coords;
  const int m = static_cast<int>(P.lambda_coords.size());
  if (is_zero(P.lambda)) return s;
  Q total = 0;
  XiPoly pos = one_poly(m), neg = one_poly(m);
  int dpos = 0, dneg = 0;
  for (size_t b = 0; b < P.lambda.size(); ++b) {
    total += P.lambda[b];
    long l = P.lambda[b].get_num().get_si();
    if (l == 0) continue;
    // D_b(xi) from any factor carrying b
    QVec form;
    for (const auto& f : l > 0 ? P.lhs : P.rhs)
      if (f.b == static_cast<int>(b)) form = f.form;
    for (long c = 0; c < std::labs(l); ++c) (l > 0 ? pos : neg) = poly_mul(l > 0 ? pos : neg, linear_poly(form));
    (l > 0 ? dpos : dneg) += static_cast<int>(std::labs(l));
  }
  if (total == 0) {
    s.one_part = pos;
    s.q_part = neg;
  } else if (total > 0) {
    s.one_part = pos;
  } else {
    s.q_part = neg;
  }
  s.order = std::max(dpos, dneg);
  return s;
}

std::string symbol_str(const Symbol& s) {
  const int m = static_cast<int>(s.lambda_coords.size());
  if (s.one_part.empty() && s.q_part.empty()) return "0";
  std::string out;
  if (!s.one_part.empty()) out = poly_str(s.one_part, m);
  if (!s.q_part.empty()) {
    std::string q = monomial_q(s.lambda_coords);
    std::string body = poly_str(s.q_part, m);
    std::string term = body == "1" ? q : q + "*(" + body + ")";
    out += out.empty() ? "-" + term : " - " + term;
  }
  return out;
}

// ---------------------------------------------------------------- characteristic variety

WeakFanoReport weak_fano(const StackyFan& fan) {
  WeakFanoReport rep;
  const int n = fan.S.n();
  std::vector<QVec> ms;
  for (size_t c = 0; c < fan.cones.size(); ++c) {
    if (static_cast<int>(fan.cones[c].size()) != n) continue;
    QMat R;
    for (int b : fan.cones[c]) R.push_back(fan.S.bar(b));
    auto m = solve(R, QVec(n, Q(1)), n);
    if (m) ms.push_back(*m);
  }
  for (int b = 0; b < fan.S.size(); ++b) {
    QVec v = fan.S.bar(b);
    bool out = containing_cone(fan, v) < 0;
    for (const auto& m : ms)
      if (dotq(m, v) > 1) out = true;
    if (out) rep.outside.push_back(b);
  }
  rep.weak_fano = rep.outside.empty();
  return rep;
}

CharVarietyReport char_variety_at_limit(const StackyFan& fan) {
  auto wf = weak_fano(fan);
  if (!wf.weak_fano) {
    std::string who;
    for (int b : wf.outside) who += " " + std::to_string(b);
    throw Error("NotWeakFano", kMod, "elements of S outside the fan polytope:" + who);
  }
  const int N = fan.S.size();
  if (N > 20) throw Error("InvalidParameter", kMod, "too many elements for support enumeration");
  QMat basis = chart_basis(fan);
  const int m = static_cast<int>(basis.size());
  std::vector<QVec> forms;
  for (int b = 0; b < N; ++b) forms.push_back(form_of(basis, b));
  long torsion = fan.S.lattice.torsion_order();
  CharVarietyReport rep;
  rep.pass = true;
  for (unsigned mask = 1; mask < (1u << N); ++mask) {
    ++rep.candidates;
    std::vector<int> T, off;
    for (int b = 0; b < N; ++b) ((mask >> b) & 1u ? T : off).push_back(b);
    // generic xi with D_b(xi) = 0 off T
    QMat zr;
    for (int b : off) zr.push_back(forms[b]);
    std::vector<QVec> V;
    if (zr.empty()) {
      for (int k = 0; k < m; ++k) {
        QVec e(m, Q(0));
        e[k] = 1;
        V.push_back(e);
      }
    } else {
      V = nullspace(zr, m);
    }
    bool realizable = true;
    for (int b : T) {
      bool nz = false;
      for (const auto& y : V) nz = nz || dotq(forms[b], y) != 0;
      realizable = realizable && nz;
    }
    if (!realizable) continue;
    CharWitness w;
    w.support = T;
    w.realizable = true;
    // barycentre of T inside the fan; its carrier face gives the relation
    QVec p(fan.S.n(), Q(0));
    for (int b : T) p = add(p, fan.S.bar(b));
    p = scale(p, Q(1, static_cast<unsigned long>(T.size())));
    int c = containing_cone(fan, p);
    if (c >= 0) {
      QVec f = fan.cone_coefficients(c, p);
      QVec lam(N, Q(0));
      for (int b : T) lam[b] += Q(1, static_cast<unsigned long>(T.size()));
      for (size_t i = 0; i < fan.cones[c].size(); ++i) lam[fan.cones[c][i]] -= f[i];
      Z den = lcm_denominators(lam);
      lam = scale(lam, Q(den * torsion));
      Q total = 0;
      for (const auto& x : lam) total += x;
      if (!is_zero(lam) && total >= 0 && in_extended_mori_cone(fan, lam)) {
        w.lambda = lam;
        w.killed = true;
      }
    }
    if (!w.killed) {
      rep.pass = false;
      std::string t;
      for (int b : T) t += " " + std::to_string(b);
      rep.detail += "support {" + t + " } is not excluded; ";
    }
    rep.witnesses.push_back(w);
  }
  if (rep.pass) rep.detail = "xi = 0 is forced at the large radius limit";
  return rep;
}

RankReport generic_rank_check(const StackyFan& fan, std::mt19937_64& rng) {
  auto wf = weak_fano(fan);
  if (!wf.weak_fano) throw Error("NotWeakFano", kMod, "fan polytope does not contain S");
  RankReport rep;
  rep.torsion = fan.S.lattice.torsion_order();
  rep.volume = 0;
  for (size_t c = 0; c < fan.cones.size(); ++c) rep.volume += cone_multiplicity(fan, static_cast<int>(c));
  rep.expected = rep.torsion * rep.volume.get_si();
  std::uniform_real_distribution<double> mod(0.5, 2.0), ang(0.0, 6.283185307179586);
  std::vector<cplx> q, chi;
  for (size_t k = 0; k < chart_basis(fan).size(); ++k) q.push_back(std::polar(mod(rng), ang(rng)));
  for (int i = 0; i < fan.S.n(); ++i) chi.push_back(std::polar(mod(rng), ang(rng)));
  auto F = assemble_potential(fan, q, chi);
  try {
    auto cs = critical_points(F, rng);
    rep.count = static_cast<long>(cs.points.size());
  } catch (const Error& e) {
    if (e.kind() != "IncompleteCount") throw;
    throw Error("RankMismatch", kMod, std::string("solver count differs from the volume: ") + e.what());
  }
  rep.ok = rep.count == rep.expected;
  if (!rep.ok)
    throw Error("RankMismatch", kMod,
                std::to_string(rep.count) + " critical points against volume " + std::to_string(rep.expected));
  return rep;
}

}  // namespace tw
