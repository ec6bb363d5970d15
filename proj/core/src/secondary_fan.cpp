#include "toricwall/secondary_fan.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "toricwall/polyhedral.hpp"

namespace tw {

namespace {
const char* kMod = "secondary_fan";

QMat lattice_rows(const Sequences& seq) {
  QMat l;
  for (const auto& row : seq.L) l.push_back(to_q(row));
  return l;
}
}  // namespace

PLConeData cpl_cone(const StackyFan& fan) {
  PLConeData pl;
  const int m = fan.S.size();
  const int n = fan.S.n();
  const int r = fan.seq.r();
  pl.inequalities = oe_raw_generators(fan);
  pl.cpl_plus_rays = extreme_rays(pl.inequalities, m);
  std::vector<QVec> img;
  for (const auto& c : pl.cpl_plus_rays) img.push_back(fan.seq.apply_D(c));
  if (r > 0) {
    pl.cpl_rays = extreme_rays_of(img, r);
    if (static_cast<int>(pl.cpl_rays.size()) >= r && rank(QMat(pl.cpl_rays.begin(), pl.cpl_rays.end())) == r)
      pl.cpl_facets = facets_of(pl.cpl_rays, r);
  }

  // PL_Z: c in Z^S such that on each maximal cone c restricted to its rays comes from M
  const int k = static_cast<int>(fan.cones.size());
  const int vars = m + k * n;
  ZMat a;
  for (int s = 0; s < k; ++s)
    for (int b : fan.cones[s]) {
      ZVec row(vars, Z(0));
      row[b] = 1;
      for (int i = 0; i < n; ++i) row[m + s * n + i] = -fan.S.vectors[b][i];
      a.push_back(row);
    }
  ZMat ker = a.empty() ? integer_kernel({}, vars) : integer_kernel(a, vars);
  ZMat proj;
  for (const auto& row : ker) proj.emplace_back(row.begin(), row.begin() + m);
  pl.PL_Z = hermite_rows(proj);
  std::vector<QVec> dgens;
  for (const auto& c : pl.PL_Z) dgens.push_back(fan.seq.apply_D(to_q(c)));
  if (r > 0) pl.pl_Z = lattice_basis(dgens, r);
  return pl;
}

bool cpl_oe_duality(const StackyFan& fan, const PLConeData& pl, const MoriData& mori) {
  auto dual = facets_of(pl.cpl_plus_rays, fan.S.size());
  return same_rays(dual, mori.oe_generators);
}

bool pl_lambda_duality(const StackyFan& fan, const PLConeData& pl, const MoriData& mori) {
  const int r = fan.seq.r();
  if (r == 0) return pl.pl_Z.empty();
  if (static_cast<int>(pl.pl_Z.size()) != r || static_cast<int>(mori.lambda_basis.size()) != r) return false;
  QMat lrows = lattice_rows(fan.seq);
  QMat coords;
  for (const auto& l : mori.lambda_basis) {
    auto c = coordinates(lrows, l);
    if (!c) return false;
    coords.push_back(*c);
  }
  QMat pairing = matmul(pl.pl_Z, transpose(coords));
  for (const auto& row : pairing)
    if (!is_integral(row)) return false;
  Q d = det(pairing);
  return d == 1 || d == -1;
}

Q eta(const StackyFan& fan, const QVec& c, const QVec& v) { return dot(psi_map(fan, v), c); }

bool tilde_tau_check(const StackyFan& fan, const QVec& c, int height) {
  const int n = fan.S.n();
  std::vector<long> v(n, -height);
  while (true) {
    QVec q = to_q(v);
    if (fan.S.in_support(q) && eta(fan, c, q).get_den() != 1) return false;
    int i = 0;
    while (i < n && ++v[i] > height) v[i++] = -height;
    if (i == n) break;
  }
  return true;
}

namespace {

std::vector<std::vector<int>> subsets(int m, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < m; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

QVec hyperplane_normal(const VectorSet& S, const std::vector<int>& face) {
  QMat m;
  for (int b : face) m.push_back(S.bar(b));
  auto ns = nullspace(m, S.n());
  return ns.size() == 1 ? ns[0] : QVec{};
}

struct Search {
  const VectorSet& S;
  const EnumerationLimits& lim;
  int n;
  long nodes = 0;
  std::vector<ZVec> direction;
  std::vector<std::vector<int>> cones;
  std::map<std::vector<int>, int> open;  // interior wall -> owning cone index
  std::set<std::vector<std::vector<int>>> results;

  bool on_boundary(const std::vector<int>& f) const {
    for (const auto& a : S.support_facets()) {
      bool all = true;
      for (int b : f)
        if (dot(a, S.bar(b)) != 0) all = false;
      if (all) return true;
    }
    return false;
  }

  bool compatible_direction(int b) const {
    for (const auto& c : cones)
      for (int x : c)
        if (x != b && direction[x] == direction[b]) return false;
    return true;
  }

  void add_cone(const std::vector<int>& c, std::vector<std::pair<std::vector<int>, int>>& undo_open,
                std::vector<std::vector<int>>& added_open) {
    cones.push_back(c);
    const int idx = static_cast<int>(cones.size()) - 1;
    for (size_t skip = 0; skip < c.size(); ++skip) {
      std::vector<int> f;
      for (size_t i = 0; i < c.size(); ++i)
        if (i != skip) f.push_back(c[i]);
      if (on_boundary(f)) continue;
      auto it = open.find(f);
      if (it != open.end()) {
        undo_open.push_back(*it);
        open.erase(it);
      } else {
        open[f] = idx;
        added_open.push_back(f);
      }
    }
  }

  void remove_last(const std::vector<std::pair<std::vector<int>, int>>& undo_open,
                   const std::vector<std::vector<int>>& added_open) {
    for (const auto& f : added_open) open.erase(f);
    for (const auto& p : undo_open) open.insert(p);
    cones.pop_back();
  }

  void dfs() {
    if (++nodes > lim.max_nodes) throw Error("TooLarge", kMod, "fan search exceeded the node budget");
    if (open.empty()) {
      auto sorted = cones;
      for (auto& c : sorted) std::sort(c.begin(), c.end());
      std::sort(sorted.begin(), sorted.end());
      if (!results.count(sorted) && has_convex_support_function(S, sorted)) results.insert(sorted);
      return;
    }
    auto [face, owner] = *open.begin();
    QVec a = hyperplane_normal(S, face);
    int apex = -1;
    for (int b : cones[owner])
      if (!std::binary_search(face.begin(), face.end(), b)) apex = b;
    Q side = dot(a, S.bar(apex));
    for (int b = 0; b < S.size(); ++b) {
      Q s = dot(a, S.bar(b));
      if (s == 0 || (s > 0) == (side > 0)) continue;
      if (!compatible_direction(b)) continue;
      std::vector<int> c = face;
      c.push_back(b);
      std::sort(c.begin(), c.end());
      bool ok = true;
      for (size_t i = 0; i < cones.size() && ok; ++i) {
        if (static_cast<int>(i) == owner) continue;
        if (!proper_intersection(S, cones[i], c)) ok = false;
      }
      if (!ok) continue;
      std::vector<std::pair<std::vector<int>, int>> undo;
      std::vector<std::vector<int>> added;
      add_cone(c, undo, added);
      dfs();
      remove_last(undo, added);
    }
  }
};

QVec generic_interior_point(const VectorSet& S) {
  const int n = S.n();
  auto faces = subsets(S.size(), n - 1);
  std::vector<QVec> normals;
  for (const auto& f : faces) {
    QVec a = hyperplane_normal(S, f);
    if (!a.empty()) normals.push_back(a);
  }
  static const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  for (long attempt = 1; attempt < 1000; ++attempt) {
    QVec p(n, Q(0));
    for (int b = 0; b < S.size(); ++b) {
      Q wgt = 1 + Q(1, primes[b % 20] * (attempt + b / 20));
      p = add(p, scale(S.bar(b), wgt));
    }
    bool generic = true;
    for (const auto& a : normals)
      if (dot(a, p) == 0) {
        generic = false;
        break;
      }
    if (generic) return p;
  }
  throw Error("TooLarge", kMod, "could not find a generic interior point");
}

}  // namespace

std::vector<StackyFan> enumerate_adapted_fans(const VectorSet& S, const EnumerationLimits& lim) {
  if (S.size() > lim.max_vectors || S.n() > lim.max_rank)
    throw Error("TooLarge", kMod, "vector set exceeds the enumeration limits");
  std::vector<StackyFan> out;
  if (S.n() == 0) {
    out.push_back(validate_stacky_fan(S, {{}}));
    return out;
  }
  Search search{S, lim, S.n(), 0, {}, {}, {}, {}};
  for (int b = 0; b < S.size(); ++b) search.direction.push_back(primitive(S.bar(b)));
  QVec p = generic_interior_point(S);
  for (const auto& c : subsets(S.size(), S.n())) {
    QMat m;
    for (int b : c) m.push_back(S.bar(b));
    if (rank(m) < S.n()) continue;
    bool distinct = true;
    for (size_t i = 0; i < c.size(); ++i)
      for (size_t j = i + 1; j < c.size(); ++j)
        if (search.direction[c[i]] == search.direction[c[j]]) distinct = false;
    if (!distinct) continue;
    auto coef = solve(transpose(m), p, S.n());
    if (!coef || !std::all_of(coef->begin(), coef->end(), [](const Q& x) { return x > 0; })) continue;
    std::vector<std::pair<std::vector<int>, int>> undo;
    std::vector<std::vector<int>> added;
    search.add_cone(c, undo, added);
    search.dfs();
    search.remove_last(undo, added);
  }
  int idx = 0;
  for (const auto& cones : search.results) out.push_back(validate_stacky_fan(S, cones, "fan" + std::to_string(++idx)));
  return out;
}

SecondaryFanReport verify_secondary_fan(const VectorSet& S, const std::vector<StackyFan>& fans) {
  SecondaryFanReport rep;
  if (fans.empty()) {
    rep.covers = false;
    return rep;
  }
  const int r = fans.front().seq.r();
  if (r == 0) {
    rep.covers = fans.size() == 1;
    return rep;
  }
  std::vector<PLConeData> pls;
  for (const auto& f : fans) {
    pls.push_back(cpl_cone(f));
    if (pls.back().cpl_facets.empty()) rep.full_dimensional = false;
  }
  if (!rep.full_dimensional) return rep;
  for (size_t i = 0; i < fans.size(); ++i)
    for (size_t j = i + 1; j < fans.size(); ++j) {
      QMat ge;
      QVec b;
      for (const auto& a : pls[i].cpl_facets) ge.push_back(a), b.push_back(1);
      for (const auto& a : pls[j].cpl_facets) ge.push_back(a), b.push_back(1);
      if (lp_feasible(ge, b, {}, {}, r)) rep.interiors_disjoint = false;
    }
  // covering: every facet of a chamber either lies on the boundary of D(R_{>=0}^S)
  // or a point just beyond its relative interior lies in another chamber
  std::vector<QVec> dgens;
  for (int b = 0; b < S.size(); ++b) dgens.push_back(fans.front().seq.D(b));
  auto total_facets = facets_of(dgens, r);
  for (size_t i = 0; i < fans.size(); ++i)
    for (const auto& a : pls[i].cpl_facets) {
      std::vector<QVec> on;
      for (const auto& ray : pls[i].cpl_rays)
        if (dot(a, ray) == 0) on.push_back(ray);
      QVec centre(r, Q(0));
      for (const auto& x : on) centre = add(centre, x);
      bool boundary = false;
      for (const auto& t : total_facets)
        if (dot(t, centre) == 0) boundary = true;
      if (boundary) continue;
      QVec probe = sub(centre, scale(a, Q(1, 1000000)));
      bool found = false;
      for (size_t j = 0; j < fans.size() && !found; ++j)
        if (j != i && in_cone(pls[j].cpl_facets, probe)) found = true;
      if (!found) rep.covers = false;
    }
  return rep;
}

std::string to_string(WallKind k) {
  switch (k) {
    case WallKind::Flip: return "flip";
    case WallKind::ContractDivisor: return "contract_divisor";
    case WallKind::ExtractDivisor: return "extract_divisor";
    case WallKind::Root: return "root";
    case WallKind::Crepant: return "crepant";
    case WallKind::Unclassified: return "unclassified";
  }
  return "unclassified";
}

WallCrossing wall_between(const StackyFan& a, const StackyFan& b) {
  const int r = a.seq.r();
  const int m = a.S.size();
  if (r == 0) throw Error("NotAdjacent", kMod, "trivial secondary fan has no walls");
  auto pa = cpl_cone(a);
  auto pb = cpl_cone(b);
  std::optional<QVec> normal;
  for (const auto& fa : pa.cpl_facets)
    for (const auto& fb : pb.cpl_facets) {
      if (primitive(fa) != primitive(scale(fb, -1))) continue;
      // the two facets must share a relatively open piece of the hyperplane
      QMat ge, eq;
      QVec bge, beq;
      eq.push_back(fa);
      beq.push_back(0);
      for (const auto& g : pa.cpl_facets)
        if (g != fa) ge.push_back(g), bge.push_back(1);
      for (const auto& g : pb.cpl_facets)
        if (g != fb) ge.push_back(g), bge.push_back(1);
      if (lp_feasible(ge, bge, eq, beq, r)) normal = fa;
    }
  if (!normal) throw Error("NotAdjacent", kMod, "chambers of '" + a.name + "' and '" + b.name + "' share no wall");
  WallCrossing wc;
  QVec y = to_q(primitive(*normal));
  QVec w = a.seq.from_coords(y);
  Q disc = 0;
  for (const auto& x : w) disc += x;
  wc.plus = a;
  wc.minus = b;
  if (disc < 0) {
    std::swap(wc.plus, wc.minus);
    w = scale(w, -1);
    y = scale(y, -1);
    disc = -disc;
    wc.swapped = true;
  }
  wc.w = w;
  wc.w_coords = y;
  wc.discrepancy = disc;
  for (int i = 0; i < m; ++i) {
    if (w[i] > 0) wc.M_plus.push_back(i);
    if (w[i] < 0) wc.M_minus.push_back(i);
  }
  const auto& Rp = wc.plus.rays;
  const auto& Rm = wc.minus.rays;
  std::vector<int> p_minus_m, m_minus_p, joined;
  std::set_difference(Rp.begin(), Rp.end(), Rm.begin(), Rm.end(), std::back_inserter(p_minus_m));
  std::set_difference(Rm.begin(), Rm.end(), Rp.begin(), Rp.end(), std::back_inserter(m_minus_p));
  WallKind pattern = WallKind::Unclassified;
  if (p_minus_m.empty() && m_minus_p.empty())
    pattern = WallKind::Flip;
  else if (m_minus_p.empty() && p_minus_m == wc.M_minus && wc.M_minus.size() == 1)
    pattern = WallKind::ContractDivisor;
  else if (p_minus_m.empty() && m_minus_p == wc.M_plus && wc.M_plus.size() == 1)
    pattern = WallKind::ExtractDivisor;
  else if (p_minus_m == wc.M_minus && m_minus_p == wc.M_plus && wc.M_plus.size() == 1 && wc.M_minus.size() == 1)
    pattern = WallKind::Root;
  wc.pattern = to_string(pattern);
  wc.kind = disc == 0 ? WallKind::Crepant : pattern;
  if (wc.kind == WallKind::ContractDivisor || wc.kind == WallKind::Root) {
    QVec hb(a.S.n(), Q(0));
    long J = -1;
    Z K = 1;
    for (int bb : wc.M_plus) {
      long k = wc.k(bb);
      hb = add(hb, scale(a.S.bar(bb), Q(k)));
      J += k;
      Z p;
      mpz_ui_pow_ui(p.get_mpz_t(), k, k);
      K *= p;
    }
    wc.hat_b = hb;
    wc.J = J;
    wc.K = K;
  }
  wc.J_w = disc.get_num().get_si();
  Q prod = 1;
  for (int i = 0; i < m; ++i) {
    long k = wc.k(i);
    if (k == 0) continue;
    Z p;
    mpz_ui_pow_ui(p.get_mpz_t(), std::labs(k), std::labs(k));
    Q f = k > 0 ? Q(p) : Q(1) / Q(p);
    if (k < 0 && (std::labs(k) % 2 == 1)) f = -f;
    prod *= f;
  }
  wc.K_w = -prod;
  return wc;
}

CurveChart curve_chart(const WallCrossing& wall, int bound) {
  if (wall.discrepancy == 0 && wall.kind != WallKind::Crepant)
    throw Error("NotAdjacent", kMod, "wall data inconsistent");
  CurveChart cc;
  auto e_of = [&](const StackyFan& f, const QVec& w) {
    auto md = extended_mori_cones(f);
    auto c = coordinates(md.lambda_basis, w);
    if (!c || !is_integral(*c)) throw Error("NotAdjacent", kMod, "wall normal not in Lambda");
    Z g = 0;
    for (const auto& x : *c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
    return g.get_si();
  };
  cc.e_plus = e_of(wall.plus, wall.w);
  cc.e_minus = e_of(wall.minus, wall.w);
  cc.glue_exponent = Q(-cc.e_plus, cc.e_minus);

  // multiples c*w/e: return c if lambda is such a multiple
  auto multiple = [&](const QVec& lambda, long e) -> std::optional<Q> {
    if (is_zero(lambda)) return Q(0);
    QVec unit = scale(wall.w, Q(1, e));
    std::optional<Q> c;
    for (size_t i = 0; i < lambda.size(); ++i) {
      if (unit[i] == 0) {
        if (lambda[i] != 0) return std::nullopt;
        continue;
      }
      Q ci = lambda[i] / unit[i];
      if (c && *c != ci) return std::nullopt;
      c = ci;
    }
    return c;
  };

  const int n = wall.plus.S.n();
  std::vector<QVec> pts;
  std::vector<long> v(n, -bound);
  while (n > 0) {
    QVec q = to_q(v);
    if (wall.plus.S.in_support(q)) pts.push_back(q);
    int i = 0;
    while (i < n && ++v[i] > bound) v[i++] = -bound;
    if (i == n) break;
  }
  auto product = [&](const StackyFan& f, long e, const QVec& a, const QVec& b, bool sign_plus) {
    CurveChart::Product p;
    p.v1 = a;
    p.v2 = b;
    QVec lam = sub(add(psi_map(f, a), psi_map(f, b)), psi_map(f, add(a, b)));
    if (!sign_plus) lam = scale(lam, -1);
    auto c = multiple(lam, e);
    if (c && c->get_den() == 1 && *c >= 0) {
      p.zero = false;
      p.power = c->get_num().get_si();
    }
    return p;
  };
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i; j < pts.size(); ++j) {
      cc.plus_products.push_back(product(wall.plus, cc.e_plus, pts[i], pts[j], true));
      cc.minus_products.push_back(product(wall.minus, cc.e_minus, pts[i], pts[j], false));
    }
  std::map<QVec, Q> glue;
  for (const auto& p : pts) {
    QVec d = sub(psi_map(wall.minus, p), psi_map(wall.plus, p));
    auto c = multiple(d, cc.e_plus);
    if (c) {
      cc.gluing.push_back({p, *c});
      glue[p] = *c;
    }
  }
  for (size_t k = 0; k < cc.plus_products.size(); ++k) {
    const auto& pp = cc.plus_products[k];
    const auto& pm = cc.minus_products[k];
    if (pp.zero || pm.zero) continue;
    QVec s = add(pp.v1, pp.v2);
    if (!glue.count(pp.v1) || !glue.count(pp.v2) || !glue.count(s)) continue;
    Q lhs = glue[pp.v1] + glue[pp.v2] + Q(pp.power);
    Q rhs = Q(pm.power) * cc.glue_exponent + glue[s];
    if (lhs != rhs) cc.gluing_consistent = false;
  }
  return cc;
}

}  // namespace tw
