#include "toricwall/toric_core.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "toricwall/polyhedral.hpp"

namespace tw {

namespace {
const char* kMod = "toric_core";
}

long AbelianLattice::torsion_order() const {
  long o = 1;
  for (long d : torsion) o *= d;
  return o;
}

void AbelianLattice::validate() const {
  if (rank < 0) throw Error("InvalidLattice", kMod, "negative rank");
  for (size_t i = 0; i < torsion.size(); ++i) {
    if (torsion[i] < 2) throw Error("InvalidLattice", kMod, "torsion invariant must be >= 2");
    if (i + 1 < torsion.size() && torsion[i + 1] % torsion[i] != 0)
      throw Error("InvalidLattice", kMod, "torsion invariants must divide successively");
  }
}

VectorSet VectorSet::make(AbelianLattice lattice, std::vector<LatticeElem> vectors, std::vector<std::string> labels) {
  lattice.validate();
  VectorSet s;
  s.lattice = std::move(lattice);
  const size_t width = s.lattice.rank + s.lattice.torsion.size();
  for (auto& v : vectors) {
    if (v.size() == static_cast<size_t>(s.lattice.rank) && width > v.size()) v.resize(width, 0);
    if (v.size() != width) throw Error("InvalidVector", kMod, "vector length does not match the lattice");
    for (size_t j = 0; j < s.lattice.torsion.size(); ++j) {
      long d = s.lattice.torsion[j];
      long& r = v[s.lattice.rank + j];
      r = ((r % d) + d) % d;
    }
  }
  s.vectors = std::move(vectors);
  if (labels.empty())
    for (size_t i = 0; i < s.vectors.size(); ++i) labels.push_back("b" + std::to_string(i + 1));
  if (labels.size() != s.vectors.size()) throw Error("InvalidVector", kMod, "label count mismatch");
  s.labels = std::move(labels);
  if (s.lattice.rank > 0) {
    if (s.vectors.empty()) throw Error("SupportMismatch", kMod, "empty vector set");
    for (int i = 0; i < s.size(); ++i)
      if (is_zero(s.bar(i))) throw Error("InvalidVector", kMod, "vector with zero free part");
    auto b = s.bars();
    if (rank(QMat(b.begin(), b.end())) < s.lattice.rank)
      throw Error("SupportMismatch", kMod, "the cone generated by S is not full-dimensional");
    s.support_facets_ = facets_of(b, s.lattice.rank);
  }
  return s;
}

QVec VectorSet::bar(int i) const {
  QVec r(lattice.rank);
  for (int j = 0; j < lattice.rank; ++j) r[j] = vectors[i][j];
  return r;
}

std::vector<QVec> VectorSet::bars() const {
  std::vector<QVec> r;
  for (int i = 0; i < size(); ++i) r.push_back(bar(i));
  return r;
}

bool VectorSet::in_support(const QVec& v) const { return in_cone(support_facets_, v); }

QVec Sequences::D(int b) const {
  QVec d(L.size());
  for (size_t i = 0; i < L.size(); ++i) d[i] = L[i][b];
  return d;
}

QVec Sequences::apply_D(const QVec& c) const {
  QVec d(L.size());
  for (size_t i = 0; i < L.size(); ++i) d[i] = dot(to_q(L[i]), c);
  return d;
}

QVec Sequences::from_coords(const QVec& y) const {
  if (L.empty()) return {};
  QVec x(L[0].size(), Q(0));
  for (size_t i = 0; i < L.size(); ++i) x = add(x, scale(to_q(L[i]), y[i]));
  return x;
}

namespace {

// Integer kernel of a -> sum a_k v_k in N = Z^n + torsion, projected to the a-coordinates.
ZMat relation_lattice(const AbelianLattice& lat, const std::vector<LatticeElem>& v) {
  const int m = static_cast<int>(v.size());
  const int n = lat.rank;
  const int t = static_cast<int>(lat.torsion.size());
  ZMat a(n + t, ZVec(m + t, Z(0)));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < n + t; ++i) a[i][k] = v[k][i];
  for (int j = 0; j < t; ++j) a[n + j][m + j] = -lat.torsion[j];
  ZMat ker = (n + t == 0) ? integer_kernel({}, m + t) : integer_kernel(a, m + t);
  ZMat proj;
  for (auto& row : ker) proj.emplace_back(row.begin(), row.begin() + m);
  return hermite_rows(proj);
}

}  // namespace

Sequences extended_sequences(const VectorSet& S) {
  Sequences seq;
  seq.L = relation_lattice(S.lattice, S.vectors);
  if (seq.L.size() == 1) {
    // orient so that the coordinate sum is nonnegative, then the last nonzero entry positive
    Z sum = 0;
    for (auto& x : seq.L[0]) sum += x;
    bool flip = sum < 0;
    if (sum == 0)
      for (auto it = seq.L[0].rbegin(); it != seq.L[0].rend(); ++it)
        if (*it != 0) {
          flip = *it < 0;
          break;
        }
    if (flip)
      for (auto& x : seq.L[0]) x = -x;
  }
  const int n = S.lattice.rank;
  const int t = static_cast<int>(S.lattice.torsion.size());
  if (n + t > 0) {
    const int m = S.size();
    ZMat a(n + t, ZVec(m + t, Z(0)));
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < n + t; ++i) a[i][k] = S.vectors[k][i];
    for (int j = 0; j < t; ++j) a[n + j][m + j] = S.lattice.torsion[j];
    Smith s = smith(a);
    seq.surjective = static_cast<int>(s.diag.size()) == n + t &&
                     std::all_of(s.diag.begin(), s.diag.end(), [](const Z& d) { return d == 1; });
  }
  return seq;
}

bool StackyFan::is_ray(int b) const { return std::binary_search(rays.begin(), rays.end(), b); }

std::vector<int> StackyFan::ghosts() const {
  std::vector<int> g;
  for (int b = 0; b < S.size(); ++b)
    if (!is_ray(b)) g.push_back(b);
  return g;
}

std::vector<std::vector<int>> StackyFan::all_cones() const {
  std::set<std::vector<int>> faces;
  for (const auto& c : cones) {
    const int k = static_cast<int>(c.size());
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      std::vector<int> f;
      for (int i = 0; i < k; ++i)
        if (mask & (1u << i)) f.push_back(c[i]);
      faces.insert(f);
    }
  }
  return {faces.begin(), faces.end()};
}

QVec StackyFan::cone_coefficients(int cone, const QVec& v) const {
  const auto& c = cones[cone];
  QMat a(S.n(), QVec(c.size()));
  for (size_t j = 0; j < c.size(); ++j) {
    QVec b = S.bar(c[j]);
    for (int i = 0; i < S.n(); ++i) a[i][j] = b[i];
  }
  auto x = solve(a, v, static_cast<int>(c.size()));
  if (!x) throw Error("OutsideSupport", kMod, "vector not in the span of the cone");
  return *x;
}

bool proper_intersection(const VectorSet& S, const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  QMat ge, eq;
  QVec bge, beq;
  for (int i : a)
    if (!std::binary_search(common.begin(), common.end(), i)) {
      ge.push_back(S.bar(i));
      bge.push_back(1);
    }
  for (int i : b)
    if (!std::binary_search(common.begin(), common.end(), i)) {
      ge.push_back(scale(S.bar(i), -1));
      bge.push_back(1);
    }
  for (int i : common) {
    eq.push_back(S.bar(i));
    beq.push_back(0);
  }
  return lp_feasible(ge, bge, eq, beq, S.n()).has_value();
}

bool has_convex_support_function(const VectorSet& S, const std::vector<std::vector<int>>& cones) {
  const int n = S.n();
  const int k = static_cast<int>(cones.size());
  if (k <= 1) return true;
  QMat ge, eq;
  QVec bge, beq;
  for (int s = 0; s < k; ++s)
    for (int t = s + 1; t < k; ++t) {
      std::vector<int> common;
      std::set_intersection(cones[s].begin(), cones[s].end(), cones[t].begin(), cones[t].end(),
                            std::back_inserter(common));
      if (static_cast<int>(common.size()) != n - 1) continue;
      for (int b : common) {
        QVec row(k * n, Q(0));
        QVec v = S.bar(b);
        for (int i = 0; i < n; ++i) {
          row[s * n + i] = v[i];
          row[t * n + i] = -v[i];
        }
        eq.push_back(row);
        beq.push_back(0);
      }
      int opp = -1;
      for (int b : cones[t])
        if (!std::binary_search(common.begin(), common.end(), b)) opp = b;
      QVec row(k * n, Q(0));
      QVec v = S.bar(opp);
      for (int i = 0; i < n; ++i) {
        row[t * n + i] = v[i];
        row[s * n + i] = -v[i];
      }
      ge.push_back(row);
      bge.push_back(1);
    }
  return lp_feasible(ge, bge, eq, beq, k * n).has_value();
}

StackyFan validate_stacky_fan(const VectorSet& S, std::vector<std::vector<int>> cones, std::string name) {
  const int n = S.n();
  StackyFan fan;
  fan.S = S;
  fan.name = std::move(name);
  std::set<int> rayset;
  for (auto& c : cones) {
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end())
      throw Error("NonSimplicial", kMod, "repeated ray in a cone");
    for (int b : c) {
      if (b < 0 || b >= S.size()) throw Error("RayNotInS", kMod, "ray index " + std::to_string(b) + " is not in S");
      rayset.insert(b);
    }
  }
  std::sort(cones.begin(), cones.end());
  cones.erase(std::unique(cones.begin(), cones.end()), cones.end());
  if (cones.empty()) throw Error("SupportMismatch", kMod, "no cones given");
  if (n == 0) {
    fan.cones = {{}};
    fan.seq = extended_sequences(S);
    return fan;
  }
  for (const auto& c : cones) {
    QMat m;
    for (int b : c) m.push_back(S.bar(b));
    if (rank(m) != static_cast<int>(c.size()))
      throw Error("NonSimplicial", kMod, "cone rays are linearly dependent");
    if (static_cast<int>(c.size()) != n)
      throw Error("SupportMismatch", kMod, "maximal cone is not full-dimensional");
  }
  fan.rays.assign(rayset.begin(), rayset.end());
  // distinct rays must point in distinct directions
  for (size_t i = 0; i < fan.rays.size(); ++i)
    for (size_t j = i + 1; j < fan.rays.size(); ++j)
      if (primitive(S.bar(fan.rays[i])) == primitive(S.bar(fan.rays[j])))
        throw Error("NonSimplicial", kMod, "two rays share a direction");
  for (size_t i = 0; i < cones.size(); ++i)
    for (size_t j = i + 1; j < cones.size(); ++j)
      if (!proper_intersection(S, cones[i], cones[j]))
        throw Error("SupportMismatch", kMod, "cones do not meet along a common face");
  std::map<std::vector<int>, int> walls;
  for (const auto& c : cones)
    for (size_t skip = 0; skip < c.size(); ++skip) {
      std::vector<int> f;
      for (size_t i = 0; i < c.size(); ++i)
        if (i != skip) f.push_back(c[i]);
      ++walls[f];
    }
  for (const auto& [f, count] : walls) {
    if (count > 2) throw Error("SupportMismatch", kMod, "a wall bounds more than two cones");
    if (count == 2) continue;
    bool boundary = false;
    for (const auto& a : S.support_facets()) {
      bool all = true;
      for (int b : f)
        if (dot(a, S.bar(b)) != 0) all = false;
      if (all) boundary = true;
    }
    if (!boundary) throw Error("SupportMismatch", kMod, "union of cones does not cover the support");
  }
  if (!has_convex_support_function(S, cones))
    throw Error("NoConvexSupportFunction", kMod, "no strictly convex piecewise-linear function");
  fan.cones = std::move(cones);
  fan.seq = extended_sequences(S);
  return fan;
}

Z cone_multiplicity(const StackyFan& fan, int cone) {
  QMat m;
  for (int b : fan.cones[cone]) m.push_back(fan.S.bar(b));
  if (m.empty()) return 1;
  Q d = det(m);
  return abs(d.get_num());
}

int containing_cone(const StackyFan& fan, const QVec& v) {
  for (size_t c = 0; c < fan.cones.size(); ++c) {
    QVec x = fan.cone_coefficients(static_cast<int>(c), v);
    if (std::all_of(x.begin(), x.end(), [](const Q& q) { return q >= 0; })) return static_cast<int>(c);
  }
  return -1;
}

QVec psi_map(const StackyFan& fan, const QVec& v) {
  int c = containing_cone(fan, v);
  if (c < 0) throw Error("OutsideSupport", kMod, "vector " + to_string(v) + " is outside the support");
  QVec x = fan.cone_coefficients(c, v);
  QVec psi(fan.S.size(), Q(0));
  for (size_t j = 0; j < x.size(); ++j) psi[fan.cones[c][j]] = x[j];
  return psi;
}

std::vector<BoxElement> box_elements(const StackyFan& fan) {
  std::map<QVec, BoxElement> found;
  const int n = fan.S.n();
  for (size_t c = 0; c < fan.cones.size(); ++c) {
    ZMat g;
    for (int b : fan.cones[c]) g.push_back(to_z(fan.S.bar(b)));
    for (const auto& p : parallelepiped_points(g)) {
      QVec v = to_q(p);
      if (found.count(v)) continue;
      QVec x = n ? fan.cone_coefficients(static_cast<int>(c), v) : QVec{};
      BoxElement e;
      e.free = v;
      e.age = 0;
      for (size_t j = 0; j < x.size(); ++j)
        if (x[j] != 0) {
          e.cone.push_back(fan.cones[c][j]);
          e.coefficients.push_back(x[j]);
          e.age += x[j];
        }
      found.emplace(v, e);
    }
  }
  std::vector<BoxElement> out;
  const auto& tors = fan.S.lattice.torsion;
  for (auto& [v, e] : found) {
    std::vector<long> res(tors.size(), 0);
    while (true) {
      BoxElement f = e;
      f.torsion = res;
      out.push_back(f);
      size_t i = 0;
      while (i < tors.size() && ++res[i] == tors[i]) res[i++] = 0;
      if (i == tors.size()) break;
    }
  }
  return out;
}

OrbifoldDimension dim_orbifold_cohomology(const StackyFan& fan) {
  OrbifoldDimension d;
  Z vol = 0;
  for (size_t c = 0; c < fan.cones.size(); ++c) vol += cone_multiplicity(fan, static_cast<int>(c));
  d.by_volume = vol.get_si() * fan.S.lattice.torsion_order();
  // each twisted sector V(sigma(v)) contributes one class per maximal cone containing sigma(v)
  long count = 0;
  for (const auto& e : box_elements(fan))
    for (const auto& c : fan.cones)
      if (std::includes(c.begin(), c.end(), e.cone.begin(), e.cone.end())) ++count;
  d.by_box = count;
  if (d.by_box != d.by_volume)
    throw Error("VolumeBoxMismatch", kMod,
                "volume count " + std::to_string(d.by_volume) + " vs box count " + std::to_string(d.by_box));
  return d;
}

QVec ghost_delta(const StackyFan& fan, int b) {
  QVec d = scale(psi_map(fan, fan.S.bar(b)), -1);
  d[b] += 1;
  return d;
}

std::vector<QVec> oe_raw_generators(const StackyFan& fan) {
  std::set<QVec> gens;
  const int m = fan.S.size();
  for (size_t c = 0; c < fan.cones.size(); ++c) {
    const auto& cone = fan.cones[c];
    for (int b = 0; b < m; ++b) {
      QVec g(m, Q(0));
      g[b] = 1;
      if (!std::binary_search(cone.begin(), cone.end(), b)) {
        QVec x = fan.cone_coefficients(static_cast<int>(c), fan.S.bar(b));
        for (size_t j = 0; j < cone.size(); ++j) g[cone[j]] -= x[j];
      }
      gens.insert(g);
    }
  }
  return {gens.begin(), gens.end()};
}

MoriData extended_mori_cones(const StackyFan& fan) {
  MoriData md;
  const int m = fan.S.size();
  const int r = fan.seq.r();
  auto raw = oe_raw_generators(fan);
  md.oe_generators = extreme_rays_of(raw, m);

  // Lambda(Sigma): relations among the generators (e_b, b) and (Psi(v), v) of O(Sigma)
  std::vector<QVec> lam;
  std::vector<LatticeElem> vs;
  std::vector<std::string> origin;
  for (int b = 0; b < m; ++b) {
    QVec e(m, Q(0));
    e[b] = 1;
    lam.push_back(e);
    vs.push_back(fan.S.vectors[b]);
  }
  auto boxes = box_elements(fan);
  for (const auto& e : boxes) {
    if (is_zero(e.free) && std::all_of(e.torsion.begin(), e.torsion.end(), [](long x) { return x == 0; })) continue;
    lam.push_back(psi_map(fan, e.free));
    LatticeElem v = to_long(to_z(e.free));
    v.insert(v.end(), e.torsion.begin(), e.torsion.end());
    vs.push_back(v);
  }
  ZMat rel = relation_lattice(fan.S.lattice, vs);
  std::vector<QVec> lgens;
  for (const auto& a : rel) {
    QVec x(m, Q(0));
    for (size_t k = 0; k < a.size(); ++k) x = add(x, scale(lam[k], Q(a[k])));
    lgens.push_back(x);
  }
  md.lambda_basis = lattice_basis(lgens, m);

  if (r > 0) {
    auto oe_facets = facets_of(md.oe_generators, m);
    std::vector<QVec> rows;
    for (const auto& a : oe_facets) {
      QVec row(r);
      for (int i = 0; i < r; ++i) row[i] = dot(a, to_q(fan.seq.L[i]));
      rows.push_back(row);
    }
    for (const auto& y : extreme_rays(rows, r)) md.ne_generators.push_back(fan.seq.from_coords(y));
    // Hilbert basis of Lambda_+ in coordinates of the Lambda basis
    std::vector<QVec> local;
    for (const auto& g : md.ne_generators) local.push_back(*coordinates(md.lambda_basis, g));
    for (const auto& h : hilbert_basis(local, r)) {
      QVec x(m, Q(0));
      for (int i = 0; i < r; ++i) x = add(x, scale(md.lambda_basis[i], Q(h[i])));
      md.lambda_plus.push_back(x);
    }
  }

  for (int b : fan.rays) {
    QVec e(m, Q(0));
    e[b] = 1;
    md.o_plus.push_back({e, fan.S.bar(b), "ray"});
  }
  for (const auto& e : boxes) {
    if (is_zero(e.free)) continue;
    md.o_plus.push_back({psi_map(fan, e.free), e.free, "box"});
  }
  for (const auto& l : md.lambda_plus) md.o_plus.push_back({l, QVec(fan.S.n(), Q(0)), "curve"});
  return md;
}

}  // namespace tw
