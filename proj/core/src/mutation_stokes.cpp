#include "toricwall/mutation_stokes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tw {

namespace {
const char* kMod = "mutation_stokes";

double rotated_im(double phase, cplx u) { return (std::exp(cplx(0, -phase)) * u).imag(); }
double rotated_re(double phase, cplx u) { return (std::exp(cplx(0, -phase)) * u).real(); }
}  // namespace

MarkedReflectionSystem MarkedReflectionSystem::from_classes(const ChowRing& ring, const std::vector<KClass>& classes,
                                                            std::vector<cplx> markings, double phase) {
  if (markings.size() != classes.size()) throw Error("IndexOutOfRange", kMod, "one marking per class is required");
  MarkedReflectionSystem m;
  m.form = hrr_form(ring);
  for (const auto& c : classes) {
    m.vectors.push_back(c.ch);
    m.labels.push_back(c.label);
  }
  m.markings = std::move(markings);
  m.phase = phase;
  return m;
}

MarkedReflectionSystem MarkedReflectionSystem::abstract(const ZMat& gram, std::vector<std::string> labels,
                                                        std::vector<cplx> markings, double phase) {
  const int N = static_cast<int>(gram.size());
  MarkedReflectionSystem m;
  m.form.assign(N, QVec(N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) m.form[i][j] = gram[i][j];
  for (int i = 0; i < N; ++i) {
    QVec e(N, Q(0));
    e[i] = 1;
    m.vectors.push_back(e);
  }
  if (labels.empty())
    for (int i = 0; i < N; ++i) labels.push_back("v" + std::to_string(i + 1));
  m.labels = std::move(labels);
  m.markings = std::move(markings);
  m.phase = phase;
  return m;
}

Q MarkedReflectionSystem::pair(const QVec& x, const QVec& y) const {
  Q s = 0;
  for (size_t a = 0; a < x.size(); ++a) {
    if (x[a] == 0) continue;
    for (size_t b = 0; b < y.size(); ++b)
      if (y[b] != 0) s += x[a] * form[a][b] * y[b];
  }
  return s;
}

Q MarkedReflectionSystem::pair(int i, int j) const { return pair(vectors[i], vectors[j]); }

std::vector<int> MarkedReflectionSystem::order() const {
  std::vector<int> idx(size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    double ia = rotated_im(phase, markings[a]), ib = rotated_im(phase, markings[b]);
    if (ia != ib) return ia > ib;
    return a < b;
  });
  return idx;
}

bool admissible(double phase, const std::vector<cplx>& markings, double tol_adm) {
  for (size_t i = 0; i < markings.size(); ++i)
    for (size_t j = i + 1; j < markings.size(); ++j) {
      cplx d = markings[i] - markings[j];
      if (std::abs(d) < tol_adm) continue;
      if (std::abs(rotated_im(phase, d)) <= tol_adm * std::abs(d)) return false;
    }
  return true;
}

StokesData stokes_matrix(const MarkedReflectionSystem& m) {
  StokesData sd;
  sd.order = m.order();
  const int N = m.size();
  sd.gram.assign(N, ZVec(N));
  bool ok = true;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      Q v = m.pair(sd.order[a], sd.order[b]);
      if (v.get_den() != 1) throw Error("NotSemiorthogonal", kMod, "pairing value is not an integer");
      sd.gram[a][b] = v.get_num();
      if (a == b && v != 1) ok = false;
      if (a > b && v != 0) ok = false;
    }
  if (!ok) throw Error("NotSemiorthogonal", kMod, "ordered Gram matrix is not unipotent upper-triangular");
  return sd;
}

std::string to_string(Direction d) { return d == Direction::Left ? "left" : "right"; }

MarkedReflectionSystem mutate(const MarkedReflectionSystem& m, int i, int j, Direction d) {
  if (i < 0 || j < 0 || i >= m.size() || j >= m.size() || i == j)
    throw Error("IndexOutOfRange", kMod, "mutation indices out of range");
  MarkedReflectionSystem r = m;
  Q c = d == Direction::Right ? m.pair(i, j) : m.pair(j, i);
  r.vectors[i] = sub(m.vectors[i], scale(m.vectors[j], c));
  if (c != 0) r.labels[i] = (d == Direction::Right ? "R(" : "L(") + m.labels[i] + " | " + m.labels[j] + ")";
  return r;
}

// ---------------------------------------------------------------- evolution

namespace {

struct Crossing {
  double s;
  int a, b;
  int sign_before;  // sign of Im e^{-i phase}(u_a - u_b) before the crossing
};

}  // namespace

EvolveResult evolve_markings(const MarkedReflectionSystem& start, const MarkingPath& path, int steps,
                             const EvolveOptions& opt) {
  EvolveResult res;
  res.system = start;
  auto& m = res.system;
  const double phase = m.phase;
  const int N = m.size();
  std::vector<cplx> u0 = path(0.0);
  m.markings = u0;
  auto sgn = [](double x) { return (x > 0) - (x < 0); };
  // last nonzero sign of the rotated imaginary gap per pair; a gap that lands
  // exactly on zero at a grid point is resolved when it leaves zero again
  std::vector<int> last(N * N, 0);
  for (int a = 0; a < N; ++a)
    for (int b = a + 1; b < N; ++b) last[a * N + b] = sgn(rotated_im(phase, u0[a] - u0[b]));
  for (int k = 0; k < steps; ++k) {
    const double s0 = static_cast<double>(k) / steps, s1 = static_cast<double>(k + 1) / steps;
    std::vector<cplx> ub = path(s1);
    std::vector<Crossing> cr;
    for (int a = 0; a < N; ++a)
      for (int b = a + 1; b < N; ++b) {
        const int before_sign = last[a * N + b];
        const int sb = sgn(rotated_im(phase, ub[a] - ub[b]));
        if (sb == 0) continue;
        last[a * N + b] = sb;
        if (before_sign == 0 || before_sign == sb) continue;
        double lo = s0, hi = s1;
        while (hi - lo > opt.bisection_tol) {
          double mid = 0.5 * (lo + hi);
          auto um = path(mid);
          if (sgn(rotated_im(phase, um[a] - um[b])) == sb) {
            hi = mid;
          } else {
            lo = mid;
          }
        }
        cr.push_back({0.5 * (lo + hi), a, b, before_sign});
      }
    std::sort(cr.begin(), cr.end(), [](const Crossing& x, const Crossing& y) {
      if (x.s != y.s) return x.s < y.s;
      return std::make_pair(x.a, x.b) < std::make_pair(y.a, y.b);
    });
    // apply one crossing to a system; returns the event
    auto apply = [&](MarkedReflectionSystem& sys, const Crossing& c, const std::vector<cplx>& at) {
      MutationEvent ev;
      ev.step = k + 1;
      ev.s = c.s;
      cplx d = at[c.b] - at[c.a];
      if (std::abs(d) < opt.equal_marking_tol) {
        ev.pass_through = true;
        ev.moving = c.a;
        ev.pivot = c.b;
        ev.before = ev.after = sys.labels[c.a];
        ev.pivot_label = sys.labels[c.b];
        return ev;
      }
      double re = rotated_re(phase, d);
      int i = c.a, j = c.b;
      if (re < 0) std::swap(i, j);  // u_i is the one whose ray is crossed
      ev.moving = i;
      ev.pivot = j;
      ev.pivot_label = sys.labels[j];
      ev.before = sys.labels[i];
      if (std::abs(re) < 1e-9 * (1 + std::abs(at[c.a]) + std::abs(at[c.b]))) {
        if (sys.pair(i, j) != 0 || sys.pair(j, i) != 0)
          throw Error("SimultaneousCrossing", kMod, "markings meet head-on with a non-orthogonal pair");
        ev.pass_through = true;
        ev.after = ev.before;
        return ev;
      }
      bool i_above = (i == c.a) == (c.sign_before > 0);
      ev.direction = i_above ? Direction::Right : Direction::Left;
      sys = mutate(sys, i, j, ev.direction);
      ev.after = sys.labels[i];
      if (sys.pair(i, j) == 0 && sys.pair(j, i) == 0 && m.pair(i, j) == 0 && m.pair(j, i) == 0) ev.pass_through = true;
      return ev;
    };
    size_t g = 0;
    while (g < cr.size()) {
      size_t e = g + 1;
      while (e < cr.size() && cr[e].s - cr[g].s < opt.simultaneous_tol) ++e;
      auto at = path(cr[g].s);
      if (e - g == 1) {
        res.events.push_back(apply(m, cr[g], at));
      } else {
        // simultaneous crossings: both orders must agree
        MarkedReflectionSystem f = m, r = m;
        std::vector<MutationEvent> evs;
        for (size_t t = g; t < e; ++t) evs.push_back(apply(f, cr[t], at));
        for (size_t t = e; t-- > g;) apply(r, cr[t], at);
        if (f.vectors != r.vectors)
          throw Error("SimultaneousCrossing", kMod, "crossings at s = " + std::to_string(cr[g].s) + " do not commute");
        m = f;
        res.events.insert(res.events.end(), evs.begin(), evs.end());
      }
      g = e;
    }
    m.markings = ub;
  }
  return res;
}

EvolveResult evolve(const MarkedReflectionSystem& start, const Trajectory& tr, const EvolveOptions& opt) {
  const int steps = static_cast<int>(tr.s.size()) - 1;
  if (start.size() != tr.branches()) throw Error("IndexOutOfRange", kMod, "one vector per branch is required");
  MarkingPath path = [&](double s) {
    std::vector<cplx> u;
    double pos = s * steps;
    int k = static_cast<int>(std::floor(pos + 1e-12));
    if (std::abs(pos - std::round(pos)) < 1e-12) {
      for (const auto& p : tr.points[static_cast<int>(std::round(pos))]) u.push_back(p.value);
      return u;
    }
    k = std::clamp(k, 0, steps - 1);
    for (const auto& p : points_between(tr, k, s)) u.push_back(p.value);
    return u;
  };
  return evolve_markings(start, path, steps, opt);
}

// ---------------------------------------------------------------- Orlov blocks

std::vector<Cluster> classify_clusters(const Trajectory& tr, cplx v_further, double growth) {
  const auto& end = tr.points.back();
  auto ext = track_critical_values(tr.family, tr.v1, v_further, 40, end);
  const auto& far = ext.points.back();
  const int N = static_cast<int>(end.size());
  std::vector<bool> div(N);
  for (int i = 0; i < N; ++i) div[i] = std::abs(far[i].value) > growth * std::abs(end[i].value);
  std::vector<Cluster> out;
  Cluster conv;
  std::vector<int> comp(N, -1);
  for (int i = 0; i < N; ++i) {
    if (!div[i]) {
      conv.members.push_back(i);
      continue;
    }
    if (comp[i] >= 0) continue;
    // single linkage among divergent values at the far point
    Cluster c;
    c.divergent = true;
    std::vector<int> stack{i};
    comp[i] = static_cast<int>(out.size());
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      c.members.push_back(a);
      for (int b = 0; b < N; ++b)
        if (div[b] && comp[b] < 0 &&
            std::abs(far[a].value - far[b].value) < 0.25 * std::min(std::abs(far[a].value), std::abs(far[b].value))) {
          comp[b] = comp[i];
          stack.push_back(b);
        }
    }
    std::sort(c.members.begin(), c.members.end());
    out.push_back(c);
  }
  if (!conv.members.empty()) out.push_back(conv);
  return out;
}

namespace {

// Z-span equality of two independent families of vectors.
bool same_lattice(const std::vector<QVec>& a, const std::vector<QVec>& b) {
  if (a.size() != b.size()) return false;
  QMat A(a.begin(), a.end()), B(b.begin(), b.end());
  if (rank(A) != static_cast<int>(a.size()) || rank(B) != static_cast<int>(b.size())) return false;
  auto in_span = [](const QMat& basis, const QVec& x) {
    // coordinates of x in the rows of basis
    const int k = static_cast<int>(basis.size());
    QMat t = transpose(basis);
    auto c = solve(t, x, k);
    return c && is_integral(*c);
  };
  for (const auto& x : b)
    if (!in_span(A, x)) return false;
  for (const auto& x : a)
    if (!in_span(B, x)) return false;
  return true;
}

}  // namespace

OrlovEvolutionReport verify_orlov_evolution(const ChowRing& plus, const ChowRing& minus, const WallCrossing& wall,
                                            const MarkedReflectionSystem& end, const std::vector<Cluster>& clusters) {
  OrlovEvolutionReport rep;
  auto order = end.order();
  std::vector<int> pos(end.size());
  for (int p = 0; p < end.size(); ++p) pos[order[p]] = p;
  // clusters sorted by their position in the Stokes order; each must be contiguous
  std::vector<Cluster> cl = clusters;
  std::sort(cl.begin(), cl.end(), [&](const Cluster& a, const Cluster& b) {
    int pa = end.size(), pb = end.size();
    for (int i : a.members) pa = std::min(pa, pos[i]);
    for (int i : b.members) pb = std::min(pb, pos[i]);
    return pa < pb;
  });
  int expect_pos = 0;
  for (const auto& c : cl) {
    std::vector<int> ps;
    for (int i : c.members) ps.push_back(pos[i]);
    std::sort(ps.begin(), ps.end());
    for (size_t t = 0; t < ps.size(); ++t)
      if (ps[t] != expect_pos + static_cast<int>(t)) {
        rep.detail = "clusters are not contiguous in the Stokes order";
        return rep;
      }
    expect_pos += static_cast<int>(ps.size());
  }
  OrlovBasis ob = orlov_basis(plus, minus, wall, 0);
  const long J = *wall.J;
  std::vector<QVec> pulled;
  for (const auto& a : ob.kx_minus_basis) pulled.push_back(plus.exp(pullback_line_bundle_c1(plus, wall, a)));
  QVec E = plus.divisor(wall.M_minus.front());
  auto zblock = [&](long k) {
    std::vector<QVec> out;
    QVec oe = sub(plus.one(), plus.exp(scale(E, -1)));
    for (const auto& a : ob.kz_basis)
      out.push_back(plus.mul(plus.mul(plus.exp(scale(E, Q(-k))), oe), plus.exp(pullback_line_bundle_c1(plus, wall, a))));
    return out;
  };
  rep.ok = true;
  bool seen_conv = false;
  rep.h = 0;
  for (const auto& c : cl) {
    std::vector<QVec> vs;
    std::vector<int> members = c.members;
    std::sort(members.begin(), members.end(), [&](int a, int b) { return pos[a] < pos[b]; });
    for (int i : members) vs.push_back(end.vectors[i]);
    rep.block_sizes.push_back(static_cast<int>(vs.size()));
    QMat g(vs.size(), QVec(vs.size()));
    for (size_t a = 0; a < vs.size(); ++a)
      for (size_t b = 0; b < vs.size(); ++b) g[a][b] = end.pair(vs[a], vs[b]);
    Q d = det(g);
    if (d != 1 && d != -1) {
      rep.ok = false;
      rep.detail += "block Gram not unimodular; ";
    }
    if (!c.divergent) {
      seen_conv = true;
      rep.block_index.push_back(-999);
      if (!same_lattice(vs, pulled)) {
        rep.ok = false;
        rep.detail += "convergent block does not span the pull-back of K(X_-); ";
      }
      continue;
    }
    if (!seen_conv) ++rep.h;
    long found = -999;
    for (long k = -J; k <= J && found == -999; ++k)
      if (same_lattice(vs, zblock(k))) found = k;
    rep.block_index.push_back(found);
    if (found == -999) {
      rep.ok = false;
      rep.detail += "divergent block matches no twisted K(Z) block; ";
    }
  }
  // the blocks above the convergent one are k = -h..-1, the ones below k = 0..J-h-1
  long expect = -rep.h;
  for (size_t b = 0; b < cl.size(); ++b) {
    if (!cl[b].divergent) {
      expect = 0;
      continue;
    }
    if (rep.block_index[b] != expect) {
      rep.ok = false;
      rep.detail += "twists out of the order of the decomposition; ";
    }
    ++expect;
  }
  int divergent_blocks = 0;
  for (const auto& c : cl) divergent_blocks += c.divergent;
  if (divergent_blocks != J) {
    rep.ok = false;
    rep.detail += "number of divergent blocks differs from J; ";
  }
  if (rep.ok) rep.detail = "ok";
  return rep;
}

OrlovEvolutionReport verify_orlov_evolution_ranks(const MarkedReflectionSystem& end, const std::vector<Cluster>& clusters,
                                                  int expected_convergent, int expected_divergent) {
  OrlovEvolutionReport rep;
  int conv = 0, div = 0;
  for (const auto& c : clusters) {
    rep.block_sizes.push_back(static_cast<int>(c.members.size()));
    rep.block_index.push_back(c.divergent ? 0 : -999);
    (c.divergent ? div : conv) += static_cast<int>(c.members.size());
  }
  (void)end;
  rep.ok = conv == expected_convergent && div == expected_divergent;
  rep.detail = rep.ok ? "ok" : "block ranks differ";
  return rep;
}

}  // namespace tw
