#include "toricwall/polyhedral.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tw {

namespace {

using Bits = std::vector<bool>;

struct DDRay {
  QVec r;
  Bits zero;
};

QVec normalized(const QVec& v) { return to_q(primitive(v)); }

bool subset_of(const Bits& a, const Bits& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

}  // namespace

std::vector<QVec> extreme_rays(const std::vector<QVec>& ineq, int dim) {
  if (dim == 0) return {};
  const int m = static_cast<int>(ineq.size());
  // choose dim independent rows
  std::vector<int> basis_rows;
  QMat acc;
  for (int i = 0; i < m && static_cast<int>(basis_rows.size()) < dim; ++i) {
    acc.push_back(ineq[i]);
    if (rank(acc) > static_cast<int>(basis_rows.size()))
      basis_rows.push_back(i);
    else
      acc.pop_back();
  }
  if (static_cast<int>(basis_rows.size()) < dim)
    throw Error("NotPointed", "polyhedral", "inequality system has a lineality space");
  auto inv = inverse(acc);
  std::vector<DDRay> rays;
  for (int j = 0; j < dim; ++j) {
    DDRay r;
    r.r.resize(dim);
    for (int i = 0; i < dim; ++i) r.r[i] = (*inv)[i][j];
    r.r = normalized(r.r);
    r.zero.assign(m, false);
    for (int k = 0; k < dim; ++k)
      if (k != j) r.zero[basis_rows[k]] = true;
    rays.push_back(std::move(r));
  }
  std::vector<bool> used(m, false);
  for (int b : basis_rows) used[b] = true;
  for (int i = 0; i < m; ++i) {
    if (used[i]) continue;
    used[i] = true;
    const QVec& a = ineq[i];
    std::vector<int> pos, neg, zer;
    std::vector<Q> val(rays.size());
    for (size_t k = 0; k < rays.size(); ++k) {
      val[k] = dot(a, rays[k].r);
      if (val[k] > 0)
        pos.push_back(static_cast<int>(k));
      else if (val[k] < 0)
        neg.push_back(static_cast<int>(k));
      else
        zer.push_back(static_cast<int>(k));
    }
    if (neg.empty()) {
      for (int k : zer) rays[k].zero[i] = true;
      continue;
    }
    std::vector<DDRay> next;
    for (int k : pos) next.push_back(rays[k]);
    for (int k : zer) {
      next.push_back(rays[k]);
      next.back().zero[i] = true;
    }
    for (int p : pos)
      for (int n : neg) {
        Bits common(m, false);
        int cnt = 0;
        for (int t = 0; t < m; ++t)
          if (rays[p].zero[t] && rays[n].zero[t]) {
            common[t] = true;
            ++cnt;
          }
        if (cnt < dim - 2) continue;
        bool adjacent = true;
        for (size_t k = 0; k < rays.size() && adjacent; ++k) {
          if (static_cast<int>(k) == p || static_cast<int>(k) == n) continue;
          if (subset_of(common, rays[k].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        DDRay r;
        r.r = normalized(sub(scale(rays[n].r, val[p]), scale(rays[p].r, val[n])));
        r.zero = common;
        r.zero[i] = true;
        next.push_back(std::move(r));
      }
    rays = std::move(next);
  }
  std::vector<QVec> out;
  for (auto& r : rays) out.push_back(r.r);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<QVec> facets_of(const std::vector<QVec>& gens, int dim) {
  if (rank(QMat(gens.begin(), gens.end())) < dim)
    throw Error("NotFullDimensional", "polyhedral", "generators do not span");
  return extreme_rays(gens, dim);
}

std::vector<QVec> extreme_rays_of(const std::vector<QVec>& gens, int /*dim*/) {
  std::vector<QVec> nz;
  for (const auto& g : gens)
    if (!is_zero(g)) nz.push_back(normalized(g));
  if (nz.empty()) return {};
  QMat span = nz;
  auto piv = rref(span);
  span.resize(piv.size());
  const int k = static_cast<int>(span.size());
  // coordinates in the span basis (rref rows); pivot entries give coordinates directly
  auto coords = [&](const QVec& v) {
    QVec c(k);
    for (int i = 0; i < k; ++i) c[i] = v[piv[i]];
    return c;
  };
  std::vector<QVec> local;
  for (const auto& g : nz) local.push_back(coords(g));
  std::vector<QVec> out;
  if (k == 1) {
    // a pointed one-dimensional cone is a single ray
    out.push_back(nz.front());
    for (const auto& g : nz)
      if (dot(g, nz.front()) < 0) throw Error("NotPointed", "polyhedral", "cone contains a line");
    return out;
  }
  auto f = facets_of(local, k);
  for (size_t j = 0; j < nz.size(); ++j) {
    QMat tight;
    for (const auto& a : f)
      if (dot(a, local[j]) == 0) tight.push_back(a);
    if (rank(tight) == k - 1) out.push_back(nz[j]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool in_cone(const std::vector<QVec>& facets, const QVec& x) {
  for (const auto& a : facets)
    if (dot(a, x) < 0) return false;
  return true;
}

bool same_rays(std::vector<QVec> a, std::vector<QVec> b) {
  for (auto& x : a) x = normalized(x);
  for (auto& x : b) x = normalized(x);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return a == b;
}

namespace {

void triangulate_rec(const std::vector<QVec>& rays, const std::vector<QVec>& facets, std::vector<int> idx, int k,
                     std::vector<std::vector<int>>& out) {
  if (static_cast<int>(idx.size()) == k) {
    std::sort(idx.begin(), idx.end());
    out.push_back(idx);
    return;
  }
  int apex = idx.front();
  std::set<std::vector<int>> faces;
  for (const auto& a : facets) {
    if (dot(a, rays[apex]) == 0) continue;
    std::vector<int> face;
    for (int i : idx)
      if (dot(a, rays[i]) == 0) face.push_back(i);
    QMat m;
    for (int i : face) m.push_back(rays[i]);
    if (!face.empty() && rank(m) == k - 1) faces.insert(face);
  }
  for (const auto& face : faces) {
    std::vector<std::vector<int>> sub;
    triangulate_rec(rays, facets, face, k - 1, sub);
    for (auto s : sub) {
      s.push_back(apex);
      std::sort(s.begin(), s.end());
      out.push_back(s);
    }
  }
}

}  // namespace

std::vector<std::vector<int>> triangulate(const std::vector<QVec>& rays, int dim) {
  std::vector<std::vector<int>> out;
  if (rays.empty()) return out;
  auto f = facets_of(rays, dim);
  std::vector<int> idx(rays.size());
  for (size_t i = 0; i < rays.size(); ++i) idx[i] = static_cast<int>(i);
  triangulate_rec(rays, f, idx, dim, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ZVec> parallelepiped_points(const ZMat& gens) {
  const int k = static_cast<int>(gens.size());
  if (k == 0) return {ZVec{}};
  // columns of B are the generators
  ZMat b(k, ZVec(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) b[i][j] = gens[j][i];
  Smith s = smith(b);
  QMat uq(k, QVec(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) uq[i][j] = s.u[i][j];
  QMat uinv = *inverse(uq);
  QMat bq(k, QVec(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) bq[i][j] = b[i][j];
  QMat binv = *inverse(bq);
  std::vector<ZVec> out;
  std::vector<long> c(k, 0);
  std::vector<long> lim(k);
  for (int i = 0; i < k; ++i) lim[i] = s.diag[i].get_si();
  while (true) {
    QVec x = matvec(uinv, to_q(c));
    QVec lam = matvec(binv, x);
    for (auto& l : lam) {
      Z fl;
      mpz_fdiv_q(fl.get_mpz_t(), l.get_num_mpz_t(), l.get_den_mpz_t());
      l -= fl;
    }
    out.push_back(to_z(matvec(bq, lam)));
    int i = 0;
    while (i < k && ++c[i] == lim[i]) c[i++] = 0;
    if (i == k) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ZVec> hilbert_basis(const std::vector<QVec>& rays_in, int dim) {
  std::vector<QVec> rays;
  for (const auto& r : rays_in) rays.push_back(normalized(r));
  std::set<ZVec> cand;
  if (dim == 1) {
    for (const auto& r : rays) cand.insert(to_z(r));
    return {cand.begin(), cand.end()};
  }
  for (const auto& simplex : triangulate(rays, dim)) {
    ZMat g;
    for (int i : simplex) g.push_back(to_z(rays[i]));
    for (auto& p : parallelepiped_points(g)) {
      bool zero = std::all_of(p.begin(), p.end(), [](const Z& x) { return x == 0; });
      if (!zero) cand.insert(p);
    }
    for (auto& r : g) cand.insert(r);
  }
  auto f = facets_of(rays, dim);
  std::vector<ZVec> c(cand.begin(), cand.end());
  std::vector<ZVec> out;
  for (size_t i = 0; i < c.size(); ++i) {
    bool reducible = false;
    for (size_t j = 0; j < c.size() && !reducible; ++j) {
      if (i == j) continue;
      QVec d = sub(to_q(c[i]), to_q(c[j]));
      if (!is_zero(d) && in_cone(f, d)) reducible = true;
    }
    if (!reducible) out.push_back(c[i]);
  }
  return out;
}

std::optional<QVec> lp_feasible(const QMat& ge, const QVec& bge, const QMat& eq, const QVec& beq, int n) {
  // standard form in variables p (n), m (n), slacks (ge rows), artificials (all rows)
  const int mg = static_cast<int>(ge.size());
  const int me = static_cast<int>(eq.size());
  const int rows = mg + me;
  const int nv = 2 * n + mg;
  const int cols = nv + rows;
  QMat t(rows + 1, QVec(cols + 1, Q(0)));
  std::vector<int> basic(rows);
  for (int r = 0; r < rows; ++r) {
    const QVec& a = r < mg ? ge[r] : eq[r - mg];
    Q b = r < mg ? bge[r] : beq[r - mg];
    for (int j = 0; j < n; ++j) {
      t[r][j] = a[j];
      t[r][n + j] = -a[j];
    }
    if (r < mg) t[r][2 * n + r] = -1;
    t[r][cols] = b;
    if (b < 0)
      for (auto& x : t[r]) x = -x;
    t[r][nv + r] = 1;
    basic[r] = nv + r;
  }
  // objective row: minimize sum of artificials, expressed in nonbasic terms
  for (int r = 0; r < rows; ++r)
    for (int j = 0; j <= cols; ++j)
      if (j < nv || j == cols) t[rows][j] -= t[r][j];
  while (true) {
    int enter = -1;
    for (int j = 0; j < cols; ++j)
      if (t[rows][j] < 0) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    Q best;
    for (int r = 0; r < rows; ++r) {
      if (t[r][enter] <= 0) continue;
      Q ratio = t[r][cols] / t[r][enter];
      if (leave < 0 || ratio < best || (ratio == best && basic[r] < basic[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) break;  // unbounded cannot occur for phase one
    Q piv = t[leave][enter];
    for (auto& x : t[leave]) x /= piv;
    for (int r = 0; r <= rows; ++r) {
      if (r == leave || t[r][enter] == 0) continue;
      Q f = t[r][enter];
      for (int j = 0; j <= cols; ++j) t[r][j] -= f * t[leave][j];
    }
    basic[leave] = enter;
  }
  if (t[rows][cols] != 0) return std::nullopt;
  QVec x(n, Q(0));
  for (int r = 0; r < rows; ++r) {
    int b = basic[r];
    if (b < n)
      x[b] += t[r][cols];
    else if (b < 2 * n)
      x[b - n] -= t[r][cols];
  }
  return x;
}

}  // namespace tw
