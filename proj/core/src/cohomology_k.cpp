#include "toricwall/cohomology_k.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <functional>
#include <set>
#include <sstream>

namespace tw {

namespace {
const char* kMod = "cohomology_k";
using R50 = boost::multiprecision::cpp_bin_float_50;
using C50 = boost::multiprecision::cpp_complex_50;

R50 to_r50(const Q& q) { return R50(q.get_num().get_str()) / R50(q.get_den().get_str()); }
}  // namespace

// ---------------------------------------------------------------- SymPoly

SymPoly SymPoly::constant(int nvars, const Q& c) {
  SymPoly p;
  p.nvars = nvars;
  if (c != 0) p.terms[std::vector<int>(nvars, 0)] = c;
  return p;
}

SymPoly SymPoly::variable(int nvars, int idx) {
  SymPoly p;
  p.nvars = nvars;
  std::vector<int> e(nvars, 0);
  e[idx] = 1;
  p.terms[e] = 1;
  return p;
}

bool SymPoly::is_zero() const { return terms.empty(); }

SymPoly SymPoly::operator+(const SymPoly& o) const {
  SymPoly r = *this;
  r.nvars = std::max(nvars, o.nvars);
  for (const auto& [e, c] : o.terms) {
    Q& t = r.terms[e];
    t += c;
    if (t == 0) r.terms.erase(e);
  }
  return r;
}

SymPoly SymPoly::operator*(const SymPoly& o) const {
  SymPoly r;
  r.nvars = std::max(nvars, o.nvars);
  for (const auto& [e1, c1] : terms)
    for (const auto& [e2, c2] : o.terms) {
      std::vector<int> e(r.nvars, 0);
      for (size_t i = 0; i < e1.size(); ++i) e[i] += e1[i];
      for (size_t i = 0; i < e2.size(); ++i) e[i] += e2[i];
      Q& t = r.terms[e];
      t += c1 * c2;
      if (t == 0) r.terms.erase(e);
    }
  return r;
}

SymPoly SymPoly::scaled(const Q& c) const {
  SymPoly r;
  r.nvars = nvars;
  if (c == 0) return r;
  for (const auto& [e, v] : terms) r.terms[e] = v * c;
  return r;
}

namespace {

R50 constant_value(int idx) {
  if (idx == 0) return boost::math::constants::euler<R50>();
  return boost::math::zeta(R50(idx + 1));
}

R50 eval50(const SymPoly& p) {
  R50 s = 0;
  for (const auto& [e, c] : p.terms) {
    R50 t = to_r50(c);
    for (size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) t *= constant_value(static_cast<int>(i));
    s += t;
  }
  return s;
}

}  // namespace

double SymPoly::eval() const { return static_cast<double>(eval50(*this)); }

std::string SymPoly::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    Q a = abs(c);
    bool unit = a == 1;
    bool has_var = std::any_of(e.begin(), e.end(), [](int x) { return x > 0; });
    if (!unit || !has_var) os << a.get_str();
    bool need_star = !unit || !has_var;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (need_star) os << "*";
      need_star = true;
      os << (i == 0 ? std::string("gamma") : "zeta(" + std::to_string(i + 1) + ")");
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

// ---------------------------------------------------------------- ChowRing

namespace {

void monomials_of_degree(int vars, int k, std::vector<int>& cur, int start_var,
                         std::vector<std::vector<int>>& out) {
  if (k == 0) {
    out.push_back(cur);
    return;
  }
  for (int v = start_var; v < vars; ++v) {
    ++cur[v];
    monomials_of_degree(vars, k - 1, cur, v, out);
    --cur[v];
  }
}

}  // namespace

ChowRing ChowRing::build(const StackyFan& fan) {
  if (!fan.S.lattice.torsion.empty()) throw Error("NotSmooth", kMod, "lattice has torsion");
  for (size_t c = 0; c < fan.cones.size(); ++c)
    if (cone_multiplicity(fan, static_cast<int>(c)) != 1) throw Error("NotSmooth", kMod, "cone is not unimodular");
  if (!fan.S.support_facets().empty()) throw Error("NotComplete", kMod, "fan support is not the whole space");
  ChowRing R;
  R.fan_ = fan;
  R.n_ = fan.S.n();
  R.rays_ = fan.rays;
  const int nr = static_cast<int>(R.rays_.size());
  std::set<std::vector<int>> faces;
  for (const auto& f : fan.all_cones()) {
    std::vector<int> local;
    for (int b : f) local.push_back(static_cast<int>(std::lower_bound(R.rays_.begin(), R.rays_.end(), b) - R.rays_.begin()));
    faces.insert(local);
  }
  auto support_is_face = [&](const std::vector<int>& e) {
    std::vector<int> s;
    for (int i = 0; i < nr; ++i)
      if (e[i] > 0) s.push_back(i);
    return faces.count(s) > 0;
  };
  // linear relations sum_b <m_i, b> D_b
  std::vector<std::vector<Q>> lin(R.n_, std::vector<Q>(nr));
  for (int i = 0; i < R.n_; ++i)
    for (int j = 0; j < nr; ++j) lin[i][j] = fan.S.vectors[R.rays_[j]][i];

  R.deg_.resize(R.n_ + 1);
  int offset = 0;
  for (int k = 0; k <= R.n_; ++k) {
    auto& D = R.deg_[k];
    std::vector<std::vector<int>> all;
    std::vector<int> cur(nr, 0);
    monomials_of_degree(nr, k, cur, 0, all);
    for (auto& m : all)
      if (support_is_face(m)) {
        D.index[m] = static_cast<int>(D.monomials.size());
        D.monomials.push_back(m);
      }
    const int cols = static_cast<int>(D.monomials.size());
    QMat rel;
    if (k > 0) {
      std::vector<std::vector<int>> lower;
      std::vector<int> c2(nr, 0);
      monomials_of_degree(nr, k - 1, c2, 0, lower);
      for (const auto& mu : lower)
        for (int i = 0; i < R.n_; ++i) {
          QVec row(cols, Q(0));
          bool any = false;
          for (int j = 0; j < nr; ++j) {
            if (lin[i][j] == 0) continue;
            auto m = mu;
            ++m[j];
            auto it = D.index.find(m);
            if (it == D.index.end()) continue;
            row[it->second] += lin[i][j];
            any = true;
          }
          if (any) rel.push_back(row);
        }
    }
    if (!rel.empty()) D.pivots = rref(rel);
    D.rref_rows.assign(rel.begin(), rel.begin() + D.pivots.size());
    std::vector<bool> piv(cols, false);
    for (int p : D.pivots) piv[p] = true;
    D.basis_offset = offset;
    for (int c = 0; c < cols; ++c)
      if (!piv[c]) {
        D.basis_cols.push_back(c);
        R.basis_.push_back(D.monomials[c]);
        R.basis_deg_.push_back(k);
      }
    offset += static_cast<int>(D.basis_cols.size());
  }
  if (static_cast<int>(R.basis_.size()) != static_cast<int>(fan.cones.size()))
    throw Error("NotComplete", kMod, "ring dimension differs from the number of maximal cones");
  if (R.deg_[R.n_].basis_cols.size() != 1) throw Error("NotComplete", kMod, "top degree is not one-dimensional");
  R.top_ = R.deg_[R.n_].basis_offset;
  // normalise the degree map with a maximal cone and check all others
  bool first = true;
  for (const auto& c : fan.cones) {
    std::vector<int> e(nr, 0);
    for (int b : c) e[std::lower_bound(R.rays_.begin(), R.rays_.end(), b) - R.rays_.begin()] = 1;
    Q coef = R.normal_form(e)[R.top_];
    if (first) {
      R.top_value_ = 1 / coef;
      first = false;
    } else if (coef * R.top_value_ != 1) {
      throw Error("NotSmooth", kMod, "degree of a maximal cone monomial is not 1");
    }
  }
  const int d = R.dim();
  R.table_.assign(d, std::vector<std::vector<std::pair<int, Q>>>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (R.basis_deg_[i] + R.basis_deg_[j] > R.n_) continue;
      std::vector<int> e(nr);
      for (int t = 0; t < nr; ++t) e[t] = R.basis_[i][t] + R.basis_[j][t];
      QVec nf = R.normal_form(e);
      for (int k = 0; k < d; ++k)
        if (nf[k] != 0) R.table_[i][j].push_back({k, nf[k]});
    }
  return R;
}

QVec ChowRing::normal_form(const std::vector<int>& e) const {
  QVec out(dim(), Q(0));
  int k = 0;
  for (int x : e) k += x;
  if (k > n_) return out;
  const auto& D = deg_[k];
  auto it = D.index.find(e);
  if (it == D.index.end()) return out;
  int col = it->second;
  auto pit = std::find(D.pivots.begin(), D.pivots.end(), col);
  if (pit == D.pivots.end()) {
    auto bit = std::find(D.basis_cols.begin(), D.basis_cols.end(), col);
    out[D.basis_offset + (bit - D.basis_cols.begin())] = 1;
    return out;
  }
  const QVec& row = D.rref_rows[pit - D.pivots.begin()];
  for (size_t b = 0; b < D.basis_cols.size(); ++b) out[D.basis_offset + b] = -row[D.basis_cols[b]];
  return out;
}

std::string ChowRing::basis_name(int i) const {
  std::ostringstream os;
  bool any = false;
  for (size_t t = 0; t < basis_[i].size(); ++t) {
    if (basis_[i][t] == 0) continue;
    if (any) os << "*";
    any = true;
    os << "D[" << fan_.S.labels[rays_[t]] << "]";
    if (basis_[i][t] > 1) os << "^" << basis_[i][t];
  }
  return any ? os.str() : "1";
}

QVec ChowRing::one() const {
  QVec r = zero();
  r[0] = 1;
  return r;
}

QVec ChowRing::divisor(int b) const {
  auto it = std::lower_bound(rays_.begin(), rays_.end(), b);
  if (it == rays_.end() || *it != b) return zero();
  std::vector<int> e(rays_.size(), 0);
  e[it - rays_.begin()] = 1;
  return normal_form(e);
}

QVec ChowRing::mul(const QVec& a, const QVec& b) const {
  return mul_generic<Q>(a, b, [](const Q& q) { return q; }, Q(0));
}

QVec ChowRing::pow(const QVec& a, int k) const {
  QVec r = one();
  for (int i = 0; i < k; ++i) r = mul(r, a);
  return r;
}

QVec ChowRing::series(const QVec& a, const std::vector<Q>& coef) const {
  QVec r = zero();
  QVec p = one();
  for (size_t k = 0; k < coef.size() && static_cast<int>(k) <= n_; ++k) {
    r = add(r, scale(p, coef[k]));
    p = mul(p, a);
  }
  return r;
}

QVec ChowRing::exp(const QVec& a) const {
  std::vector<Q> c(n_ + 1);
  Q f = 1;
  for (int k = 0; k <= n_; ++k) {
    if (k > 0) f *= k;
    c[k] = 1 / f;
  }
  return series(a, c);
}

QVec ChowRing::degree_part(const QVec& a, int k) const {
  QVec r = zero();
  for (int i = 0; i < dim(); ++i)
    if (basis_deg_[i] == k) r[i] = a[i];
  return r;
}

QVec ChowRing::truncate(const QVec& a, int max_degree) const {
  QVec r = a;
  for (int i = 0; i < dim(); ++i)
    if (basis_deg_[i] > max_degree) r[i] = 0;
  return r;
}

Q ChowRing::integrate(const QVec& a) const { return a[top_] * top_value_; }

QVec ChowRing::dual(const QVec& ch) const {
  QVec r = ch;
  for (int i = 0; i < dim(); ++i)
    if (basis_deg_[i] % 2 == 1) r[i] = -r[i];
  return r;
}

QVec ChowRing::c1() const {
  QVec r = zero();
  for (int b : rays_) r = add(r, divisor(b));
  return r;
}

namespace {

// coefficients of x/(1-e^{-x}) up to x^n by inverting (1-e^{-x})/x
std::vector<Q> todd_series(int n) {
  std::vector<Q> f(n + 1);
  Q fact = 1;
  for (int k = 0; k <= n; ++k) {
    fact *= (k + 1);
    f[k] = Q((k % 2) ? -1 : 1) / fact;
  }
  std::vector<Q> g(n + 1, Q(0));
  g[0] = 1 / f[0];
  for (int k = 1; k <= n; ++k) {
    Q s = 0;
    for (int j = 1; j <= k; ++j) s += f[j] * g[k - j];
    g[k] = -s / f[0];
  }
  return g;
}

}  // namespace

QVec ChowRing::todd() const {
  auto t = todd_series(n_);
  QVec r = one();
  for (int b : rays_) r = mul(r, series(divisor(b), t));
  return r;
}

// ---------------------------------------------------------------- Gamma class

GammaData gamma_class(const ChowRing& ring) {
  const int n = ring.n();
  const int nv = std::max(1, n);  // gamma, zeta(2..n)
  auto from_q = [nv](const Q& q) { return SymPoly::constant(nv, q); };
  const SymPoly zero = SymPoly::constant(nv, 0);
  auto to_sym = [&](const QVec& v) {
    std::vector<SymPoly> r;
    for (const auto& x : v) r.push_back(from_q(x));
    return r;
  };
  auto add_sym = [](std::vector<SymPoly> a, const std::vector<SymPoly>& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] = a[i] + b[i];
    return a;
  };
  auto scale_sym = [](std::vector<SymPoly> a, const SymPoly& s) {
    for (auto& x : a) x = x * s;
    return a;
  };
  auto mul_sym = [&](const std::vector<SymPoly>& a, const std::vector<SymPoly>& b) {
    return ring.mul_generic<SymPoly>(a, b, from_q, zero);
  };
  auto exp_sym = [&](const std::vector<SymPoly>& a) {
    std::vector<SymPoly> r = to_sym(ring.one());
    std::vector<SymPoly> p = r;
    Q f = 1;
    for (int k = 1; k <= n; ++k) {
      p = mul_sym(p, a);
      f *= k;
      std::vector<SymPoly> t = p;
      for (auto& x : t) x = x.scaled(1 / f);
      r = add_sym(r, t);
    }
    return r;
  };
  GammaData g;
  // route one: exp(-gamma c1 + sum_{k>=2} (-1)^k zeta(k)/k * sum_b D_b^k)
  std::vector<SymPoly> logg = scale_sym(to_sym(ring.c1()), SymPoly::variable(nv, 0).scaled(-1));
  for (int k = 2; k <= n; ++k) {
    QVec pk = ring.zero();
    for (int b : ring.fan().rays) pk = add(pk, ring.pow(ring.divisor(b), k));
    Q c = Q((k % 2) ? -1 : 1, k);
    logg = add_sym(logg, scale_sym(to_sym(pk), SymPoly::variable(nv, k - 1).scaled(c)));
  }
  g.gamma_class = exp_sym(logg);
  // route two: product of one-variable series Gamma(1+x) = sum g_k x^k
  std::vector<SymPoly> lg(n + 1, zero);  // log Gamma(1+x) coefficients
  if (n >= 1) lg[1] = SymPoly::variable(nv, 0).scaled(-1);
  for (int k = 2; k <= n; ++k) lg[k] = SymPoly::variable(nv, k - 1).scaled(Q((k % 2) ? -1 : 1, k));
  // exp of a power series: e' = l' e  =>  k e_k = sum_j j l_j e_{k-j}
  std::vector<SymPoly> es(n + 1, zero);
  es[0] = from_q(1);
  for (int k = 1; k <= n; ++k) {
    SymPoly s = zero;
    for (int j = 1; j <= k; ++j) s = s + (lg[j] * es[k - j]).scaled(Q(j));
    es[k] = s.scaled(Q(1, k));
  }
  std::vector<SymPoly> prod = to_sym(ring.one());
  for (int b : ring.fan().rays) {
    std::vector<SymPoly> f = to_sym(ring.zero());
    QVec p = ring.one();
    for (int k = 0; k <= n; ++k) {
      f = add_sym(f, scale_sym(to_sym(p), es[k]));
      p = ring.mul(p, ring.divisor(b));
    }
    prod = mul_sym(prod, f);
  }
  g.gamma_class_by_product = prod;
  g.routes_agree = true;
  for (size_t i = 0; i < prod.size(); ++i)
    if (!(prod[i] + g.gamma_class[i].scaled(-1)).is_zero()) g.routes_agree = false;
  return g;
}

// ---------------------------------------------------------------- K-classes

KClass line_bundle(const ChowRing& ring, const std::vector<long>& a, std::string label) {
  QVec c = ring.zero();
  for (size_t b = 0; b < a.size(); ++b)
    if (a[b] != 0) c = add(c, scale(ring.divisor(static_cast<int>(b)), Q(a[b])));
  return {ring.exp(c), std::move(label)};
}

KClass structure_sheaf_of_divisor(const ChowRing& ring, const QVec& d, std::string label) {
  return {sub(ring.one(), ring.exp(scale(d, -1))), std::move(label)};
}

KClass tensor(const ChowRing& ring, const KClass& a, const KClass& b) {
  return {ring.mul(a.ch, b.ch), a.label + "*" + b.label};
}

KClass shift(const KClass& a) { return {scale(a.ch, -1), a.label + "[-1]"}; }

KClass dual(const ChowRing& ring, const KClass& a) { return {ring.dual(a.ch), a.label + "^v"}; }

KClass combine(const KClass& a, const Q& ca, const KClass& b, const Q& cb, std::string label) {
  return {add(scale(a.ch, ca), scale(b.ch, cb)), std::move(label)};
}

Q euler_pairing_hrr_exact(const ChowRing& ring, const KClass& a, const KClass& b) {
  return ring.integrate(ring.mul(ring.mul(ring.dual(a.ch), b.ch), ring.todd()));
}

Z euler_pairing_hrr(const ChowRing& ring, const KClass& a, const KClass& b) {
  Q v = euler_pairing_hrr_exact(ring, a, b);
  if (v.get_den() != 1) throw Error("NonIntegral", kMod, "HRR value " + v.get_str() + " is not an integer");
  return v.get_num();
}

QMat hrr_form(const ChowRing& ring) {
  const int d = ring.dim();
  QVec td = ring.todd();
  QMat B(d, QVec(d));
  for (int i = 0; i < d; ++i) {
    QVec ei = ring.zero();
    ei[i] = (ring.degree(i) % 2) ? -1 : 1;
    QVec t = ring.mul(ei, td);
    for (int j = 0; j < d; ++j) {
      QVec ej = ring.zero();
      ej[j] = 1;
      B[i][j] = ring.integrate(ring.mul(t, ej));
    }
  }
  return B;
}

ZMat gram_hrr(const ChowRing& ring, const std::vector<KClass>& classes) {
  QMat B = hrr_form(ring);
  ZMat G(classes.size(), ZVec(classes.size()));
  for (size_t i = 0; i < classes.size(); ++i) {
    QVec row(ring.dim(), Q(0));
    for (int a = 0; a < ring.dim(); ++a)
      for (int b = 0; b < ring.dim(); ++b) row[b] += classes[i].ch[a] * B[a][b];
    for (size_t j = 0; j < classes.size(); ++j) {
      Q v = dot(row, classes[j].ch);
      if (v.get_den() != 1) throw Error("NonIntegral", kMod, "Gram entry " + v.get_str() + " is not an integer");
      G[i][j] = v.get_num();
    }
  }
  return G;
}

std::complex<double> euler_pairing_gamma(const ChowRing& ring, const GammaData& g, const KClass& a, const KClass& b) {
  const int n = ring.n();
  const int d = ring.dim();
  const R50 pi = boost::math::constants::pi<R50>();
  const C50 I(R50(0), R50(1));
  auto from_q = [](const Q& q) { return C50(to_r50(q)); };
  const C50 czero(0);
  std::vector<C50> gam(d);
  for (int i = 0; i < d; ++i) gam[i] = C50(eval50(g.gamma_class[i]));
  auto alpha = [&](const KClass& v) {
    std::vector<C50> c(d);
    for (int i = 0; i < d; ++i) {
      C50 f = from_q(v.ch[i]);
      for (int k = 0; k < ring.degree(i); ++k) f *= C50(2) * C50(pi) * I;
      c[i] = f;
    }
    return ring.mul_generic<C50>(gam, c, from_q, czero);
  };
  auto a1 = alpha(a);
  auto a2 = alpha(b);
  // e^{-pi i c1} as a truncated exponential
  QVec c1 = ring.c1();
  std::vector<C50> x(d);
  for (int i = 0; i < d; ++i) x[i] = from_q(c1[i]) * (-I * C50(pi));
  std::vector<C50> e(d, czero), p(d, czero);
  e[0] = C50(1);
  p[0] = C50(1);
  R50 fact = 1;
  for (int k = 1; k <= n; ++k) {
    p = ring.mul_generic<C50>(p, x, from_q, czero);
    fact *= k;
    for (int i = 0; i < d; ++i) e[i] += p[i] / C50(fact);
  }
  auto beta = ring.mul_generic<C50>(e, a1, from_q, czero);
  for (int i = 0; i < d; ++i) {
    R50 mu = R50(ring.degree(i)) - R50(n) / 2;
    beta[i] *= exp(I * C50(pi * mu));
  }
  auto top = ring.mul_generic<C50>(beta, a2, from_q, czero);
  C50 v = top[ring.top_index()] * from_q(ring.top_integral());
  for (int k = 0; k < n; ++k) v /= C50(R50(2) * pi);
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

// ---------------------------------------------------------------- Orlov data

QVec pullback_divisor(const ChowRing& plus, const WallCrossing& wall, int b) {
  if (wall.kind != WallKind::ContractDivisor)
    throw Error("RankMismatch", kMod, "pull-back requires a divisorial contraction");
  int e = wall.M_minus.front();
  QVec psi = psi_map(wall.minus, wall.minus.S.bar(e));
  return add(plus.divisor(b), scale(plus.divisor(e), psi[b]));
}

QVec pullback_line_bundle_c1(const ChowRing& plus, const WallCrossing& wall, const std::vector<long>& a) {
  QVec c = plus.zero();
  for (size_t b = 0; b < a.size(); ++b)
    if (a[b] != 0) c = add(c, scale(pullback_divisor(plus, wall, static_cast<int>(b)), Q(a[b])));
  return c;
}

namespace {

std::string bundle_label(const StackyFan& fan, const std::vector<long>& a) {
  std::ostringstream os;
  os << "O(";
  bool any = false;
  for (size_t b = 0; b < a.size(); ++b) {
    if (a[b] == 0) continue;
    if (any) os << (a[b] > 0 ? "+" : "");
    if (a[b] == -1)
      os << "-";
    else if (a[b] != 1)
      os << a[b] << "*";
    os << "D[" << fan.S.labels[b] << "]";
    any = true;
  }
  if (!any) os << "0";
  os << ")";
  return os.str();
}

// Greedy choice of line bundles O(sum a_b D_b), a_b >= 0, whose Chern characters
// (optionally multiplied by a fixed class) are linearly independent.
std::vector<std::vector<long>> greedy_line_bundles(const ChowRing& ring, const QVec& cap, int target) {
  const auto& rays = ring.fan().rays;
  const int m = ring.fan().S.size();
  const int bound = ring.n();
  std::vector<std::vector<long>> cands;
  std::vector<long> a(rays.size(), 0);
  while (true) {
    std::vector<long> full(m, 0);
    for (size_t i = 0; i < rays.size(); ++i) full[rays[i]] = a[i];
    cands.push_back(full);
    size_t i = 0;
    while (i < a.size() && ++a[i] > bound) a[i++] = 0;
    if (i == a.size()) break;
  }
  auto norm = [](const std::vector<long>& v) {
    long s = 0;
    for (long x : v) s += x;
    return s;
  };
  std::stable_sort(cands.begin(), cands.end(), [&](const auto& x, const auto& y) {
    if (norm(x) != norm(y)) return norm(x) < norm(y);
    return x > y;
  });
  std::vector<std::vector<long>> chosen;
  QMat span;
  std::set<QVec> seen;
  for (const auto& c : cands) {
    QVec cls = ring.zero();
    for (int b = 0; b < m; ++b)
      if (c[b]) cls = add(cls, scale(ring.divisor(b), Q(c[b])));
    if (!seen.insert(cls).second) continue;
    QVec v = ring.mul(ring.exp(cls), cap);
    span.push_back(v);
    if (rank(span) > static_cast<int>(chosen.size()))
      chosen.push_back(c);
    else
      span.pop_back();
    if (static_cast<int>(chosen.size()) == target) break;
  }
  if (static_cast<int>(chosen.size()) != target)
    throw Error("RankMismatch", kMod, "could not find enough line bundles");
  return chosen;
}

}  // namespace

OrlovBasis orlov_basis(const ChowRing& plus, const ChowRing& minus, const WallCrossing& wall, int h) {
  if (wall.kind != WallKind::ContractDivisor && wall.kind != WallKind::Root)
    throw Error("RankMismatch", kMod, "wall is not of kind II-i or III");
  if (wall.kind == WallKind::Root) throw Error("RankMismatch", kMod, "type III walls are not smooth blow-downs");
  const long J = *wall.J;
  if (h < 0 || h > J) throw Error("RankMismatch", kMod, "h must lie in [0, J]");
  OrlovBasis ob;
  // class of the centre Z = intersection of the divisors D_b^-, b in M_+
  QVec z = minus.one();
  for (int b : wall.M_plus) z = minus.mul(z, minus.divisor(b));
  int dimZ = 0;
  for (const auto& c : wall.minus.cones)
    if (std::includes(c.begin(), c.end(), wall.M_plus.begin(), wall.M_plus.end())) ++dimZ;
  ob.kz_basis = greedy_line_bundles(minus, z, dimZ);
  ob.kx_minus_basis = greedy_line_bundles(minus, minus.one(), minus.dim());
  const int e = wall.M_minus.front();
  QVec E = plus.divisor(e);
  auto satellite = [&](long k) {
    std::vector<KClass> block;
    QVec twist = plus.exp(scale(E, Q(-k)));
    QVec oe = sub(plus.one(), plus.exp(scale(E, -1)));
    for (const auto& a : ob.kz_basis) {
      QVec ch = plus.mul(plus.mul(twist, oe), plus.exp(pullback_line_bundle_c1(plus, wall, a)));
      std::string lbl = (k == 0 ? std::string() : "O(" + std::to_string(-k) + "E)*") + "O_E*pb" + bundle_label(wall.minus, a);
      block.push_back({ch, lbl});
    }
    return block;
  };
  for (long k = -h; k <= -1; ++k) {
    auto b = satellite(k);
    ob.classes.insert(ob.classes.end(), b.begin(), b.end());
    ob.block_sizes.push_back(static_cast<int>(b.size()));
  }
  {
    int cnt = 0;
    for (const auto& a : ob.kx_minus_basis) {
      ob.classes.push_back({plus.exp(pullback_line_bundle_c1(plus, wall, a)), "pb" + bundle_label(wall.minus, a)});
      ++cnt;
    }
    ob.block_sizes.push_back(cnt);
  }
  for (long k = 0; k <= J - h - 1; ++k) {
    auto b = satellite(k);
    ob.classes.insert(ob.classes.end(), b.begin(), b.end());
    ob.block_sizes.push_back(static_cast<int>(b.size()));
  }
  if (static_cast<int>(ob.classes.size()) != plus.dim())
    throw Error("RankMismatch", kMod,
                "Orlov basis has " + std::to_string(ob.classes.size()) + " classes, expected " + std::to_string(plus.dim()));
  return ob;
}

KRelationReport verify_k_relations(const ChowRing& plus, const WallCrossing& wall) {
  KRelationReport rep;
  QVec p1 = plus.one();
  for (int b : wall.M_plus) p1 = plus.mul(p1, sub(plus.one(), plus.exp(scale(plus.divisor(b), -1))));
  rep.m_plus_relation = is_zero(p1);
  const int e = wall.M_minus.front();
  QVec E = plus.divisor(e);
  QVec p2 = plus.one();
  for (int b : wall.M_plus) {
    QVec Lk = plus.exp(scale(E, Q(-wall.k(b))));
    QVec pb = plus.exp(scale(pullback_divisor(plus, wall, b), -1));
    p2 = plus.mul(p2, sub(Lk, pb));
  }
  rep.l_relation = is_zero(p2);
  return rep;
}

SODReport verify_sod(const ChowRing& ring, const std::vector<KClass>& classes, const std::vector<int>& blocks) {
  SODReport rep;
  rep.gram = gram_hrr(ring, classes);
  const int N = static_cast<int>(classes.size());
  std::vector<int> block_of(N);
  int idx = 0;
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int k = 0; k < blocks[b]; ++k) block_of[idx++] = static_cast<int>(b);
  rep.block_upper_triangular = idx == N;
  rep.unipotent_blocks = idx == N;
  for (int i = 0; i < N && idx == N; ++i)
    for (int j = 0; j < N; ++j) {
      if (block_of[i] > block_of[j] && rep.gram[i][j] != 0) rep.block_upper_triangular = false;
      if (block_of[i] == block_of[j]) {
        if (i == j && rep.gram[i][j] != 1) rep.unipotent_blocks = false;
        if (i > j && rep.gram[i][j] != 0) rep.unipotent_blocks = false;
      }
    }
  QMat g(N, QVec(N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) g[i][j] = rep.gram[i][j];
  Q d = det(g);
  rep.det = d.get_num();
  rep.unimodular = d == 1 || d == -1;
  return rep;
}

}  // namespace tw
