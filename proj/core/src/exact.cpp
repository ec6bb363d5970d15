#include "toricwall/exact.hpp"

#include <algorithm>
#include <sstream>

namespace tw {

QVec to_q(const ZVec& v) {
  QVec r;
  r.reserve(v.size());
  for (const auto& x : v) r.emplace_back(x);
  return r;
}

QVec to_q(const std::vector<long>& v) {
  QVec r;
  r.reserve(v.size());
  for (long x : v) r.emplace_back(x);
  return r;
}

std::vector<long> to_long(const ZVec& v) {
  std::vector<long> r;
  for (const auto& x : v) {
    if (!x.fits_slong_p()) throw Error("Overflow", "exact", "entry does not fit in long");
    r.push_back(x.get_si());
  }
  return r;
}

bool is_integral(const QVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Q& x) { return x.get_den() == 1; });
}

ZVec to_z(const QVec& v) {
  ZVec r;
  for (const auto& x : v) {
    if (x.get_den() != 1) throw Error("NonIntegral", "exact", "expected integer entry, got " + x.get_str());
    r.push_back(x.get_num());
  }
  return r;
}

Q dot(const QVec& a, const QVec& b) {
  Q s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

QVec add(const QVec& a, const QVec& b) {
  QVec r(a);
  for (size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

QVec sub(const QVec& a, const QVec& b) {
  QVec r(a);
  for (size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
  return r;
}

QVec scale(const QVec& a, const Q& s) {
  QVec r(a);
  for (auto& x : r) x *= s;
  return r;
}

bool is_zero(const QVec& a) {
  return std::all_of(a.begin(), a.end(), [](const Q& x) { return x == 0; });
}

Z lcm_denominators(const QVec& v) {
  Z l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

ZVec primitive(const QVec& v) {
  Z l = lcm_denominators(v);
  ZVec r;
  Z g = 0;
  for (const auto& x : v) {
    Q y = x * l;
    r.push_back(y.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r.back().get_mpz_t());
  }
  if (g > 1)
    for (auto& x : r) x /= g;
  return r;
}

QMat transpose(const QMat& a) {
  if (a.empty()) return {};
  QMat t(a[0].size(), QVec(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

QMat matmul(const QMat& a, const QMat& b) {
  if (a.empty()) return {};
  size_t m = b.empty() ? 0 : b[0].size();
  QMat c(a.size(), QVec(m, Q(0)));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == 0) continue;
      for (size_t j = 0; j < m; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

QVec matvec(const QMat& a, const QVec& x) {
  QVec r(a.size(), Q(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = dot(a[i], x);
  return r;
}

std::vector<int> rref(QMat& a) {
  std::vector<int> pivots;
  if (a.empty()) return pivots;
  const int rows = static_cast<int>(a.size());
  const int cols = static_cast<int>(a[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[r], a[p]);
    Q inv = 1 / a[r][c];
    for (int j = c; j < cols; ++j) a[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Q f = a[i][c];
      for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int rank(QMat a) { return static_cast<int>(rref(a).size()); }

Q det(QMat a) {
  const int n = static_cast<int>(a.size());
  Q d = 1;
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (int i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Q f = a[i][c] / a[c][c];
      for (int j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return d;
}

std::optional<QMat> inverse(const QMat& a) {
  const int n = static_cast<int>(a.size());
  QMat aug(n, QVec(2 * n, Q(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = rref(aug);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
  QMat inv(n, QVec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

std::vector<QVec> nullspace(const QMat& a, int ncols) {
  QMat r = a;
  auto piv = rref(r);
  std::vector<bool> is_piv(ncols, false);
  for (int p : piv) is_piv[p] = true;
  std::vector<QVec> basis;
  for (int f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    QVec x(ncols, Q(0));
    x[f] = 1;
    for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = -r[i][f];
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<QVec> solve(const QMat& a, const QVec& b, int ncols) {
  QMat aug = a;
  for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == ncols) return std::nullopt;
  QVec x(ncols, Q(0));
  for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug[i][ncols];
  return x;
}

namespace {

ZMat identity(int n) {
  ZMat m(n, ZVec(n, Z(0)));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

void swap_rows(ZMat& m, int i, int j) { std::swap(m[i], m[j]); }
void swap_cols(ZMat& m, int i, int j) {
  for (auto& row : m) std::swap(row[i], row[j]);
}
// row_i += f * row_j
void add_row(ZMat& m, int i, int j, const Z& f) {
  for (size_t k = 0; k < m[i].size(); ++k) m[i][k] += f * m[j][k];
}
void add_col(ZMat& m, int i, int j, const Z& f) {
  for (auto& row : m) row[i] += f * row[j];
}

}  // namespace

Smith smith(const ZMat& a0) {
  Smith s;
  const int rows = static_cast<int>(a0.size());
  const int cols = rows ? static_cast<int>(a0[0].size()) : 0;
  ZMat a = a0;
  s.u = identity(rows);
  s.v = identity(cols);
  int t = 0;
  while (t < rows && t < cols) {
    // pick the nonzero entry of minimal absolute value in the trailing block
    int pi = -1, pj = -1;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j)
        if (a[i][j] != 0 && (pi < 0 || abs(a[i][j]) < abs(a[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    swap_rows(a, t, pi);
    swap_rows(s.u, t, pi);
    swap_cols(a, t, pj);
    swap_cols(s.v, t, pj);
    bool done = false;
    while (!done) {
      done = true;
      for (int i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Z q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        add_row(a, i, t, -q);
        add_row(s.u, i, t, -q);
        if (a[i][t] != 0) {
          swap_rows(a, t, i);
          swap_rows(s.u, t, i);
          done = false;
        }
      }
      for (int j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Z q;
        mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        add_col(a, j, t, -q);
        add_col(s.v, j, t, -q);
        if (a[t][j] != 0) {
          swap_cols(a, t, j);
          swap_cols(s.v, t, j);
          done = false;
        }
      }
      if (done) {
        // enforce divisibility of the remaining block by the pivot
        for (int i = t + 1; i < rows && done; ++i)
          for (int j = t + 1; j < cols; ++j)
            if (a[i][j] % a[t][t] != 0) {
              add_row(a, t, i, Z(1));
              add_row(s.u, t, i, Z(1));
              done = false;
              break;
            }
      }
    }
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      for (auto& x : s.u[t]) x = -x;
    }
    s.diag.push_back(a[t][t]);
    ++t;
  }
  s.d = a;
  return s;
}

ZMat hermite_rows(ZMat a) {
  if (a.empty()) return a;
  const int cols = static_cast<int>(a[0].size());
  const int rows = static_cast<int>(a.size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    // Euclid on column c among rows r..end
    while (true) {
      int p = -1;
      for (int i = r; i < rows; ++i)
        if (a[i][c] != 0 && (p < 0 || abs(a[i][c]) < abs(a[p][c]))) p = i;
      if (p < 0) break;
      std::swap(a[r], a[p]);
      bool clean = true;
      for (int i = r + 1; i < rows; ++i) {
        if (a[i][c] == 0) continue;
        Z q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[r][c].get_mpz_t());
        add_row(a, i, r, -q);
        if (a[i][c] != 0) clean = false;
      }
      if (clean) break;
    }
    if (a[r][c] == 0) continue;
    if (a[r][c] < 0)
      for (auto& x : a[r]) x = -x;
    for (int i = 0; i < r; ++i) {
      Z q;
      mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[r][c].get_mpz_t());
      if (q != 0) add_row(a, i, r, -q);
    }
    ++r;
  }
  a.resize(r);
  return a;
}

ZMat integer_kernel(const ZMat& a, int ncols) {
  if (a.empty()) {
    ZMat id = identity(ncols);
    return id;
  }
  Smith s = smith(a);
  const int r = static_cast<int>(s.diag.size());
  ZMat ker;
  for (int j = r; j < ncols; ++j) {
    ZVec col(ncols);
    for (int i = 0; i < ncols; ++i) col[i] = s.v[i][j];
    ker.push_back(col);
  }
  return hermite_rows(ker);
}

QMat lattice_basis(const std::vector<QVec>& gens, int dim) {
  if (gens.empty()) return {};
  Z l = 1;
  for (const auto& g : gens) {
    Z d = lcm_denominators(g);
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
  }
  ZMat m;
  for (const auto& g : gens) {
    ZVec row(dim);
    for (int i = 0; i < dim; ++i) row[i] = Q(g[i] * l).get_num();
    m.push_back(row);
  }
  ZMat h = hermite_rows(m);
  QMat out;
  for (const auto& row : h) {
    QVec q(dim);
    for (int i = 0; i < dim; ++i) q[i] = Q(row[i], l);
    for (auto& x : q) x.canonicalize();
    out.push_back(q);
  }
  return out;
}

std::optional<QVec> coordinates(const QMat& basis, const QVec& x) {
  if (basis.empty()) {
    if (is_zero(x)) return QVec{};
    return std::nullopt;
  }
  return solve(transpose(basis), x, static_cast<int>(basis.size()));
}

std::string to_string(const Q& q) { return q.get_str(); }

std::string to_string(const QVec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << ")";
  return os.str();
}

}  // namespace tw
