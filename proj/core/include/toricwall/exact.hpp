#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tw {

using Q = mpq_class;
using Z = mpz_class;
using QVec = std::vector<Q>;
using ZVec = std::vector<Z>;
using QMat = std::vector<QVec>;  // row-major
using ZMat = std::vector<ZVec>;

// Every failure raised by the library carries the error name used in reports
// and the module it came from.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, std::string module, const std::string& detail)
      : std::runtime_error(kind + " [" + module + "]: " + detail),
        kind_(std::move(kind)),
        module_(std::move(module)) {}
  const std::string& kind() const { return kind_; }
  const std::string& module() const { return module_; }

 private:
  std::string kind_;
  std::string module_;
};

QVec to_q(const ZVec& v);
QVec to_q(const std::vector<long>& v);
std::vector<long> to_long(const ZVec& v);
bool is_integral(const QVec& v);
ZVec to_z(const QVec& v);  // requires integral entries

Q dot(const QVec& a, const QVec& b);
QVec add(const QVec& a, const QVec& b);
QVec sub(const QVec& a, const QVec& b);
QVec scale(const QVec& a, const Q& s);
bool is_zero(const QVec& a);

// Smallest positive integer multiple of v with integer entries and gcd 1.
ZVec primitive(const QVec& v);
Z lcm_denominators(const QVec& v);

QMat transpose(const QMat& a);
QMat matmul(const QMat& a, const QMat& b);
QVec matvec(const QMat& a, const QVec& x);

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(QMat& a);
int rank(QMat a);
Q det(QMat a);
std::optional<QMat> inverse(const QMat& a);
// Basis of {x : a x = 0}; ncols is needed when a has no rows.
std::vector<QVec> nullspace(const QMat& a, int ncols);
// Some solution of a x = b, if any.
std::optional<QVec> solve(const QMat& a, const QVec& b, int ncols);

// Smith normal form: u * a * v = d with u, v unimodular.
struct Smith {
  ZMat u, v, d;
  std::vector<Z> diag;  // nonzero invariant factors, in order
};
Smith smith(const ZMat& a);

// Integer kernel basis of an integer matrix (rows of the result), reduced to
// row Hermite normal form.
ZMat integer_kernel(const ZMat& a, int ncols);
// Row Hermite normal form of the lattice spanned by the rows; zero rows dropped.
ZMat hermite_rows(ZMat a);
// Z-basis (rows) of the group generated by rational vectors.
QMat lattice_basis(const std::vector<QVec>& gens, int dim);
// Coordinates of x in the Z-span of basis rows, if x lies in the rational span.
std::optional<QVec> coordinates(const QMat& basis, const QVec& x);

std::string to_string(const QVec& v);
std::string to_string(const Q& q);

}  // namespace tw
