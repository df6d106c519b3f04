#pragma once
// Exterior algebra over V* with bitmask monomials: bit i of an index set
// encodes presence of e^{i+1}. Coefficients are complex doubles; real data
// simply has zero imaginary parts.

#include <Eigen/Dense>
#include <bit>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gf {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline int popcount(uint32_t m) { return std::popcount(m); }

// parity sign of moving generator `i` through the part of `mask` below it
inline double interior_sign(uint32_t mask, int i) {
  return (popcount(mask & ((1u << i) - 1u)) & 1) ? -1.0 : 1.0;
}

// sign of sorting the concatenation of two disjoint ascending index sets
inline double merge_sign(uint32_t a, uint32_t b) {
  int inv = 0;
  uint32_t bb = b;
  while (bb) {
    int j = std::countr_zero(bb);
    bb &= bb - 1;
    inv += popcount(a >> (j + 1));
  }
  return (inv & 1) ? -1.0 : 1.0;
}

struct Basis {
  int n = 0;
  MatrixXd metric;  // positive-definite on V, identity by default

  Basis() = default;
  explicit Basis(int n_) : n(n_), metric(MatrixXd::Identity(n_, n_)) {
    if (n_ < 1) throw Error("Basis: n must be positive");
  }
  Basis(int n_, MatrixXd g) : n(n_), metric(std::move(g)) {
    if (metric.rows() != n || metric.cols() != n) throw Error("Basis: bad metric shape");
  }
  int dim() const { return 1 << n; }
  bool same(const Basis& o) const { return n == o.n && metric.isApprox(o.metric); }
};

struct Multivector {
  Basis basis;
  VectorXcd c;  // length 2^n, indexed by monomial bitmask

  Multivector() = default;
  explicit Multivector(const Basis& b) : basis(b), c(VectorXcd::Zero(b.dim())) {}
  Multivector(const Basis& b, VectorXcd v) : basis(b), c(std::move(v)) {
    if (c.size() != basis.dim()) throw Error("Multivector: coefficient length mismatch");
  }

  int n() const { return basis.n; }
  cplx& operator[](uint32_t mask) { return c[mask]; }
  cplx operator[](uint32_t mask) const { return c[mask]; }
  double norm() const { return c.norm(); }
  bool is_real(double tol = 1e-12) const { return c.imag().cwiseAbs().maxCoeff() <= tol; }

  Multivector& operator+=(const Multivector& o) { c += o.c; return *this; }
  Multivector& operator-=(const Multivector& o) { c -= o.c; return *this; }
  Multivector operator+(const Multivector& o) const { return {basis, c + o.c}; }
  Multivector operator-(const Multivector& o) const { return {basis, c - o.c}; }
  Multivector operator*(cplx s) const { return {basis, VectorXcd(c * s)}; }
};

// single monomial e^{i1} ∧ ... ∧ e^{ik}, 1-based ascending indices
Multivector monomial(const Basis& b, std::vector<int> idx, cplx coef = 1.0);
Multivector scalar_mv(const Basis& b, cplx s);

Multivector wedge(const Multivector& a, const Multivector& b);
// interior product by v = sum_i vcoef[i] v_{i+1}
Multivector interior(const VectorXcd& vcoef, const Multivector& a);
Multivector hodge_star(const Multivector& a);
// pullback(g): e^i -> sum_j (g^{-1})_{ji} e^j, extended as an algebra map
Multivector pullback(const MatrixXd& g, const Multivector& a);
// algebra map sending coefficient vectors of 1-forms through `m` (complex ok)
Multivector extend_linear(const MatrixXcd& m, const Multivector& a);
Multivector grade_part(const Multivector& a, int k);
int top_grade(const Multivector& a, double tol = 1e-12);

// metric-induced pairing on forms (identity metric: Euclidean on coefficients)
cplx lambda_inner(const Multivector& a, const Multivector& b);

std::string to_json(const Multivector& a);
Multivector multivector_from_json(const std::string& text);

struct FormTuple {
  Basis basis;
  std::vector<Multivector> comps;
  bool reality = true;  // complex components read as pairs of real forms

  FormTuple() = default;
  FormTuple(const Basis& b, int l) : basis(b), comps(l, Multivector(b)) {}
  explicit FormTuple(Multivector m) : basis(m.basis) { comps.push_back(std::move(m)); }

  int l() const { return static_cast<int>(comps.size()); }
  int n() const { return basis.n; }
  double norm() const;
  bool is_real(double tol = 1e-12) const;

  // stacked complex coefficients, component-major
  VectorXcd flatten() const;
  static FormTuple unflatten(const Basis& b, int l, const VectorXcd& v);
  // split re/im view: [Re(flatten); Im(flatten)] when any component is complex,
  // otherwise just the real coefficients. Real-linear spans live here.
  VectorXd real_view() const;
  int real_view_dim() const;

  FormTuple operator+(const FormTuple& o) const;
  FormTuple operator-(const FormTuple& o) const;
  FormTuple operator*(cplx s) const;
};

std::string to_json(const FormTuple& t);
FormTuple formtuple_from_json(const std::string& text);

}  // namespace gf
