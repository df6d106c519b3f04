#pragma once
// Numeric subspace arithmetic: orthonormal span bases, kernels, projectors,
// intersections. Rank decisions use a relative singular-value cutoff.

#include <Eigen/Dense>

#include "genform/multivector.hpp"

namespace gf {

constexpr double kRankTol = 1e-9;

template <typename Scalar>
struct SpanT {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Mat Q;  // orthonormal columns spanning the space (ambient_dim x dim)

  int dim() const { return int(Q.cols()); }
  int ambient() const { return int(Q.rows()); }

  static SpanT from_columns(const Mat& A, double rel_tol = kRankTol);
  static SpanT zero(int ambient) { return SpanT{Mat(ambient, 0)}; }

  Vec project(const Vec& v) const { return Q * (Q.adjoint() * v).eval(); }
  Mat projector() const { return Q * Q.adjoint(); }
  double residual(const Vec& v) const { return (v - project(v)).norm(); }
  bool contains(const Vec& v, double rel_tol = kRankTol) const {
    double nv = v.norm();
    return residual(v) <= rel_tol * (nv > 1.0 ? nv : 1.0);
  }
  bool contains_space(const SpanT& other, double rel_tol = kRankTol) const;
};

using Span = SpanT<double>;
using SpanC = SpanT<cplx>;

template <typename Scalar>
SpanT<Scalar> span_sum(const SpanT<Scalar>& a, const SpanT<Scalar>& b);
template <typename Scalar>
SpanT<Scalar> span_intersect(const SpanT<Scalar>& a, const SpanT<Scalar>& b);
// orthogonal complement of b inside a
template <typename Scalar>
SpanT<Scalar> span_complement(const SpanT<Scalar>& a, const SpanT<Scalar>& b);

// orthonormal basis of the null space of A
template <typename Scalar>
SpanT<Scalar> kernel(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                     double rel_tol = kRankTol);

template <typename Scalar>
int numeric_rank(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                 double rel_tol = kRankTol);

// minimum-norm least-squares solution of A x = b
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pinv_solve(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b, double rel_tol = kRankTol);

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pinv(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A, double rel_tol = kRankTol);

}  // namespace gf
