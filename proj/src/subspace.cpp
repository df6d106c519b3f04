#include "genform/subspace.hpp"

// JacobiSVD everywhere: the divide and conquer kernel miscomputes singular
// vectors for complex input with highly repeated singular values, which is
// exactly the kind of spectrum these span sweeps produce

namespace gf {

template <typename Scalar>
SpanT<Scalar> SpanT<Scalar>::from_columns(const Mat& A, double rel_tol) {
  if (A.cols() == 0) return zero(int(A.rows()));
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  double cut = rel_tol * (smax > 0 ? smax : 1.0);
  int r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > cut) ++r;
  return SpanT{Mat(svd.matrixU().leftCols(r))};
}

template <typename Scalar>
bool SpanT<Scalar>::contains_space(const SpanT& other, double rel_tol) const {
  for (int j = 0; j < other.dim(); ++j)
    if (!contains(other.Q.col(j), rel_tol)) return false;
  return true;
}

template <typename Scalar>
SpanT<Scalar> span_sum(const SpanT<Scalar>& a, const SpanT<Scalar>& b) {
  typename SpanT<Scalar>::Mat M(a.ambient(), a.dim() + b.dim());
  M << a.Q, b.Q;
  return SpanT<Scalar>::from_columns(M);
}

template <typename Scalar>
SpanT<Scalar> kernel(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                     double rel_tol) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (A.rows() == 0) {  // no constraints: whole ambient space
    Mat id = Mat::Identity(A.cols(), A.cols());
    return SpanT<Scalar>{id};
  }
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  double cut = rel_tol * (smax > 0 ? smax : 1.0);
  int r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > cut) ++r;
  return SpanT<Scalar>{Mat(svd.matrixV().rightCols(A.cols() - r))};
}

template <typename Scalar>
SpanT<Scalar> span_intersect(const SpanT<Scalar>& a, const SpanT<Scalar>& b) {
  if (a.dim() == 0 || b.dim() == 0) return SpanT<Scalar>::zero(a.ambient());
  typename SpanT<Scalar>::Mat M(a.ambient(), a.dim() + b.dim());
  M << a.Q, -b.Q;
  auto null = kernel<Scalar>(M);
  typename SpanT<Scalar>::Mat vecs = a.Q * null.Q.topRows(a.dim());
  return SpanT<Scalar>::from_columns(vecs);
}

template <typename Scalar>
SpanT<Scalar> span_complement(const SpanT<Scalar>& a, const SpanT<Scalar>& b) {
  typename SpanT<Scalar>::Mat resid = a.Q - b.projector() * a.Q;
  return SpanT<Scalar>::from_columns(resid);
}

template <typename Scalar>
int numeric_rank(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
                 double rel_tol) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::JacobiSVD<Mat> svd(A);
  double smax = svd.singularValues()(0);
  double cut = rel_tol * (smax > 0 ? smax : 1.0);
  int r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > cut) ++r;
  return r;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pinv_solve(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b, double rel_tol) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(rel_tol);
  return svd.solve(b);
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> pinv(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A, double rel_tol) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  double cut = rel_tol * (smax > 0 ? smax : 1.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

template struct SpanT<double>;
template struct SpanT<cplx>;
template SpanT<double> span_sum<double>(const SpanT<double>&, const SpanT<double>&);
template SpanT<cplx> span_sum<cplx>(const SpanT<cplx>&, const SpanT<cplx>&);
template SpanT<double> span_intersect<double>(const SpanT<double>&, const SpanT<double>&);
template SpanT<cplx> span_intersect<cplx>(const SpanT<cplx>&, const SpanT<cplx>&);
template SpanT<double> span_complement<double>(const SpanT<double>&, const SpanT<double>&);
template SpanT<cplx> span_complement<cplx>(const SpanT<cplx>&, const SpanT<cplx>&);
template SpanT<double> kernel<double>(const MatrixXd&, double);
template SpanT<cplx> kernel<cplx>(const MatrixXcd&, double);
template int numeric_rank<double>(const MatrixXd&, double);
template int numeric_rank<cplx>(const MatrixXcd&, double);
template VectorXd pinv_solve<double>(const MatrixXd&, const VectorXd&, double);
template VectorXcd pinv_solve<cplx>(const MatrixXcd&, const VectorXcd&, double);
template MatrixXd pinv<double>(const MatrixXd&, double);
template MatrixXcd pinv<cplx>(const MatrixXcd&, double);

}  // namespace gf
