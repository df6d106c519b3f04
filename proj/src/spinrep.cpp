#include "genform/spinrep.hpp"

namespace gf {

Multivector act(const CliffordElement& a, const Multivector& phi) {
  if (!a.basis.same(phi.basis)) throw Error("act: basis mismatch");
  return Multivector(phi.basis, a.M * phi.c);
}

FormTuple act(const CliffordElement& a, const FormTuple& phi) {
  if (!a.basis.same(phi.basis)) throw Error("act: basis mismatch");
  FormTuple r = phi;
  for (auto& m : r.comps) m.c = a.M * m.c;
  return r;
}

Multivector act_vv_form(const VectorXcd& x, const VectorXcd& y, const Multivector& phi) {
  Multivector w(phi.basis);
  for (int j = 0; j < phi.basis.n; ++j) w.c[1u << j] = y[j];
  return interior(x, phi) + wedge(w, phi);
}

Multivector gl_lift_action(const MatrixXd& g, const Multivector& phi) {
  double det = g.determinant();
  if (det <= 0.0) throw Error("gl_lift_action: determinant must be positive");
  MatrixXcd m = g.inverse().transpose().cast<cplx>();
  return extend_linear(m, phi) * std::sqrt(det);
}

FormTuple gl_lift_action(const MatrixXd& g, const FormTuple& phi) {
  FormTuple r = phi;
  for (auto& m : r.comps) m = gl_lift_action(g, m);
  return r;
}

Multivector b_transform(const Multivector& b, const Multivector& phi) {
  if (!b.basis.same(phi.basis)) throw Error("b_transform: basis mismatch");
  Multivector r = phi, term = phi;
  for (int k = 1; 2 * k <= b.basis.n; ++k) {
    term = wedge(b, term) * (1.0 / k);
    if (term.norm() == 0.0) break;
    r += term;
  }
  return r;
}

FormTuple b_transform(const Multivector& b, const FormTuple& phi) {
  FormTuple r = phi;
  for (auto& m : r.comps) m = b_transform(b, m);
  return r;
}

Multivector beta_transform(const MatrixXd& beta, const Multivector& phi) {
  const int n = phi.basis.n;
  if (beta.rows() != n || beta.cols() != n) throw Error("beta_transform: shape mismatch");
  auto apply = [&](const Multivector& f) {
    Multivector out(f.basis);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (beta(i, j) == 0.0) continue;
        VectorXcd vi = VectorXcd::Zero(n), vj = VectorXcd::Zero(n);
        vi[i] = 1.0;
        vj[j] = 1.0;
        out += interior(vi, interior(vj, f)) * beta(i, j);
      }
    return out;
  };
  Multivector r = phi, term = phi;
  for (int k = 1; 2 * k <= n; ++k) {
    term = apply(term) * (1.0 / k);
    if (term.norm() == 0.0) break;
    r += term;
  }
  return r;
}

FormTuple beta_transform(const MatrixXd& beta, const FormTuple& phi) {
  FormTuple r = phi;
  for (auto& m : r.comps) m = beta_transform(beta, m);
  return r;
}

}  // namespace gf
