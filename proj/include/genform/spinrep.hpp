#pragma once
// Action of the Clifford algebra and of GL(V) lifts on tuples of forms.

#include "genform/clifford.hpp"

namespace gf {

Multivector act(const CliffordElement& a, const Multivector& phi);
FormTuple act(const CliffordElement& a, const FormTuple& phi);
// E = (x, y) in V + V*, possibly complex, acting as interior plus wedge
Multivector act_vv_form(const VectorXcd& x, const VectorXcd& y, const Multivector& phi);

// (det g)^{1/2} times the algebra map sending 1-form coefficients through
// g^{-T}; its derivative along e^{tA} at t = 0 is act(tau_endo(A), .)
Multivector gl_lift_action(const MatrixXd& g, const Multivector& phi);
FormTuple gl_lift_action(const MatrixXd& g, const FormTuple& phi);

Multivector b_transform(const Multivector& b, const Multivector& phi);
FormTuple b_transform(const Multivector& b, const FormTuple& phi);
// beta = skew n x n array of 2-vector coefficients, upper triangle read
Multivector beta_transform(const MatrixXd& beta, const Multivector& phi);
FormTuple beta_transform(const MatrixXd& beta, const FormTuple& phi);

}  // namespace gf
