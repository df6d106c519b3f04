#pragma once
// Model structures: complex volume spinors, symplectic exponentials,
// hyperKahler triples, octonion-derived forms in dimensions 7 and 8; the
// annihilator space of a spinor, the graded U-tower, and the induced
// generalized complex structure.

#include <string>
#include <vector>

#include "genform/clifford.hpp"
#include "genform/subspace.hpp"

namespace gf {

// 2n x 2n matrix of the split pairing in generator coordinates
MatrixXd pairing_gram(int n);

struct IsotropicData {
  SpanC L;      // annihilator inside complexified V + V*
  SpanC Lbar;   // its conjugate
  std::vector<SpanC> U;  // U[i] = wedge^i(Lbar) applied to phi, i = 0..dim V
};

FormTuple make_sl(int n);                       // complex volume form, dim V = 2n
std::pair<FormTuple, FormTuple> make_cy(int n);  // (Omega, exp(i omega))
Multivector standard_symplectic(const Basis& b);
std::vector<FormTuple> make_hk(int m);          // three spinors, dim V = 4m
FormTuple make_g2();                            // pair over dim 7
FormTuple make_spin7();                         // single even form over dim 8
Multivector g2_three_form(const Basis& b7);
Multivector spin7_four_form(const Basis& b8);

VectorXd octonion_mul(const VectorXd& x, const VectorXd& y);

IsotropicData annihilator(const FormTuple& phi);
IsotropicData u_spaces(const FormTuple& phi);
MatrixXd gcs_from_spinor(const FormTuple& phi);

struct CyReport {
  double wedge_residual = 0.0;      // |Omega ^ omega|
  cplx c = 0.0;                     // measured constant in Omega ^ bar Omega = c omega^n
  double proportionality_residual = 0.0;
  bool top_nonzero = false;
  bool positive = false;            // g(u, v) = omega(Ju, v) positive definite
  MatrixXd metric;
  bool ok(double tol) const {
    return wedge_residual <= tol && proportionality_residual <= tol && top_nonzero && positive;
  }
};
CyReport cy_check(const FormTuple& Omega, const Multivector& omega);

struct HkReport {
  double quaternion_residual = 0.0;   // squares and triple product against -1
  double common_g_residual = 0.0;     // all six pairings give one G
  double g_square_residual = 0.0;     // G^2 = 1
  double g_orthogonal_residual = 0.0; // G preserves the pairing
  MatrixXd G;
  double max_residual() const {
    return std::max(std::max(quaternion_residual, common_g_residual),
                    std::max(g_square_residual, g_orthogonal_residual));
  }
};
HkReport hk_relations(const std::vector<FormTuple>& triple);

struct StructureSpec {
  std::string kind;  // "sl", "cy", "hk", "g2", "spin7"
  int n = 0;
  std::vector<CL2Element> transforms;
};
std::string to_json(const StructureSpec& s);
StructureSpec structure_from_json(const std::string& text);

struct BuiltStructure {
  StructureSpec spec;
  Basis basis;
  std::vector<FormTuple> tuples;
};
BuiltStructure build_structure(const StructureSpec& spec);

}  // namespace gf
