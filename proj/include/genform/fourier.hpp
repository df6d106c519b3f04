#pragma once
// Fourier-side machinery on the flat torus: sparse frequency maps of form
// tuples and quadratic Clifford fields, the spectral differential, field
// actions by convolution, conjugated differentials, exponential series.

#include <cstdint>
#include <map>
#include <vector>

#include "genform/clifford.hpp"
#include "genform/multivector.hpp"

namespace gf {

using Freq = std::vector<int>;  // length = basis.n, entries in [-127, 127]

uint64_t freq_key(const Freq& m);
Freq key_freq(uint64_t k, int n);
int freq_linf(const Freq& m);
Freq freq_neg(const Freq& m);
Freq freq_add(const Freq& a, const Freq& b);

struct FourierForm {
  Basis basis;
  int l = 1;          // components per coefficient tuple
  int trunc = 0;      // declared support bound, |m|_inf <= trunc
  bool real_field = false;
  std::map<uint64_t, FormTuple> coeffs;

  FourierForm() = default;
  FourierForm(const Basis& b, int l_, int trunc_) : basis(b), l(l_), trunc(trunc_) {}

  bool has(const Freq& m) const { return coeffs.count(freq_key(m)) != 0; }
  FormTuple coeff(const Freq& m) const;          // zero tuple when absent
  void add(const Freq& m, const FormTuple& t);   // accumulates, prunes tiny
  double norm() const;                           // l2 over all coefficients
  int support_linf() const;
  double reality_residual() const;               // |coeff(-m) - conj(coeff(m))|
  void prune(double tol = 1e-300);
};

// coefficients in cl2_pack order, complexified
struct FourierCL2Field {
  Basis basis;
  int trunc = 0;
  bool real_field = true;
  std::map<uint64_t, VectorXcd> coeffs;

  FourierCL2Field() = default;
  FourierCL2Field(const Basis& b, int trunc_) : basis(b), trunc(trunc_) {}

  VectorXcd coeff(const Freq& m) const;
  void add(const Freq& m, const VectorXcd& v);
  double norm() const;
  int support_linf() const;
  double reality_residual() const;
  FourierCL2Field scaled(cplx s) const;
};

// coefficients stacked as [vector part; covector part], length 2n
struct FourierCL1Field {
  Basis basis;
  int trunc = 0;
  bool real_field = true;
  std::map<uint64_t, VectorXcd> coeffs;

  FourierCL1Field() = default;
  FourierCL1Field(const Basis& b, int trunc_) : basis(b), trunc(trunc_) {}

  VectorXcd coeff(const Freq& m) const;
  void add(const Freq& m, const VectorXcd& v);
};

// quantized action matrices for every packed quadratic coordinate, shared
// by all convolution work on one basis
struct TorusContext {
  Basis basis;
  std::vector<MatrixXd> cl2_mats;   // cl2_dim matrices
  std::vector<MatrixXd> wedge_mats; // e^j wedge, j = 0..n-1

  explicit TorusContext(const Basis& b);
  // dense action matrix of one packed coefficient
  MatrixXcd assemble(const VectorXcd& packed) const;
  // action on a single tuple without assembling
  FormTuple apply_packed(const VectorXcd& packed, const FormTuple& t) const;
};

FourierForm dform(const FourierForm& w);

FourierForm act_field(const TorusContext& ctx, const FourierCL2Field& a, const FourierForm& w);
FourierForm act_field(const FourierCL1Field& E, const FourierForm& w);

FourierForm lie_derivative(const FourierCL1Field& E, const FourierForm& w);

struct BracketReport {
  FourierCL1Field G;          // recovered field with [L_E, act(F)] = act(G)
  double recovery_residual = 0.0;  // fit quality of the recovery
  double check_residual = 0.0;     // operator identity on fresh random forms
  double formula_residual = 0.0;   // against the direct bracket formula
};
BracketReport bracket_check(const FourierCL1Field& E, const FourierCL1Field& F);

// series d + [d,a] + [[d,a],a]/2 + ..., equal to e^{-a} d e^{a}
struct ConjugatedD {
  const TorusContext* ctx = nullptr;
  FourierCL2Field a;
  double term_tol = 1e-13;
  int max_terms = 64;

  FourierForm apply(const FourierForm& w, bool* non_convergent = nullptr) const;
};
ConjugatedD conjugated_d(const TorusContext& ctx, const FourierCL2Field& a);

// t-coefficients 0..K of e^{a(t)} Phi for a(t) = sum_k a_k t^k / k!,
// a[k-1] = a_k; direct multinomial assembly
std::vector<FourierForm> exp_series_apply(const TorusContext& ctx,
                                          const std::vector<FourierCL2Field>& a,
                                          const FourierForm& phi, int K);

// frequency-zero coefficient of a closed form
FormTuple period(const FourierForm& w, double closed_tol = 1e-11);

std::string to_json(const FourierCL2Field& a);
FourierCL2Field cl2_field_from_json(const std::string& text);
std::string to_json(const FourierForm& w);
FourierForm fourier_form_from_json(const std::string& text);

}  // namespace gf
