#pragma once
// Clifford algebra of V + V* with the split pairing <v+eta, w+zeta> =
// (zeta(v) + eta(w))/2, realized concretely as endomorphisms of Lambda*V*.
// Generators are indexed 0..2n-1: a < n means v_{a+1}, a >= n means e^{a-n+1}.
// Symbols (elements of Lambda*(V+V*)) are stored as Multivectors over a
// 2n-dimensional bookkeeping basis with the same index convention.

#include <optional>

#include "genform/multivector.hpp"

namespace gf {

inline int partner(int a, int n) { return a < n ? a + n : a - n; }

// pairing of generators: 1/2 exactly when {a,b} is a {v_i, e^i} pair
inline double gen_pairing(int a, int b, int n) {
  return (partner(a, n) == b) ? 0.5 : 0.0;
}

// pairing of E = (x, y), F = (x', y') with x the V part and y the V* part
double split_pairing(const VectorXd& E, const VectorXd& F);

// action of generator a on a basis form: returns false when it annihilates,
// otherwise rewrites mask and multiplies sign
bool gen_step(int a, int n, uint32_t& mask, double& sign);

MatrixXd act_generator(const Basis& b, int a);
// action of x_i v_i + y_j e^j as a matrix on Lambda*V*
MatrixXd act_vv(const Basis& b, const VectorXd& x, const VectorXd& y);
MatrixXcd act_vv_c(const Basis& b, const VectorXcd& x, const VectorXcd& y);

struct CliffordElement {
  Basis basis;
  MatrixXd M;  // spin matrix, 2^n x 2^n
  std::optional<Multivector> symbol;  // over the 2n bookkeeping basis

  CliffordElement() = default;
  CliffordElement(const Basis& b, MatrixXd m) : basis(b), M(std::move(m)) {}
  int n() const { return basis.n; }
};

CliffordElement cl_identity(const Basis& b, double s = 1.0);
CliffordElement cl_from_vv(const Basis& b, const VectorXd& E);  // E length 2n

CliffordElement clifford_product(const CliffordElement& a, const CliffordElement& b);
CliffordElement involution_tilde(const CliffordElement& a);
CliffordElement reversal_sigma(const CliffordElement& a);

// parity operator and the intertwiner used to realize sigma as C M^T C^{-1}
MatrixXd parity_matrix(const Basis& b);
MatrixXd sigma_intertwiner(const Basis& b);

struct Norm2Result {
  CliffordElement full;
  bool is_scalar = false;
  double scalar = 0.0;
};
Norm2Result clifford_norm2(const CliffordElement& g, double tol = 1e-10);

// quantization: symbol in Lambda*(V+V*) -> endomorphism. Inverse recovers
// the symbol from the matrix alone and works at every supported n.
CliffordElement quantize(const Basis& b, const Multivector& symbol);
Multivector dequantize(const Basis& b, const MatrixXd& M);
Multivector ensure_symbol(const CliffordElement& a);

int filtration_degree(const CliffordElement& a, double tol = 1e-10);

struct CL2Element {
  Basis basis;
  double scalar = 0.0;
  MatrixXd endo;        // n x n, acts on V
  Multivector two_form;  // grade 2 over V*
  MatrixXd two_vector;  // skew n x n, beta = sum_{i<j} beta_ij v_i ^ v_j

  CL2Element() = default;
  explicit CL2Element(const Basis& b)
      : basis(b),
        endo(MatrixXd::Zero(b.n, b.n)),
        two_form(b),
        two_vector(MatrixXd::Zero(b.n, b.n)) {}
};

int cl2_dim(int n);  // 1 + C(2n, 2)
Multivector cl2_symbol(const CL2Element& a);
CL2Element cl2_from_symbol(const Basis& b, const Multivector& symbol, double tol = 1e-10);
CliffordElement quantize_cl2(const CL2Element& a);
CL2Element cl2_from_clifford(const CliffordElement& a, double tol = 1e-10);
// coefficients in the ordered basis [1] then Q(g_a g_b), a < b lexicographic
VectorXd cl2_pack(const CL2Element& a);
CL2Element cl2_unpack(const Basis& b, const VectorXd& coeffs);
std::string to_json(const CL2Element& a);
CL2Element cl2_from_json(const std::string& text);

CliffordElement exp_cl2(const CL2Element& a);

// embedding of A in End(V) as the degree-2 element whose bracket action on
// V+V* is A on V and -A^T on V*; computed by solving the linear system
CliffordElement tau_endo(const MatrixXd& A);
// closed form Q(sum_ij A_ij v_i ^ e^j), used as an independent cross-check
CliffordElement tau_closed_form(const MatrixXd& A);
// general pairing-skew X on V+V* lifted to the degree-2 element with
// bracket action X; scalar-free minimum-norm solution
CL2Element cl2_from_so(const Basis& b, const MatrixXd& X);

// block matrix of the bracket action a: E -> [a, E] on V + V*
MatrixXd so_matrix(const CL2Element& a);

// applies a quantized wedge word to a form without assembling the matrix;
// caches the generator matrices for bulk column sweeps
struct WordEvaluator {
  Basis basis;
  std::vector<MatrixXd> gens;

  explicit WordEvaluator(const Basis& b);
  VectorXcd apply(uint32_t mask, const VectorXcd& x) const;
  FormTuple apply(uint32_t mask, const FormTuple& phi) const;
};

// twisted adjoint: tilde(g)^{-1} E g, reported in V+V* coordinates when the
// result lies there; nullopt otherwise
std::optional<VectorXd> ad_tilde(const CliffordElement& g, const VectorXd& E,
                                 double rel_tol = 1e-9);
// same conjugation returned as a raw endomorphism of the spinor space
MatrixXd ad_tilde_matrix(const CliffordElement& g, const VectorXd& E);

struct Membership {
  bool invertible = false;
  bool cpin = false;
  bool pin = false;
  bool spin = false;
  bool spin0 = false;
};
Membership group_membership(const CliffordElement& g, double tol = 1e-9);

}  // namespace gf
