#pragma once
// Fiberwise analysis at a point: stabilizer algebras inside the quadratic
// Clifford slice, the filtration of form spaces swept out by Clifford words,
// self-duality splittings in dimension eight, and symbol exactness of the
// induced complexes.

#include <map>
#include <vector>

#include "genform/clifford.hpp"
#include "genform/structures.hpp"
#include "genform/subspace.hpp"

namespace gf {

struct SubspaceBasis {
  int ambient_dim = 0;
  MatrixXcd basis;  // orthonormal columns
  double tol = kRankTol;

  int rank() const { return int(basis.cols()); }
};

// real-linear action of packed degree <= 2 coordinates on the split view
MatrixXd cl2_action_matrix(const FormTuple& phi);

struct IsotropyReport {
  int ambient_dim = 0;   // packed coordinate count
  MatrixXd basis;        // orthonormal kernel basis in packed coordinates
  double scalar_norm = 0.0;
  int endo_rank = 0;
  int form_rank = 0;          // rank of the combined 2-form / 2-vector block
  double bracket_residual = 0.0;  // worst commutator membership defect

  int dim() const { return int(basis.cols()); }
};
IsotropyReport isotropy_algebra(const FormTuple& phi);

struct FiberComplex {
  FormTuple phi;
  std::vector<SubspaceBasis> spaces;  // index i holds the words-of-degree-(i) sweep
  std::vector<int> complex_dims;
  std::vector<int> real_dims;
  double nesting_residual = 0.0;
};
// spaces run from the span of phi itself (index 0) up to words of length depth+1
FiberComplex fiber_complex(const FormTuple& phi, int depth);

struct Lambda2Split {
  SubspaceBasis seven, twentyone;  // eigenspaces of p -> star(p ^ phi4)
  double ev_seven = 0.0, ev_twentyone = 0.0;
  // measured constants of the 2-vector action: grade-2 and grade-6 ratios
  double dual7_c2 = 0.0, dual7_c6 = 0.0;
  double dual21_c2 = 0.0, dual21_c6 = 0.0;
  double annihilation_sign = 0.0;  // s with (q + s q#) killing the structure
  double annihilation_residual = 0.0;
};
Lambda2Split lambda2_decompose();

struct GeneralizedMetric {
  MatrixXd G;     // involution on V + V*
  MatrixXd star;  // induced involution on forms
};
// flat block-swap metric and the product-of-generators star operator
GeneralizedMetric standard_metric(const Basis& b);
GeneralizedMetric conjugate_metric(const GeneralizedMetric& gm, const CliffordElement& k);
// common involution of a commuting spinor pair
MatrixXd pair_metric(const FormTuple& a, const FormTuple& b);

struct AsdReport {
  int dim_even_minus = 0;
  double containment_residual = 0.0;  // anti-self-dual evens inside the length-2 sweep
  double line_residual = 0.0;         // the scaling direction 1 - vol
  int sym4_rank = 0;                  // trace-free symmetric actions landing in ASD 4-forms
  double sym4_asd_residual = 0.0;
  double two_six_residual = 0.0;      // q - *q family
  int family_span = 0;                // combined rank of the three families
};
AsdReport asd_even_check(const FiberComplex& fc, const GeneralizedMetric& gm);

struct SymbolReport {
  std::vector<int> dims;        // complex dims per space
  std::vector<int> ranks;       // rank of wedge-by-xi out of each space
  std::vector<bool> exact_at;   // inner spaces only
  double image_residual = 0.0;  // wedge image containment in the next space
  bool all_exact = false;
};
SymbolReport symbol_complex(const FiberComplex& fc, const VectorXd& xi);

struct CyKernelReport {
  double commute_residual = 0.0;
  std::map<std::pair<int, int>, int> upq_dims;  // complex dims keyed by (p, q)
  int upq_total = 0;
  std::vector<int> ker_dims;  // complex dims of the projection kernels, degrees 0..2
  int u_0_top = 0;            // dim U^{0,-n+2}
  int ker2_expected = 0;      // four-summand total
  // degree one kernel equals U^{0,-n+2} plus the phase line of the second
  // spinor; the residuals below pin both statements
  double ker1_match_residual = 0.0;
  double phase_line_residual = 0.0;
};
CyKernelReport cy_kernel_fibers(const FormTuple& om, const FormTuple& ew);

}  // namespace gf
