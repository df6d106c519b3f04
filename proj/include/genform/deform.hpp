#pragma once
// Power series solver for closed deformations of a constant structure on the
// torus: obstruction extraction order by order, per-frequency Hodge solves,
// gauge-fixed preimages, independently assembled residuals, the anti-self-dual
// correction route in dimension eight, complex-type scans, and period maps.

#include <vector>

#include "genform/hodge.hpp"
#include "genform/structures.hpp"

namespace gf {

enum class DeformStatus { Ok, Obstructed, TruncationTooSmall, InternalTolerance };

struct DeformOptions {
  int order = 4;   // highest solved power of t
  int trunc = 6;   // frequency cutoff |m|_inf
  double obstruction_rel = 1e-9;
  double obstruction_abs = 1e-12;
  double closed_tol = 1e-11;    // gate on d(a1 phi)
  double preimage_tol = 1e-8;
  double residual_tol = 1e-8;   // final per-order check
  bool spin7_route = false;     // de Rham Green plus anti-self-dual correction
  int chain_depth = 3;
};

struct OrderRecord {
  int order = 0;
  double ob_norm = 0.0;           // full obstruction term
  double ob_harmonic = 0.0;       // harmonic part across frequencies
  double e2_defect = 0.0;         // containment of the term in the level span
  double preimage_residual = 0.0;
  double gauge_overlap = 0.0;     // solved coefficient against the isotropy kernel
  double correction_d_residual = 0.0;    // dim-8 route only
  double correction_asd_residual = 0.0;  // dim-8 route only
};

struct DeformationSeries {
  DeformStatus status = DeformStatus::Ok;
  int failed_order = 0;
  double failure_norm = 0.0;
  FormTuple phi;
  std::vector<FourierCL2Field> a;   // a[k-1] holds order k, a1 included
  std::vector<OrderRecord> orders;  // one entry per solved order >= 2
  std::vector<double> residuals;    // independent per-order norms, index = order
};

DeformationSeries deform(const FormTuple& phi, const FourierCL2Field& a1,
                         const DeformOptions& opt);

// per-order norms of d applied to the exponential series, assembled from the
// coefficients alone; the solver's own bookkeeping is not reused
std::vector<double> series_residuals(const TorusContext& ctx,
                                     const std::vector<FourierCL2Field>& a,
                                     const FourierForm& phi0, int K);

struct Spin7Correction {
  FourierForm alpha_minus;
  double d_residual = 0.0;    // d alpha_minus against d alpha
  double asd_residual = 0.0;  // star alpha_minus + alpha_minus
};
// coexact part minus its star image, via the scalar de Rham Green operator
Spin7Correction spin7_correction(const TorusContext& ctx, const GeneralizedMetric& gm,
                                 const FourierForm& alpha);

// frequency-zero part of a1 applied to the structure
FormTuple period_derivative(const DeformationSeries& s);

struct DdjReport {
  int trunc = 0;
  int frequencies_checked = 0;
  double split_residual = 0.0;        // d against its type-raising plus lowering parts
  double equivalence_residual = 0.0;  // worst mutual containment defect
  std::vector<int> zero_ranks;        // the three subspaces at m = 0
  bool pass = true;                   // the three subspaces agree at every frequency
};
DdjReport ddj_check(const FormTuple& phi, int trunc);

struct SlSequenceReport {
  int h1 = 0;     // middle sweep fiber at frequency zero
  int hm1 = 0;    // spinor line
  int h2bar = 0;  // second space of the graded tower
  bool match = false;
  bool bfield_invariant = false;
};
SlSequenceReport sl_sequence_check(const FormTuple& phi);

}  // namespace gf
