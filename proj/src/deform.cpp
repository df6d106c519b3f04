#include "genform/deform.hpp"

#include <cmath>
#include <optional>

#include "genform/spinrep.hpp"

namespace gf {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// packed coordinate order: scalar word, then generator pairs
std::vector<uint32_t> packed_masks(int n) {
  std::vector<uint32_t> masks{0u};
  for (int p = 0; p < 2 * n; ++p)
    for (int q = p + 1; q < 2 * n; ++q) masks.push_back((1u << p) | (1u << q));
  return masks;
}

// columns = packed coordinate images of the structure, stacked per component
MatrixXcd preimage_matrix(const TorusContext& ctx, const FormTuple& phi) {
  const int D = phi.basis.dim(), l = phi.l();
  MatrixXcd M(l * D, int(ctx.cl2_mats.size()));
  for (size_t i = 0; i < ctx.cl2_mats.size(); ++i)
    for (int c = 0; c < l; ++c)
      M.block(c * D, int(i), D, 1) = ctx.cl2_mats[i] * phi.comps[c].c;
  return M;
}

double rel_defect(double defect, double norm) {
  return defect / std::max(norm, 1e-300);
}

}  // namespace

std::vector<double> series_residuals(const TorusContext& ctx,
                                     const std::vector<FourierCL2Field>& a,
                                     const FourierForm& phi0, int K) {
  std::vector<FourierForm> S = exp_series_apply(ctx, a, phi0, K);
  std::vector<double> out;
  out.reserve(S.size());
  for (const auto& s : S) out.push_back(dform(s).norm());
  return out;
}

Spin7Correction spin7_correction(const TorusContext& ctx, const GeneralizedMetric& gm,
                                 const FourierForm& alpha) {
  if (alpha.l != 1) throw Error("spin7_correction: single component forms only");
  const Basis& b = alpha.basis;
  const int n = b.n;
  Spin7Correction out;
  out.alpha_minus = FourierForm(b, 1, alpha.trunc);
  for (const auto& [k, t] : alpha.coeffs) {
    Freq m = key_freq(k, n);
    double m2 = 0;
    for (int x : m) m2 += double(x) * x;
    if (m2 == 0) continue;  // Green operator kills constants
    MatrixXd Sm = MatrixXd::Zero(b.dim(), b.dim());
    for (int j = 0; j < n; ++j)
      if (m[j] != 0) Sm += double(m[j]) * ctx.wedge_mats[j];
    // coexact part d* d G of the coefficient; the 2 pi factors cancel in
    // the quotient against the Laplacian eigenvalue
    VectorXcd beta = (Sm.transpose() * (Sm * t.comps[0].c).eval()).eval() / m2;
    VectorXcd am = beta - gm.star * beta;
    double asd = (gm.star * am + am).norm();
    out.asd_residual = std::max(out.asd_residual, asd);
    FormTuple r(b, 1);
    r.reality = false;
    r.comps[0].c = am;
    out.alpha_minus.add(m, r);
  }
  FourierForm lhs = dform(out.alpha_minus);
  FourierForm da = dform(alpha);
  double scale = std::max(1.0, da.norm());
  for (const auto& [k, t] : da.coeffs) lhs.add(key_freq(k, n), t * cplx(-1.0));
  out.d_residual = lhs.norm() / scale;
  return out;
}

DeformationSeries deform(const FormTuple& phi, const FourierCL2Field& a1,
                         const DeformOptions& opt) {
  DeformationSeries series;
  series.phi = phi;
  const Basis& b = phi.basis;
  if (a1.basis.n != b.n) throw Error("deform: field and structure bases differ");
  if (opt.order < 1) throw Error("deform: order must be positive");

  if (opt.order * a1.support_linf() > opt.trunc) {
    series.status = DeformStatus::TruncationTooSmall;
    series.failed_order = opt.order;
    return series;
  }

  TorusContext ctx(b);
  FourierForm phi0(b, phi.l(), 0);
  phi0.add(Freq(b.n, 0), phi);

  FourierForm a1phi = act_field(ctx, a1, phi0);
  double closed = dform(a1phi).norm();
  if (closed > opt.closed_tol * std::max(1.0, a1phi.norm()))
    throw Error("deform: d(a1 phi) fails the closedness gate");

  series.a.push_back(a1);

  MatrixXcd Mc = preimage_matrix(ctx, phi);
  MatrixXcd Mpinv = pinv<cplx>(Mc);
  SpanC gauge = kernel<cplx>(Mc);

  // the two solve routes share the preimage step; they differ in how the
  // section with d(section) = -k! Ob is produced
  std::optional<HodgePackage> hp;
  SpanC e2_span;
  GeneralizedMetric gm;
  if (opt.spin7_route) {
    FiberComplex fc = fiber_complex(phi, 2);
    e2_span = SpanC{fc.spaces[3].basis};
    gm = standard_metric(b);
  } else {
    hp.emplace(sweep_chain(fiber_complex(phi, opt.chain_depth)));
  }

  for (int k = 2; k <= opt.order; ++k) {
    std::vector<FourierForm> S = exp_series_apply(ctx, series.a, phi0, k);
    FourierForm Ob = dform(S[k]);
    OrderRecord rec;
    rec.order = k;
    rec.ob_norm = Ob.norm();
    if (Ob.support_linf() > opt.trunc) {
      series.status = DeformStatus::TruncationTooSmall;
      series.failed_order = k;
      series.orders.push_back(rec);
      break;
    }

    double kfact = 1.0;
    for (int i = 2; i <= k; ++i) kfact *= i;

    FourierCL2Field ak(b, opt.trunc);
    ak.real_field = false;
    double harm2 = 0.0;

    if (opt.spin7_route) {
      FourierForm prim(b, 1, Ob.trunc);
      for (const auto& [key, t] : Ob.coeffs) {
        Freq m = key_freq(key, b.n);
        rec.e2_defect = std::max(rec.e2_defect,
                                 rel_defect(e2_span.residual(t.flatten()), t.norm()));
        double m2 = 0;
        for (int x : m) m2 += double(x) * x;
        if (m2 == 0) {
          harm2 += t.norm() * t.norm();
          continue;
        }
        MatrixXd Sm = MatrixXd::Zero(b.dim(), b.dim());
        for (int j = 0; j < b.n; ++j)
          if (m[j] != 0) Sm += double(m[j]) * ctx.wedge_mats[j];
        // de Rham primitive -k! d* G Ob per frequency
        FormTuple p(b, 1);
        p.reality = false;
        p.comps[0].c =
            (Sm.transpose() * t.comps[0].c).eval() * (kfact / (kTwoPi * m2)) * cplx(0.0, 1.0);
        prim.add(m, p);
      }
      rec.ob_harmonic = std::sqrt(harm2);
      if (rec.ob_harmonic > opt.obstruction_rel * rec.ob_norm + opt.obstruction_abs) {
        series.status = DeformStatus::Obstructed;
        series.failed_order = k;
        series.failure_norm = rec.ob_harmonic;
        series.orders.push_back(rec);
        break;
      }
      Spin7Correction corr = spin7_correction(ctx, gm, prim);
      rec.correction_d_residual = corr.d_residual;
      rec.correction_asd_residual = corr.asd_residual;
      for (const auto& [key, t] : corr.alpha_minus.coeffs) {
        VectorXcd rhs = t.flatten();
        VectorXcd z = Mpinv * rhs;
        rec.preimage_residual = std::max(
            rec.preimage_residual, rel_defect((Mc * z - rhs).norm(), rhs.norm()));
        rec.gauge_overlap =
            std::max(rec.gauge_overlap, gauge.dim() ? (gauge.Q.adjoint() * z).norm() : 0.0);
        ak.add(key_freq(key, b.n), z);
      }
    } else {
      for (const auto& [key, t] : Ob.coeffs) {
        Freq m = key_freq(key, b.n);
        double defect = 0.0;
        VectorXcd coords = hp->to_level(3, t, &defect);
        rec.e2_defect = std::max(rec.e2_defect, rel_defect(defect, t.norm()));
        const FreqPackage& pkg = hp->at(m);
        harm2 += (pkg.harm[3] * coords).squaredNorm();
      }
      rec.ob_harmonic = std::sqrt(harm2);
      if (rec.ob_harmonic > opt.obstruction_rel * rec.ob_norm + opt.obstruction_abs) {
        series.status = DeformStatus::Obstructed;
        series.failed_order = k;
        series.failure_norm = rec.ob_harmonic;
        series.orders.push_back(rec);
        break;
      }
      for (const auto& [key, t] : Ob.coeffs) {
        Freq m = key_freq(key, b.n);
        const FreqPackage& pkg = hp->at(m);
        VectorXcd coords = hp->to_level(3, t);
        VectorXcd s2 = -kfact * (pkg.d[2].adjoint() * (pkg.green[3] * coords).eval());
        VectorXcd svec = hp->chain().levels[2] * s2;
        VectorXcd z = Mpinv * svec;
        rec.preimage_residual = std::max(
            rec.preimage_residual, rel_defect((Mc * z - svec).norm(), svec.norm()));
        rec.gauge_overlap =
            std::max(rec.gauge_overlap, gauge.dim() ? (gauge.Q.adjoint() * z).norm() : 0.0);
        ak.add(m, z);
      }
    }

    if (rec.preimage_residual > opt.preimage_tol) {
      series.status = DeformStatus::InternalTolerance;
      series.failed_order = k;
      series.failure_norm = rec.preimage_residual;
      series.orders.push_back(rec);
      break;
    }
    series.orders.push_back(rec);
    series.a.push_back(ak);
  }

  series.residuals = series_residuals(ctx, series.a, phi0, int(series.a.size()));
  if (series.status == DeformStatus::Ok) {
    for (size_t k = 0; k < series.residuals.size(); ++k)
      if (series.residuals[k] > opt.residual_tol) {
        series.status = DeformStatus::InternalTolerance;
        series.failed_order = int(k);
        series.failure_norm = series.residuals[k];
        break;
      }
  }
  return series;
}

FormTuple period_derivative(const DeformationSeries& s) {
  FormTuple out(s.phi.basis, s.phi.l());
  out.reality = false;
  if (s.a.empty()) return out;
  VectorXcd v0 = s.a.front().coeff(Freq(s.phi.basis.n, 0));
  if (v0.norm() == 0) return out;
  WordEvaluator W(s.phi.basis);
  std::vector<uint32_t> masks = packed_masks(s.phi.basis.n);
  for (size_t i = 0; i < masks.size(); ++i) {
    if (v0[int(i)] == 0.0) continue;
    FormTuple img = W.apply(masks[i], s.phi);
    for (int c = 0; c < out.l(); ++c) out.comps[c].c += v0[int(i)] * img.comps[c].c;
  }
  return out;
}

DdjReport ddj_check(const FormTuple& phi, int trunc) {
  if (phi.l() != 1) throw Error("ddj_check: single component structures only");
  const Basis& b = phi.basis;
  const int n = b.n, D = b.dim();
  DdjReport rep;
  rep.trunc = trunc;

  IsotropicData iso = u_spaces(phi);
  std::vector<MatrixXcd> P;
  for (const auto& sp : iso.U) P.push_back(sp.Q * sp.Q.adjoint());
  std::vector<MatrixXd> W;
  for (int j = 0; j < n; ++j) W.push_back(act_generator(b, n + j));

  rep.zero_ranks = {0, 0, 0};

  Freq m(n, 0);
  auto advance = [&]() {
    int j = n - 1;
    while (j >= 0 && m[j] == trunc) {
      m[j] = -trunc;
      --j;
    }
    if (j < 0) return false;
    ++m[j];
    return true;
  };
  std::fill(m.begin(), m.end(), -trunc);
  m[n - 1] -= 1;
  while (advance()) {
    int first = 0;
    while (first < n && m[first] == 0) ++first;
    if (first == n || m[first] < 0) continue;  // one representative per pair

    MatrixXcd Dm = MatrixXcd::Zero(D, D);
    for (int j = 0; j < n; ++j)
      if (m[j] != 0) Dm += cplx(0.0, kTwoPi * m[j]) * W[j];
    MatrixXcd raise = MatrixXcd::Zero(D, D), lower = MatrixXcd::Zero(D, D);
    for (size_t i = 0; i < P.size(); ++i) {
      if (i + 1 < P.size()) raise += P[i + 1] * Dm * P[i];
      if (i > 0) lower += P[i - 1] * Dm * P[i];
    }
    rep.split_residual =
        std::max(rep.split_residual, (Dm - raise - lower).norm() / Dm.norm());
    MatrixXcd DJ = cplx(0.0, 1.0) * (raise - lower);

    SpanC kerD = kernel<cplx>(Dm);
    SpanC imDJ = SpanC::from_columns(DJ);
    SpanC s1 = span_intersect(kerD, imDJ);
    SpanC imD = SpanC::from_columns(Dm);
    SpanC kerDJ = kernel<cplx>(DJ);
    SpanC s2 = span_intersect(imD, kerDJ);
    SpanC s3 = SpanC::from_columns((Dm * DJ).eval());

    if (s1.dim() != s2.dim() || s1.dim() != s3.dim()) rep.pass = false;
    const SpanC* sp[3] = {&s1, &s2, &s3};
    for (int aa = 0; aa < 3; ++aa)
      for (int bb = 0; bb < 3; ++bb) {
        if (aa == bb) continue;
        for (int c = 0; c < sp[bb]->dim(); ++c)
          rep.equivalence_residual =
              std::max(rep.equivalence_residual, sp[aa]->residual(sp[bb]->Q.col(c)));
      }
    ++rep.frequencies_checked;
  }
  if (rep.equivalence_residual > 1e-7) rep.pass = false;
  return rep;
}

SlSequenceReport sl_sequence_check(const FormTuple& phi) {
  SlSequenceReport rep;
  FiberComplex fc = fiber_complex(phi, 1);
  rep.hm1 = fc.complex_dims[0];
  rep.h1 = fc.complex_dims[2];
  rep.h2bar = u_spaces(phi).U[2].dim();
  rep.match = rep.h1 == rep.hm1 + rep.h2bar;

  // dims survive a fixed constant two-form transform
  CL2Element B(phi.basis);
  for (int i = 0; i < phi.basis.n; ++i)
    for (int j = i + 1; j < phi.basis.n; ++j)
      B.two_form.c[(1u << i) | (1u << j)] = 0.1 * (i + 1) - 0.07 * j;
  CliffordElement g = exp_cl2(B);
  FormTuple moved = phi;
  for (int c = 0; c < moved.l(); ++c) moved.comps[c].c = g.M * phi.comps[c].c;
  FiberComplex fc2 = fiber_complex(moved, 1);
  rep.bfield_invariant = fc2.complex_dims[0] == rep.hm1 && fc2.complex_dims[2] == rep.h1 &&
                         u_spaces(moved).U[2].dim() == rep.h2bar;
  return rep;
}

}  // namespace gf
