#include "genform/orbit.hpp"

#include <algorithm>
#include <random>

namespace gf {

namespace {

// wedge words over the doubled index set with length k, k-2, ...
std::vector<uint32_t> word_masks(int bits, int k) {
  std::vector<uint32_t> out;
  for (uint32_t m = 0; m < (1u << bits); ++m) {
    int pc = popcount(m);
    if (pc <= k && ((k - pc) & 1) == 0) out.push_back(m);
  }
  // longer words last within each sweep keeps the scalar column first
  std::stable_sort(out.begin(), out.end(),
                   [](uint32_t a, uint32_t b) { return popcount(a) < popcount(b); });
  return out;
}

// inverse of so_matrix, valid because the commutator of two quadratic
// elements has no scalar part
CL2Element cl2_from_blocks(const Basis& b, const MatrixXd& X) {
  const int n = b.n;
  CL2Element c(b);
  c.endo = X.topLeftCorner(n, n);
  c.two_vector = 0.5 * (X.topRightCorner(n, n) - X.topRightCorner(n, n).transpose());
  MatrixXd B = X.bottomLeftCorner(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c.two_form.c[(1u << i) | (1u << j)] = 0.5 * (B(i, j) - B(j, i));
  return c;
}

MatrixXcd complex_columns(const WordEvaluator& W, const std::vector<uint32_t>& masks,
                          const FormTuple& phi) {
  const int L = int(phi.comps.size()) * phi.basis.dim();
  MatrixXcd C(L, masks.size());
  for (size_t j = 0; j < masks.size(); ++j) {
    FormTuple t = W.apply(masks[j], phi);
    for (size_t c = 0; c < t.comps.size(); ++c)
      C.col(j).segment(c * phi.basis.dim(), phi.basis.dim()) = t.comps[c].c;
  }
  return C;
}

MatrixXd real_columns(const WordEvaluator& W, const std::vector<uint32_t>& masks,
                      const FormTuple& phi) {
  MatrixXd A(phi.real_view_dim(), masks.size());
  for (size_t j = 0; j < masks.size(); ++j) A.col(j) = W.apply(masks[j], phi).real_view();
  return A;
}

std::vector<int> even_grade_indices(int n) {
  std::vector<int> idx;
  for (int m = 0; m < (1 << n); ++m)
    if ((popcount(uint32_t(m)) & 1) == 0) idx.push_back(m);
  return idx;
}

}  // namespace

MatrixXd cl2_action_matrix(const FormTuple& phi) {
  const int n = phi.basis.n;
  WordEvaluator W(phi.basis);
  MatrixXd A(phi.real_view_dim(), cl2_dim(n));
  A.col(0) = phi.real_view();
  int k = 1;
  for (int p = 0; p < 2 * n; ++p)
    for (int q = p + 1; q < 2 * n; ++q, ++k)
      A.col(k) = W.apply((1u << p) | (1u << q), phi).real_view();
  return A;
}

IsotropyReport isotropy_algebra(const FormTuple& phi) {
  const int n = phi.basis.n;
  IsotropyReport rep;
  rep.ambient_dim = cl2_dim(n);
  MatrixXd A = cl2_action_matrix(phi);
  rep.basis = kernel<double>(A).Q;
  if (rep.dim() == 0) return rep;

  rep.scalar_norm = rep.basis.row(0).cwiseAbs().maxCoeff();
  std::vector<int> endo_rows, form_rows;
  int k = 1;
  for (int p = 0; p < 2 * n; ++p)
    for (int q = p + 1; q < 2 * n; ++q, ++k) {
      if (p < n && q >= n) endo_rows.push_back(k);
      else form_rows.push_back(k);
    }
  MatrixXd E(endo_rows.size(), rep.dim()), F(form_rows.size(), rep.dim());
  for (size_t r = 0; r < endo_rows.size(); ++r) E.row(r) = rep.basis.row(endo_rows[r]);
  for (size_t r = 0; r < form_rows.size(); ++r) F.row(r) = rep.basis.row(form_rows[r]);
  rep.endo_rank = numeric_rank<double>(E);
  rep.form_rank = numeric_rank<double>(F);

  // commutators of kernel elements must stay in the kernel
  Span ker{rep.basis};
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, rep.dim() - 1);
  int pairs = std::min(40, rep.dim() * (rep.dim() - 1) / 2);
  for (int t = 0; t < pairs; ++t) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    CL2Element a = cl2_unpack(phi.basis, rep.basis.col(i));
    CL2Element b = cl2_unpack(phi.basis, rep.basis.col(j));
    MatrixXd Xc = so_matrix(a) * so_matrix(b) - so_matrix(b) * so_matrix(a);
    VectorXd pc = cl2_pack(cl2_from_blocks(phi.basis, Xc));
    double scale = pc.norm() > 1.0 ? pc.norm() : 1.0;
    rep.bracket_residual = std::max(rep.bracket_residual, ker.residual(pc) / scale);
  }
  return rep;
}

FiberComplex fiber_complex(const FormTuple& phi, int depth) {
  if (depth < 0) throw Error("fiber_complex: negative depth");
  FiberComplex fc;
  fc.phi = phi;
  const int bits = 2 * phi.basis.n;
  const int L = int(phi.comps.size()) * phi.basis.dim();
  WordEvaluator W(phi.basis);
  for (int k = 0; k <= depth + 1; ++k) {
    std::vector<uint32_t> masks = word_masks(bits, k);
    MatrixXcd C = complex_columns(W, masks, phi);
    SpanC sp = SpanC::from_columns(C);
    fc.spaces.push_back(SubspaceBasis{L, sp.Q, kRankTol});
    fc.complex_dims.push_back(sp.dim());
    if (phi.reality) {
      fc.real_dims.push_back(sp.dim());
    } else {
      fc.real_dims.push_back(numeric_rank<double>(real_columns(W, masks, phi)));
    }
  }
  for (size_t i = 2; i < fc.spaces.size(); ++i) {
    SpanC big{fc.spaces[i].basis};
    for (int c = 0; c < fc.spaces[i - 2].rank(); ++c)
      fc.nesting_residual =
          std::max(fc.nesting_residual, big.residual(fc.spaces[i - 2].basis.col(c)));
  }
  return fc;
}

Lambda2Split lambda2_decompose() {
  Basis b8(8);
  Multivector phi4 = spin7_four_form(b8);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) pairs.emplace_back(i, j);
  const int P = int(pairs.size());

  MatrixXd T(P, P);
  for (int c = 0; c < P; ++c) {
    Multivector q = monomial(b8, {pairs[c].first + 1, pairs[c].second + 1});
    Multivector h = hodge_star(wedge(q, phi4));
    for (int r = 0; r < P; ++r)
      T(r, c) = h.c[(1u << pairs[r].first) | (1u << pairs[r].second)].real();
  }
  if ((T - T.transpose()).norm() > 1e-10) throw Error("lambda2: map is not symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);

  Lambda2Split out;
  MatrixXd v7(P, 0), v21(P, 0);
  double s7 = 0, s21 = 0;
  for (int i = 0; i < P; ++i) {
    double ev = es.eigenvalues()[i];
    if (std::abs(ev - 3.0) < 1e-8) {
      v7.conservativeResize(P, v7.cols() + 1);
      v7.col(v7.cols() - 1) = es.eigenvectors().col(i);
      s7 += ev;
    } else if (std::abs(ev + 1.0) < 1e-8) {
      v21.conservativeResize(P, v21.cols() + 1);
      v21.col(v21.cols() - 1) = es.eigenvectors().col(i);
      s21 += ev;
    } else {
      throw Error("lambda2: eigenvalue fails to cluster");
    }
  }
  out.seven = SubspaceBasis{P, v7.cast<cplx>(), 1e-8};
  out.twentyone = SubspaceBasis{P, v21.cast<cplx>(), 1e-8};
  out.ev_seven = v7.cols() ? s7 / v7.cols() : 0.0;
  out.ev_twentyone = v21.cols() ? s21 / v21.cols() : 0.0;

  // measure the 2-vector action against the structure form
  FormTuple Phi = make_spin7();
  WordEvaluator W(b8);
  const VectorXcd& f = Phi.comps[0].c;
  auto act_pairs = [&](const VectorXd& q, bool covariant) {
    VectorXcd v = VectorXcd::Zero(b8.dim());
    for (int c = 0; c < P; ++c) {
      if (q[c] == 0.0) continue;
      int i = pairs[c].first, j = pairs[c].second;
      uint32_t mask =
          covariant ? ((1u << (8 + i)) | (1u << (8 + j))) : ((1u << i) | (1u << j));
      v += q[c] * W.apply(mask, f);
    }
    return v;
  };
  auto pair_coords = [&](const Multivector& m) {
    VectorXd v(P);
    for (int k = 0; k < P; ++k)
      v[k] = m.c[(1u << pairs[k].first) | (1u << pairs[k].second)].real();
    return v;
  };
  // the image splits as c2 q + c6 star(q); both ratios read off in grade-2
  // coordinates after undoing the star on the 6-form part
  auto ratios = [&](const MatrixXd& block, double& c2, double& c6) {
    for (int c = 0; c < block.cols(); ++c) {
      VectorXd q = block.col(c);
      Multivector mv(b8);
      mv.c = act_pairs(q, false);
      VectorXd p2 = pair_coords(grade_part(mv, 2));
      VectorXd p6 = pair_coords(hodge_star(grade_part(mv, 6)));
      double other = (mv - grade_part(mv, 2) - grade_part(mv, 6)).norm();
      double r2 = p2.dot(q) / q.squaredNorm();
      double r6 = p6.dot(q) / q.squaredNorm();
      double dev = (p2 - r2 * q).norm() + (p6 - r6 * q).norm() + other;
      if (c == 0) {
        c2 = r2;
        c6 = r6;
      } else {
        dev += std::abs(r2 - c2) + std::abs(r6 - c6);
      }
      if (dev > 1e-8) throw Error("lambda2: 2-vector image fails to split");
    }
  };
  ratios(v7, out.dual7_c2, out.dual7_c6);
  ratios(v21, out.dual21_c2, out.dual21_c6);

  // annihilation: wedge plus signed 2-vector action on the 21-block
  double worst_plus = 0, worst_minus = 0;
  for (int c = 0; c < v21.cols(); ++c) {
    VectorXd q = v21.col(c);
    VectorXcd wv = act_pairs(q, true);
    VectorXcd bv = act_pairs(q, false);
    worst_plus = std::max(worst_plus, (wv + bv).norm());
    worst_minus = std::max(worst_minus, (wv - bv).norm());
  }
  out.annihilation_sign = worst_plus <= worst_minus ? 1.0 : -1.0;
  out.annihilation_residual = std::min(worst_plus, worst_minus);
  return out;
}

GeneralizedMetric standard_metric(const Basis& b) {
  const int n = b.n;
  GeneralizedMetric gm;
  gm.G = MatrixXd::Zero(2 * n, 2 * n);
  gm.G.topRightCorner(n, n) = MatrixXd::Identity(n, n);
  gm.G.bottomLeftCorner(n, n) = MatrixXd::Identity(n, n);
  gm.star = MatrixXd::Identity(b.dim(), b.dim());
  for (int i = 0; i < n; ++i)
    gm.star = gm.star * (act_generator(b, i) + act_generator(b, n + i));
  return gm;
}

GeneralizedMetric conjugate_metric(const GeneralizedMetric& gm, const CliffordElement& k) {
  const int n = k.n();
  MatrixXd K(2 * n, 2 * n);
  for (int a = 0; a < 2 * n; ++a) {
    VectorXd E = VectorXd::Zero(2 * n);
    E[a] = 1.0;
    auto img = ad_tilde(k, E);
    if (!img) throw Error("conjugate_metric: element does not normalize V + V*");
    K.col(a) = *img;
  }
  GeneralizedMetric out;
  out.G = K * gm.G * K.inverse();
  out.star = k.M * gm.star * k.M.inverse();
  return out;
}

MatrixXd pair_metric(const FormTuple& a, const FormTuple& b) {
  MatrixXd Ja = gcs_from_spinor(a);
  MatrixXd Jb = gcs_from_spinor(b);
  if ((Ja * Jb - Jb * Ja).norm() > 1e-8) throw Error("pair_metric: structures do not commute");
  MatrixXd G = -Ja * Jb;
  MatrixXd id = MatrixXd::Identity(G.rows(), G.cols());
  if ((G * G - id).norm() > 1e-8) throw Error("pair_metric: not an involution");
  return G;
}

AsdReport asd_even_check(const FiberComplex& fc, const GeneralizedMetric& gm) {
  const Basis& b = fc.phi.basis;
  const int D = b.dim();
  if (int(fc.phi.comps.size()) != 1) throw Error("asd_even_check: single component expected");
  AsdReport rep;

  std::vector<int> even = even_grade_indices(b.n);
  MatrixXd Se(even.size(), even.size());
  for (size_t r = 0; r < even.size(); ++r)
    for (size_t c = 0; c < even.size(); ++c) Se(r, c) = gm.star(even[r], even[c]);
  MatrixXd I = MatrixXd::Identity(Se.rows(), Se.cols());
  Span asd = kernel<double>(MatrixXd(Se + I));
  rep.dim_even_minus = asd.dim();

  SpanC e1{fc.spaces[2].basis};
  auto embed = [&](const VectorXd& v) {
    VectorXcd full = VectorXcd::Zero(D);
    for (size_t r = 0; r < even.size(); ++r) full[even[r]] = v[r];
    return full;
  };
  for (int c = 0; c < asd.dim(); ++c)
    rep.containment_residual = std::max(rep.containment_residual, e1.residual(embed(asd.Q.col(c))));

  VectorXd line = VectorXd::Zero(even.size());
  line[0] = 1.0;
  for (size_t r = 0; r < even.size(); ++r)
    if (even[r] == D - 1) line[r] = -1.0;
  rep.line_residual = e1.residual(embed(line) / line.norm());

  // trace-free symmetric actions: pure grade-4 anti-self-dual images
  WordEvaluator W(b);
  const VectorXcd& f = fc.phi.comps[0].c;
  auto endo_act = [&](const MatrixXd& A) {
    VectorXcd out = VectorXcd::Zero(D);
    for (int i = 0; i < b.n; ++i)
      for (int j = 0; j < b.n; ++j)
        if (A(i, j) != 0.0) out += A(i, j) * W.apply((1u << i) | (1u << (b.n + j)), f);
    return out;
  };
  std::vector<MatrixXd> sym;
  for (int i = 0; i < b.n; ++i)
    for (int j = i + 1; j < b.n; ++j) {
      MatrixXd A = MatrixXd::Zero(b.n, b.n);
      A(i, j) = A(j, i) = 1.0;
      sym.push_back(A);
    }
  for (int i = 0; i + 1 < b.n; ++i) {
    MatrixXd A = MatrixXd::Zero(b.n, b.n);
    A(i, i) = 1.0;
    A(i + 1, i + 1) = -1.0;
    sym.push_back(A);
  }
  MatrixXd g4cols(D, sym.size());
  for (size_t k = 0; k < sym.size(); ++k) {
    VectorXcd out = endo_act(sym[k]);
    if (out.imag().norm() > 1e-12) throw Error("asd_even_check: complex image");
    VectorXd re = out.real();
    double nrm = re.norm() > 1.0 ? re.norm() : 1.0;
    rep.sym4_asd_residual = std::max(rep.sym4_asd_residual, (gm.star * re + re).norm() / nrm);
    for (int m = 0; m < D; ++m)
      if (popcount(uint32_t(m)) != 4 && std::abs(re[m]) > 1e-12)
        throw Error("asd_even_check: image is not a 4-form");
    g4cols.col(k) = re;
  }
  rep.sym4_rank = numeric_rank<double>(MatrixXd(g4cols), 1e-8);

  // 2-form plus its negative star partner
  MatrixXd two_six(D, b.n * (b.n - 1) / 2);
  int c2 = 0;
  for (int i = 0; i < b.n; ++i)
    for (int j = i + 1; j < b.n; ++j, ++c2) {
      VectorXd q = VectorXd::Zero(D);
      q[(1u << i) | (1u << j)] = 1.0;
      VectorXd u = q - gm.star * q;
      two_six.col(c2) = u;
      rep.two_six_residual = std::max(rep.two_six_residual, e1.residual(u.cast<cplx>()) / u.norm());
    }

  MatrixXd fam(D, 1 + two_six.cols() + g4cols.cols());
  fam.col(0) = embed(line).real();
  fam.middleCols(1, two_six.cols()) = two_six;
  fam.rightCols(g4cols.cols()) = g4cols;
  rep.family_span = numeric_rank<double>(fam, 1e-8);
  return rep;
}

SymbolReport symbol_complex(const FiberComplex& fc, const VectorXd& xi) {
  const Basis& b = fc.phi.basis;
  if (xi.size() != b.n) throw Error("symbol_complex: covector length mismatch");
  if (xi.norm() == 0.0) throw Error("symbol_complex: zero covector");
  const int D = b.dim();
  MatrixXd Wx = MatrixXd::Zero(D, D);
  for (int m = 0; m < D; ++m)
    for (int i = 0; i < b.n; ++i)
      if (!(m & (1 << i)) && xi[i] != 0.0) Wx(m | (1 << i), m) += xi[i] * interior_sign(m, i);

  const int l = int(fc.phi.comps.size());
  auto apply = [&](const MatrixXcd& cols) {
    MatrixXcd out(cols.rows(), cols.cols());
    for (int c = 0; c < l; ++c)
      out.middleRows(c * D, D) = Wx * cols.middleRows(c * D, D);
    return out;
  };

  SymbolReport rep;
  rep.dims = fc.complex_dims;
  std::vector<MatrixXcd> images;
  for (size_t i = 0; i + 1 < fc.spaces.size(); ++i) {
    MatrixXcd img = apply(fc.spaces[i].basis);
    rep.ranks.push_back(numeric_rank<cplx>(img, 1e-8));
    images.push_back(img);
    SpanC next{fc.spaces[i + 1].basis};
    for (int c = 0; c < img.cols(); ++c) {
      double nrm = img.col(c).norm();
      if (nrm > 1e-12)
        rep.image_residual = std::max(rep.image_residual, next.residual(img.col(c)) / nrm);
    }
  }
  rep.all_exact = true;
  for (size_t i = 1; i + 1 < fc.spaces.size(); ++i) {
    bool ok = rep.ranks[i - 1] + rep.ranks[i] == rep.dims[i];
    rep.exact_at.push_back(ok);
    rep.all_exact = rep.all_exact && ok;
  }
  return rep;
}

CyKernelReport cy_kernel_fibers(const FormTuple& om, const FormTuple& ew) {
  const Basis& b = om.basis;
  const int nc = b.n / 2;
  CyKernelReport rep;

  MatrixXd J0 = gcs_from_spinor(om);
  MatrixXd J1 = gcs_from_spinor(ew);
  rep.commute_residual = (J0 * J1 - J1 * J0).norm();

  IsotropicData d0 = u_spaces(om);
  IsotropicData d1 = u_spaces(ew);
  for (int i = 0; i <= b.n; ++i)
    for (int j = 0; j <= b.n; ++j) {
      int dim = span_intersect<cplx>(d0.U[i], d1.U[j]).dim();
      if (dim > 0) {
        rep.upq_dims[{i - nc, j - nc}] = dim;
        rep.upq_total += dim;
      }
    }

  WordEvaluator W(b);
  for (int k = 0; k <= 2; ++k) {
    std::vector<uint32_t> masks = word_masks(2 * b.n, k + 1);
    MatrixXd A = real_columns(W, masks, om);
    Span K = kernel<double>(A);
    MatrixXcd img(b.dim(), K.dim());
    for (int c = 0; c < K.dim(); ++c) {
      VectorXcd v = VectorXcd::Zero(b.dim());
      for (size_t j = 0; j < masks.size(); ++j)
        if (K.Q(j, c) != 0.0) v += K.Q(j, c) * W.apply(masks[j], ew).comps[0].c;
      img.col(c) = v;
    }
    SpanC sp = SpanC::from_columns(img);
    rep.ker_dims.push_back(sp.dim());
    if (k == 1) {
      // first index 0, second index -n+2, both shifted by n
      SpanC target = span_intersect<cplx>(d0.U[nc], d1.U[2]);
      rep.u_0_top = target.dim();
      // the word rotating the phase of the second spinor fixes the first one
      // exactly, so the kernel carries one extra line along that spinor
      VectorXcd phase = ew.comps[0].c / ew.comps[0].c.norm();
      rep.phase_line_residual = sp.residual(phase);
      MatrixXcd aug(b.dim(), target.dim() + 1);
      aug << target.Q, phase;
      SpanC widened = SpanC::from_columns(aug);
      double r = 0;
      for (int c = 0; c < sp.dim(); ++c) r = std::max(r, widened.residual(sp.Q.col(c)));
      for (int c = 0; c < widened.dim(); ++c) r = std::max(r, sp.residual(widened.Q.col(c)));
      rep.ker1_match_residual = r;
    }
  }
  auto upq = [&](int p, int q) {
    auto it = rep.upq_dims.find({p, q});
    return it == rep.upq_dims.end() ? 0 : it->second;
  };
  rep.ker2_expected =
      upq(1, -nc + 1) + upq(-1, -nc + 1) + upq(1, -nc + 3) + upq(-1, -nc + 3);
  return rep;
}

}  // namespace gf
