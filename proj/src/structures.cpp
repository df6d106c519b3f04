#include "genform/structures.hpp"

#include "genform/spinrep.hpp"
#include "json.hpp"

namespace gf {

MatrixXd pairing_gram(int n) {
  MatrixXd P = MatrixXd::Zero(2 * n, 2 * n);
  P.topRightCorner(n, n) = 0.5 * MatrixXd::Identity(n, n);
  P.bottomLeftCorner(n, n) = 0.5 * MatrixXd::Identity(n, n);
  return P;
}

FormTuple make_sl(int n) {
  if (n < 1) throw Error("make_sl: n must be positive");
  Basis b(2 * n);
  Multivector omega = scalar_mv(b, 1.0);
  for (int k = 1; k <= n; ++k) {
    Multivector theta = monomial(b, {2 * k - 1}) + monomial(b, {2 * k}) * cplx(0.0, 1.0);
    omega = wedge(omega, theta);
  }
  FormTuple t(omega);
  t.reality = false;
  return t;
}

Multivector standard_symplectic(const Basis& b) {
  if (b.n % 2) throw Error("standard_symplectic: even dimension required");
  Multivector w(b);
  for (int k = 1; 2 * k <= b.n; ++k) w += monomial(b, {2 * k - 1, 2 * k});
  return w;
}

std::pair<FormTuple, FormTuple> make_cy(int n) {
  FormTuple Omega = make_sl(n);
  Basis b = Omega.basis;
  Multivector iw = standard_symplectic(b) * cplx(0.0, 1.0);
  FormTuple expo(b_transform(iw, scalar_mv(b, 1.0)));
  expo.reality = false;
  return {Omega, expo};
}

std::vector<FormTuple> make_hk(int m) {
  if (m < 1) throw Error("make_hk: m must be positive");
  Basis b(4 * m);
  Multivector wI(b), wJ(b), wK(b);
  for (int k = 0; k < m; ++k) {
    int o = 4 * k;
    wI += monomial(b, {o + 1, o + 2}) + monomial(b, {o + 3, o + 4});
    wJ += monomial(b, {o + 1, o + 3}) - monomial(b, {o + 2, o + 4});
    wK += monomial(b, {o + 1, o + 4}) + monomial(b, {o + 2, o + 3});
  }
  std::vector<FormTuple> triple;
  for (const Multivector* w : {&wI, &wJ, &wK}) {
    FormTuple t(b_transform(*w * cplx(0.0, 1.0), scalar_mv(b, 1.0)));
    t.reality = false;
    triple.push_back(std::move(t));
  }
  return triple;
}

namespace {

// unit octonion products: idx 0 is the real unit, 1..7 the imaginary units
struct OctTable {
  int idx[8][8];
  double sign[8][8];
  OctTable() {
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        idx[i][j] = 0;
        sign[i][j] = 0.0;
      }
    for (int i = 0; i < 8; ++i) {
      idx[0][i] = i;
      sign[0][i] = 1.0;
      idx[i][0] = i;
      sign[i][0] = 1.0;
    }
    for (int i = 1; i <= 7; ++i) {
      idx[i][i] = 0;
      sign[i][i] = -1.0;
    }
    auto wrap = [](int k) { return (k - 1) % 7 + 1; };
    for (int i = 1; i <= 7; ++i) {
      int line[3] = {i, wrap(i + 1), wrap(i + 3)};
      for (int r = 0; r < 3; ++r) {
        int a = line[r], bb = line[(r + 1) % 3], c = line[(r + 2) % 3];
        idx[a][bb] = c;
        sign[a][bb] = 1.0;
        idx[bb][a] = c;
        sign[bb][a] = -1.0;
      }
    }
  }
};

const OctTable& oct_table() {
  static OctTable t;
  return t;
}

Multivector shift_up(const Multivector& a7, const Basis& b8) {
  // embed the 7 dimensional basis as indices 2..8
  Multivector r(b8);
  for (int m = 0; m < a7.basis.dim(); ++m) r.c[uint32_t(m) << 1] = a7.c[m];
  return r;
}

}  // namespace

VectorXd octonion_mul(const VectorXd& x, const VectorXd& y) {
  if (x.size() != 8 || y.size() != 8) throw Error("octonion_mul: 8-vectors required");
  const OctTable& t = oct_table();
  VectorXd r = VectorXd::Zero(8);
  for (int i = 0; i < 8; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < 8; ++j)
      if (y[j] != 0.0) r[t.idx[i][j]] += t.sign[i][j] * x[i] * y[j];
  }
  return r;
}

Multivector g2_three_form(const Basis& b7) {
  if (b7.n != 7) throw Error("g2_three_form: dimension 7 required");
  const OctTable& t = oct_table();
  Multivector phi(b7);
  // phi(e_i, e_j, e_k) = <e_i e_j, e_k>; visit each line at its sorted triple
  for (int i = 1; i <= 7; ++i)
    for (int j = i + 1; j <= 7; ++j) {
      int k = t.idx[i][j];
      if (k > j) phi += monomial(b7, {i, j, k}, t.sign[i][j]);
    }
  return phi;
}

FormTuple make_g2() {
  Basis b(7);
  Multivector phi = g2_three_form(b);
  Multivector psi = hodge_star(phi);
  Multivector vol7 = monomial(b, {1, 2, 3, 4, 5, 6, 7});
  FormTuple t(b, 2);
  t.comps[0] = vol7 - phi;
  t.comps[1] = scalar_mv(b, 1.0) - psi;
  return t;
}

Multivector spin7_four_form(const Basis& b8) {
  if (b8.n != 8) throw Error("spin7_four_form: dimension 8 required");
  Basis b7(7);
  Multivector phi7 = g2_three_form(b7);
  Multivector psi7 = hodge_star(phi7);
  // overall sign fixed so q -> star(q ^ Phi) has eigenvalue +3 on the
  // seven dimensional block of two forms
  return (wedge(monomial(b8, {1}), shift_up(phi7, b8)) + shift_up(psi7, b8)) * cplx(-1.0);
}

FormTuple make_spin7() {
  Basis b(8);
  Multivector Phi = scalar_mv(b, 1.0) - spin7_four_form(b) + monomial(b, {1, 2, 3, 4, 5, 6, 7, 8});
  return FormTuple(Phi);
}

IsotropicData annihilator(const FormTuple& phi) {
  const Basis& b = phi.basis;
  const int N = b.n, D = b.dim(), l = phi.l();
  MatrixXcd A(l * D, 2 * N);
  for (int a = 0; a < 2 * N; ++a) {
    MatrixXd G = act_generator(b, a);
    for (int c = 0; c < l; ++c) A.block(c * D, a, D, 1) = G * phi.comps[c].c;
  }
  IsotropicData data;
  data.L = kernel<cplx>(A);
  if (data.L.dim() != N)
    throw Error("annihilator: degenerate spinor, dimension " + std::to_string(data.L.dim()) +
                " instead of " + std::to_string(N));
  MatrixXcd P = pairing_gram(N).cast<cplx>();
  double iso = (data.L.Q.transpose() * P * data.L.Q).norm();
  if (iso > 1e-8) throw Error("annihilator: kernel not isotropic");
  data.Lbar = SpanC{data.L.Q.conjugate()};
  return data;
}

IsotropicData u_spaces(const FormTuple& phi) {
  if (phi.l() != 1) throw Error("u_spaces: single-component spinor expected");
  IsotropicData data = annihilator(phi);
  const Basis& b = phi.basis;
  const int N = b.n;
  std::vector<MatrixXcd> actF;
  for (int k = 0; k < N; ++k) {
    VectorXcd f = data.Lbar.Q.col(k);
    actF.push_back(act_vv_c(b, f.head(N), f.tail(N)));
  }
  data.U.clear();
  MatrixXcd cur(b.dim(), 1);
  cur.col(0) = phi.comps[0].c / phi.comps[0].norm();
  data.U.push_back(SpanC::from_columns(cur));
  for (int i = 1; i <= N; ++i) {
    const SpanC& prev = data.U.back();
    MatrixXcd cols(b.dim(), N * prev.dim());
    for (int k = 0; k < N; ++k)
      cols.middleCols(k * prev.dim(), prev.dim()) = actF[k] * prev.Q;
    data.U.push_back(SpanC::from_columns(cols));
  }
  return data;
}

MatrixXd gcs_from_spinor(const FormTuple& phi) {
  IsotropicData data = annihilator(phi);
  const int N = phi.basis.n;
  if (span_intersect<cplx>(data.L, data.Lbar).dim() != 0)
    throw Error("gcs_from_spinor: degenerate spinor, annihilator meets its conjugate");
  MatrixXcd S(2 * N, 2 * N);
  S.leftCols(N) = data.Lbar.Q;
  S.rightCols(N) = data.L.Q;
  VectorXcd d(2 * N);
  for (int k = 0; k < N; ++k) {
    d[k] = cplx(0.0, 1.0);
    d[N + k] = cplx(0.0, -1.0);
  }
  MatrixXcd Jc = S * d.asDiagonal() * S.inverse();
  if (Jc.imag().norm() > 1e-8 * Jc.norm())
    throw Error("gcs_from_spinor: eigenspace data not conjugate-symmetric");
  MatrixXd J = Jc.real();
  if ((J * J + MatrixXd::Identity(2 * N, 2 * N)).norm() > 1e-8)
    throw Error("gcs_from_spinor: square is not minus identity");
  return J;
}

CyReport cy_check(const FormTuple& Omega, const Multivector& omega) {
  const Basis& b = omega.basis;
  if (Omega.l() != 1 || !Omega.basis.same(b)) throw Error("cy_check: incompatible inputs");
  const Multivector& Om = Omega.comps[0];
  const int N = b.n;
  if (N % 2) throw Error("cy_check: even dimension required");
  const int n = N / 2;
  CyReport rep;
  rep.wedge_residual = wedge(Om, omega).norm();
  Multivector conjOm(b, Om.c.conjugate());
  Multivector lhs = wedge(Om, conjOm);
  Multivector wn = scalar_mv(b, 1.0);
  for (int k = 0; k < n; ++k) wn = wedge(wn, omega);
  cplx topw = wn.c[b.dim() - 1];
  rep.top_nonzero = std::abs(topw) > 1e-12;
  if (rep.top_nonzero) {
    rep.c = lhs.c[b.dim() - 1] / topw;
    rep.proportionality_residual = (lhs - wn * rep.c).norm();
  } else {
    rep.proportionality_residual = lhs.norm();
  }
  // complex structure from the kernel of contraction into Omega
  MatrixXcd B(b.dim(), N);
  for (int i = 0; i < N; ++i) {
    VectorXcd vi = VectorXcd::Zero(N);
    vi[i] = 1.0;
    B.col(i) = interior(vi, Om).c;
  }
  SpanC K = kernel<cplx>(B);
  if (K.dim() != n) throw Error("cy_check: kernel of the volume form has wrong dimension");
  MatrixXcd S(N, N);
  S.leftCols(n) = K.Q;
  S.rightCols(n) = K.Q.conjugate();
  VectorXcd d(N);
  for (int k = 0; k < n; ++k) {
    d[k] = cplx(0.0, 1.0);
    d[n + k] = cplx(0.0, -1.0);
  }
  MatrixXd J = (S * d.asDiagonal() * S.inverse()).real();
  MatrixXd W = MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      double w = omega.c[(1u << i) | (1u << j)].real();
      W(i, j) = w;
      W(j, i) = -w;
    }
  rep.metric = J.transpose() * W;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (rep.metric + rep.metric.transpose()));
  double asym = (rep.metric - rep.metric.transpose()).norm();
  rep.positive = asym < 1e-8 && es.eigenvalues().minCoeff() > 1e-10;
  return rep;
}

HkReport hk_relations(const std::vector<FormTuple>& triple) {
  if (triple.size() != 3) throw Error("hk_relations: three spinors expected");
  MatrixXd I1 = gcs_from_spinor(triple[0]);
  MatrixXd J1 = gcs_from_spinor(triple[1]);
  MatrixXd K1 = gcs_from_spinor(triple[2]);
  MatrixXd I0 = J1 * K1, J0 = K1 * I1, K0 = I1 * J1;
  const int D = int(I1.rows());
  MatrixXd id = MatrixXd::Identity(D, D);
  HkReport rep;
  rep.quaternion_residual = std::max({(I0 * I0 + id).norm(), (J0 * J0 + id).norm(),
                                      (K0 * K0 + id).norm(), (I0 * J0 * K0 + id).norm()});
  MatrixXd prods[6] = {I0 * I1, I1 * I0, J0 * J1, J1 * J0, K0 * K1, K1 * K0};
  rep.G = -prods[0];
  double worst = 0.0;
  for (int k = 1; k < 6; ++k) worst = std::max(worst, (prods[k] - prods[0]).norm());
  rep.common_g_residual = worst;
  rep.g_square_residual = (rep.G * rep.G - id).norm();
  MatrixXd P = pairing_gram(D / 2);
  rep.g_orthogonal_residual = (rep.G.transpose() * P * rep.G - P).norm();
  return rep;
}

std::string to_json(const StructureSpec& s) {
  using nlohmann::ordered_json;
  ordered_json tr = ordered_json::array();
  for (const auto& a : s.transforms) tr.push_back(ordered_json::parse(to_json(a)));
  ordered_json j{{"kind", s.kind}, {"n", s.n}, {"transforms", tr}};
  return j.dump();
}

StructureSpec structure_from_json(const std::string& text) {
  using nlohmann::ordered_json;
  ordered_json j = ordered_json::parse(text);
  StructureSpec s;
  s.kind = j.at("kind").get<std::string>();
  // the exceptional kinds live in one fixed dimension, n is optional there
  int dflt = s.kind == "g2" ? 7 : s.kind == "spin7" ? 8 : 0;
  s.n = j.value("n", dflt);
  if (s.n <= 0) throw Error("structure_from_json: missing n for kind " + s.kind);
  if (j.contains("transforms"))
    for (const auto& t : j.at("transforms")) s.transforms.push_back(cl2_from_json(t.dump()));
  return s;
}

BuiltStructure build_structure(const StructureSpec& spec) {
  BuiltStructure out;
  out.spec = spec;
  if (spec.kind == "sl") {
    out.tuples.push_back(make_sl(spec.n));
  } else if (spec.kind == "cy") {
    auto [Om, ew] = make_cy(spec.n);
    out.tuples.push_back(Om);
    out.tuples.push_back(ew);
  } else if (spec.kind == "hk") {
    out.tuples = make_hk(spec.n);
  } else if (spec.kind == "g2") {
    out.tuples.push_back(make_g2());
  } else if (spec.kind == "spin7") {
    out.tuples.push_back(make_spin7());
  } else {
    throw Error("build_structure: unknown kind " + spec.kind);
  }
  out.basis = out.tuples[0].basis;
  for (const auto& a : spec.transforms) {
    if (a.basis.n != out.basis.n) throw Error("build_structure: transform dimension mismatch");
    CliffordElement g = exp_cl2(a);
    for (auto& t : out.tuples) t = act(g, t);
  }
  return out;
}

}  // namespace gf
