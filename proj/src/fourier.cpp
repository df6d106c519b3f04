#include "genform/fourier.hpp"

#include <cmath>
#include <random>

#include "genform/spinrep.hpp"
#include "genform/subspace.hpp"
#include "json.hpp"

namespace gf {

using nlohmann::ordered_json;

namespace {
constexpr double kTau = 2.0 * M_PI;
const cplx kTauI(0.0, kTau);
}  // namespace

uint64_t freq_key(const Freq& m) {
  uint64_t k = 0;
  for (size_t j = 0; j < m.size(); ++j) {
    if (m[j] < -127 || m[j] > 127) throw Error("freq_key: component out of range");
    k |= uint64_t(uint8_t(m[j] + 128)) << (8 * j);
  }
  return k;
}

Freq key_freq(uint64_t k, int n) {
  Freq m(n);
  for (int j = 0; j < n; ++j) m[j] = int((k >> (8 * j)) & 0xff) - 128;
  return m;
}

int freq_linf(const Freq& m) {
  int v = 0;
  for (int x : m) v = std::max(v, std::abs(x));
  return v;
}

Freq freq_neg(const Freq& m) {
  Freq out(m.size());
  for (size_t j = 0; j < m.size(); ++j) out[j] = -m[j];
  return out;
}

Freq freq_add(const Freq& a, const Freq& b) {
  Freq out(a.size());
  for (size_t j = 0; j < a.size(); ++j) out[j] = a[j] + b[j];
  return out;
}

FormTuple FourierForm::coeff(const Freq& m) const {
  auto it = coeffs.find(freq_key(m));
  if (it != coeffs.end()) return it->second;
  FormTuple z(basis, l);
  z.reality = false;
  return z;
}

void FourierForm::add(const Freq& m, const FormTuple& t) {
  auto it = coeffs.find(freq_key(m));
  if (it == coeffs.end()) {
    if (t.norm() > 0) coeffs.emplace(freq_key(m), t);
  } else {
    it->second = it->second + t;
    if (it->second.norm() == 0) coeffs.erase(it);
  }
}

double FourierForm::norm() const {
  double s = 0;
  for (const auto& [k, t] : coeffs) s += t.norm() * t.norm();
  return std::sqrt(s);
}

int FourierForm::support_linf() const {
  int v = 0;
  for (const auto& [k, t] : coeffs) v = std::max(v, freq_linf(key_freq(k, basis.n)));
  return v;
}

double FourierForm::reality_residual() const {
  double worst = 0;
  for (const auto& [k, t] : coeffs) {
    FormTuple other = coeff(freq_neg(key_freq(k, basis.n)));
    double r = 0;
    for (int c = 0; c < l; ++c) r += (other.comps[c].c - t.comps[c].c.conjugate()).squaredNorm();
    worst = std::max(worst, std::sqrt(r));
  }
  return worst;
}

void FourierForm::prune(double tol) {
  for (auto it = coeffs.begin(); it != coeffs.end();)
    it = it->second.norm() <= tol ? coeffs.erase(it) : std::next(it);
}

VectorXcd FourierCL2Field::coeff(const Freq& m) const {
  auto it = coeffs.find(freq_key(m));
  return it != coeffs.end() ? it->second : VectorXcd::Zero(cl2_dim(basis.n)).eval();
}

void FourierCL2Field::add(const Freq& m, const VectorXcd& v) {
  auto it = coeffs.find(freq_key(m));
  if (it == coeffs.end()) {
    if (v.norm() > 0) coeffs.emplace(freq_key(m), v);
  } else {
    it->second += v;
    if (it->second.norm() == 0) coeffs.erase(it);
  }
}

double FourierCL2Field::norm() const {
  double s = 0;
  for (const auto& [k, v] : coeffs) s += v.squaredNorm();
  return std::sqrt(s);
}

int FourierCL2Field::support_linf() const {
  int v = 0;
  for (const auto& [k, c] : coeffs) v = std::max(v, freq_linf(key_freq(k, basis.n)));
  return v;
}

double FourierCL2Field::reality_residual() const {
  double worst = 0;
  for (const auto& [k, v] : coeffs)
    worst = std::max(worst, (coeff(freq_neg(key_freq(k, basis.n))) - v.conjugate()).norm());
  return worst;
}

FourierCL2Field FourierCL2Field::scaled(cplx s) const {
  FourierCL2Field out = *this;
  for (auto& [k, v] : out.coeffs) v *= s;
  if (s.imag() != 0.0) out.real_field = false;
  return out;
}

VectorXcd FourierCL1Field::coeff(const Freq& m) const {
  auto it = coeffs.find(freq_key(m));
  return it != coeffs.end() ? it->second : VectorXcd::Zero(2 * basis.n).eval();
}

void FourierCL1Field::add(const Freq& m, const VectorXcd& v) {
  auto it = coeffs.find(freq_key(m));
  if (it == coeffs.end()) {
    if (v.norm() > 0) coeffs.emplace(freq_key(m), v);
  } else {
    it->second += v;
  }
}

TorusContext::TorusContext(const Basis& b) : basis(b) {
  const int n = b.n;
  Basis dbl(2 * n);
  cl2_mats.reserve(cl2_dim(n));
  cl2_mats.push_back(MatrixXd::Identity(b.dim(), b.dim()));
  for (int p = 0; p < 2 * n; ++p)
    for (int q = p + 1; q < 2 * n; ++q) {
      Multivector sym(dbl);
      sym.c[(1u << p) | (1u << q)] = 1.0;
      cl2_mats.push_back(quantize(b, sym).M);
    }
  wedge_mats.reserve(n);
  for (int j = 0; j < n; ++j) wedge_mats.push_back(act_generator(b, n + j));
}

MatrixXcd TorusContext::assemble(const VectorXcd& packed) const {
  MatrixXcd M = MatrixXcd::Zero(basis.dim(), basis.dim());
  for (int k = 0; k < packed.size(); ++k)
    if (packed[k] != 0.0) M += packed[k] * cl2_mats[k];
  return M;
}

FormTuple TorusContext::apply_packed(const VectorXcd& packed, const FormTuple& t) const {
  FormTuple out(basis, t.l());
  out.reality = false;
  for (int c = 0; c < t.l(); ++c)
    for (int k = 0; k < packed.size(); ++k)
      if (packed[k] != 0.0) out.comps[c].c += packed[k] * (cl2_mats[k] * t.comps[c].c);
  return out;
}

FourierForm dform(const FourierForm& w) {
  FourierForm out(w.basis, w.l, w.trunc);
  out.real_field = w.real_field;
  for (const auto& [k, t] : w.coeffs) {
    Freq m = key_freq(k, w.basis.n);
    if (freq_linf(m) == 0) continue;
    Multivector lf(w.basis);
    for (int j = 0; j < w.basis.n; ++j)
      if (m[j] != 0) lf.c[1u << j] = kTauI * double(m[j]);
    FormTuple dt(w.basis, w.l);
    dt.reality = false;
    for (int c = 0; c < w.l; ++c) dt.comps[c] = wedge(lf, t.comps[c]);
    out.add(m, dt);
  }
  return out;
}

FourierForm act_field(const TorusContext& ctx, const FourierCL2Field& a, const FourierForm& w) {
  FourierForm out(w.basis, w.l, std::max(w.trunc, a.support_linf() + w.support_linf()));
  out.real_field = a.real_field && w.real_field;
  for (const auto& [ka, va] : a.coeffs) {
    Freq p = key_freq(ka, a.basis.n);
    MatrixXcd M = ctx.assemble(va);
    for (const auto& [kw, t] : w.coeffs) {
      FormTuple r(w.basis, w.l);
      r.reality = false;
      for (int c = 0; c < w.l; ++c) r.comps[c].c = M * t.comps[c].c;
      out.add(freq_add(p, key_freq(kw, w.basis.n)), r);
    }
  }
  return out;
}

FourierForm act_field(const FourierCL1Field& E, const FourierForm& w) {
  const int n = E.basis.n;
  FourierForm out(w.basis, w.l, w.trunc);
  out.real_field = false;
  for (const auto& [ke, ve] : E.coeffs) {
    MatrixXcd M = act_vv_c(E.basis, ve.head(n), ve.tail(n));
    for (const auto& [kw, t] : w.coeffs) {
      FormTuple r(w.basis, w.l);
      r.reality = false;
      for (int c = 0; c < w.l; ++c) r.comps[c].c = M * t.comps[c].c;
      out.add(freq_add(key_freq(ke, n), key_freq(kw, n)), r);
    }
  }
  return out;
}

FourierForm lie_derivative(const FourierCL1Field& E, const FourierForm& w) {
  FourierForm a = dform(act_field(E, w));
  FourierForm b = act_field(E, dform(w));
  for (const auto& [k, t] : b.coeffs) a.add(key_freq(k, w.basis.n), t);
  return a;
}

namespace {

// commutator operator [L_E, act(F)] applied to one form
FourierForm bracket_op(const FourierCL1Field& E, const FourierCL1Field& F,
                       const FourierForm& w) {
  FourierForm a = lie_derivative(E, act_field(F, w));
  FourierForm b = act_field(F, lie_derivative(E, w));
  for (auto& [k, t] : b.coeffs) a.add(key_freq(k, w.basis.n), t * cplx(-1.0));
  return a;
}

// matrix of G -> act_vv(G) x for a fixed form x, columns in [vector; covector] order
MatrixXcd action_columns(const Basis& b, const VectorXcd& x) {
  MatrixXcd S(b.dim(), 2 * b.n);
  for (int a = 0; a < 2 * b.n; ++a) S.col(a) = act_generator(b, a) * x;
  return S;
}

}  // namespace

BracketReport bracket_check(const FourierCL1Field& E, const FourierCL1Field& F) {
  const Basis& b = E.basis;
  const int n = b.n, D = b.dim();
  BracketReport rep;
  rep.G = FourierCL1Field(b, E.trunc + F.trunc);

  // apply the commutator to every constant monomial form and solve for the
  // field coefficients frequency by frequency
  std::map<uint64_t, MatrixXcd> rhs;  // frequency -> D x D images
  for (int mono = 0; mono < D; ++mono) {
    FourierForm w(b, 1, 0);
    FormTuple t(b, 1);
    t.comps[0].c[mono] = 1.0;
    w.add(Freq(n, 0), t);
    FourierForm y = bracket_op(E, F, w);
    for (const auto& [k, c] : y.coeffs) {
      auto [it, fresh] = rhs.try_emplace(k, MatrixXcd::Zero(D, D));
      it->second.col(mono) = c.comps[0].c;
    }
  }
  for (const auto& [k, Y] : rhs) {
    MatrixXcd S(D * D, 2 * n);
    VectorXcd y(D * D);
    for (int mono = 0; mono < D; ++mono) {
      VectorXcd e = VectorXcd::Zero(D);
      e[mono] = 1.0;
      S.middleRows(mono * D, D) = action_columns(b, e);
      y.segment(mono * D, D) = Y.col(mono);
    }
    VectorXcd g = pinv_solve<cplx>(S, y);
    rep.recovery_residual =
        std::max(rep.recovery_residual, (S * g - y).norm() / std::max(1.0, y.norm()));
    rep.G.add(key_freq(k, n), g);
  }

  // the recovered field must reproduce the operator on fresh inputs
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 5; ++t) {
    FourierForm w(b, 1, 1);
    Freq m(n, 0);
    m[t % n] = 1 - 2 * (t & 1);
    FormTuple tt(b, 1);
    for (int i = 0; i < D; ++i) tt.comps[0].c[i] = cplx(gauss(rng), gauss(rng));
    w.add(m, tt);
    FourierForm lhs = bracket_op(E, F, w);
    FourierForm rhsf = act_field(rep.G, w);
    for (auto& [k, c] : rhsf.coeffs) lhs.add(key_freq(k, n), c * cplx(-1.0));
    rep.check_residual = std::max(rep.check_residual, lhs.norm() / std::max(1.0, w.norm()));
  }

  // direct formula for the derived bracket of two fields
  FourierCL1Field formula(b, E.trunc + F.trunc);
  for (const auto& [ke, ve] : E.coeffs)
    for (const auto& [kf, vf] : F.coeffs) {
      Freq p = key_freq(ke, n), q = key_freq(kf, n);
      VectorXcd v = ve.head(n), th = ve.tail(n);
      VectorXcd wv = vf.head(n), eta = vf.tail(n);
      VectorXcd pd(n), qd(n);
      for (int j = 0; j < n; ++j) pd[j] = double(p[j]), qd[j] = double(q[j]);
      // plain bilinear sums, no conjugation
      cplx vq = (v.transpose() * qd)(0);
      cplx veta = (v.transpose() * eta)(0);
      cplx wp = (wv.transpose() * pd)(0);
      cplx wth = (wv.transpose() * th)(0);
      VectorXcd gv = kTauI * (vq * wv - wp * v);
      VectorXcd gc = kTauI * (vq * eta + veta * pd + wth * pd - wp * th);
      VectorXcd g(2 * n);
      g << gv, gc;
      formula.add(freq_add(p, q), g);
    }
  for (const auto& [k, g] : formula.coeffs)
    rep.formula_residual = std::max(rep.formula_residual, (rep.G.coeff(key_freq(k, n)) - g).norm());
  for (const auto& [k, g] : rep.G.coeffs)
    rep.formula_residual =
        std::max(rep.formula_residual, (formula.coeff(key_freq(k, n)) - g).norm());
  return rep;
}

ConjugatedD conjugated_d(const TorusContext& ctx, const FourierCL2Field& a) {
  ConjugatedD op;
  op.ctx = &ctx;
  op.a = a;
  return op;
}

FourierForm ConjugatedD::apply(const FourierForm& w, bool* non_convergent) const {
  if (non_convergent) *non_convergent = false;
  const int n = w.basis.n;
  // term_j = sum_{s<=j} (-a)^{j-s}/(j-s)! d(a^s w / s!)
  FourierForm u = w;                      // a^s w / s!
  std::vector<FourierForm> ys{dform(w)};  // ys[s] carries the (-a)^{j-s} factor
  FourierForm total = ys[0];
  double scale = std::max(1.0, total.norm());
  for (int j = 1; j <= max_terms; ++j) {
    FourierForm au = act_field(*ctx, a, u);
    u = FourierForm(w.basis, w.l, au.trunc);
    u.real_field = au.real_field;
    for (const auto& [k, t] : au.coeffs) u.add(key_freq(k, n), t * cplx(1.0 / j));
    for (int s = 0; s < j; ++s) {
      FourierForm ay = act_field(*ctx, a, ys[s]);
      ys[s] = FourierForm(w.basis, w.l, ay.trunc);
      ys[s].real_field = ay.real_field;
      for (const auto& [k, t] : ay.coeffs)
        ys[s].add(key_freq(k, n), t * cplx(-1.0 / (j - s)));
    }
    ys.push_back(dform(u));
    FourierForm term(w.basis, w.l, 0);
    for (int s = 0; s <= j; ++s)
      for (const auto& [k, t] : ys[s].coeffs) term.add(key_freq(k, n), t);
    for (const auto& [k, t] : term.coeffs) total.add(key_freq(k, n), t);
    double tn = term.norm();
    scale = std::max(scale, total.norm());
    if (tn <= term_tol * scale) return total;
    if (j == max_terms && non_convergent) *non_convergent = true;
  }
  return total;
}

std::vector<FourierForm> exp_series_apply(const TorusContext& ctx,
                                          const std::vector<FourierCL2Field>& a,
                                          const FourierForm& phi, int K) {
  const int n = phi.basis.n;
  // Z_j[k] = t^k coefficient of a(t)^j phi / j!
  std::vector<FourierForm> Z(K + 1, FourierForm(phi.basis, phi.l, phi.trunc));
  Z[0] = phi;
  std::vector<FourierForm> S = Z;
  for (int j = 1; j <= K; ++j) {
    std::vector<FourierForm> Znext(K + 1, FourierForm(phi.basis, phi.l, phi.trunc));
    bool any = false;
    for (int k = j; k <= K; ++k) {
      for (int r = 1; r <= k - (j - 1) && size_t(r) <= a.size(); ++r) {
        if (Z[k - r].coeffs.empty()) continue;
        double rf = 1.0;
        for (int i = 2; i <= r; ++i) rf *= i;
        FourierForm piece = act_field(ctx, a[r - 1], Z[k - r]);
        for (const auto& [key, t] : piece.coeffs)
          Znext[k].add(key_freq(key, n), t * cplx(1.0 / (j * rf)));
      }
      if (!Znext[k].coeffs.empty()) any = true;
      for (const auto& [key, t] : Znext[k].coeffs) S[k].add(key_freq(key, n), t);
    }
    Z.swap(Znext);
    if (!any) break;
  }
  return S;
}

FormTuple period(const FourierForm& w, double closed_tol) {
  double dn = dform(w).norm();
  if (dn > closed_tol * std::max(1.0, w.norm()))
    throw Error("period: form is not closed");
  return w.coeff(Freq(w.basis.n, 0));
}

namespace {

ordered_json freq_json(const Freq& m) {
  ordered_json a = ordered_json::array();
  for (int x : m) a.push_back(x);
  return a;
}

Freq freq_from_json(const ordered_json& a) {
  Freq m;
  for (const auto& x : a) m.push_back(x.get<int>());
  return m;
}

ordered_json vec_json(const VectorXcd& v) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back({v[i].real(), v[i].imag()});
  return a;
}

VectorXcd vec_from_json(const ordered_json& a) {
  VectorXcd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) v[i] = cplx(a[i][0].get<double>(), a[i][1].get<double>());
  return v;
}

}  // namespace

std::string to_json(const FourierCL2Field& a) {
  ordered_json coeffs = ordered_json::array();
  for (const auto& [k, v] : a.coeffs)
    coeffs.push_back({{"m", freq_json(key_freq(k, a.basis.n))}, {"values", vec_json(v)}});
  ordered_json j{{"n", a.basis.n}, {"trunc", a.trunc}, {"real", a.real_field}, {"coeffs", coeffs}};
  return j.dump();
}

FourierCL2Field cl2_field_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  FourierCL2Field a(Basis(j.at("n").get<int>()), j.at("trunc").get<int>());
  a.real_field = j.value("real", true);
  for (const auto& c : j.at("coeffs")) {
    VectorXcd v = vec_from_json(c.at("values"));
    if (v.size() != cl2_dim(a.basis.n)) throw Error("cl2 field json: bad coefficient length");
    a.add(freq_from_json(c.at("m")), v);
  }
  return a;
}

std::string to_json(const FourierForm& w) {
  ordered_json coeffs = ordered_json::array();
  for (const auto& [k, t] : w.coeffs) {
    ordered_json comps = ordered_json::array();
    for (const auto& mv : t.comps) comps.push_back(vec_json(mv.c));
    coeffs.push_back({{"m", freq_json(key_freq(k, w.basis.n))}, {"components", comps}});
  }
  ordered_json j{{"n", w.basis.n},
                 {"l", w.l},
                 {"trunc", w.trunc},
                 {"real", w.real_field},
                 {"coeffs", coeffs}};
  return j.dump();
}

FourierForm fourier_form_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  FourierForm w(Basis(j.at("n").get<int>()), j.at("l").get<int>(), j.at("trunc").get<int>());
  w.real_field = j.value("real", false);
  for (const auto& c : j.at("coeffs")) {
    const auto& comps = c.at("components");
    FormTuple t(w.basis, w.l);
    t.reality = false;
    for (int i = 0; i < w.l; ++i) {
      VectorXcd v = vec_from_json(comps[i]);
      if (v.size() != w.basis.dim()) throw Error("fourier form json: bad component length");
      t.comps[i].c = v;
    }
    w.add(freq_from_json(c.at("m")), t);
  }
  return w;
}

}  // namespace gf
