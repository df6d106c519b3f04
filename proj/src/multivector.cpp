#include "genform/multivector.hpp"

#include <algorithm>

#include "json.hpp"

namespace gf {

Multivector scalar_mv(const Basis& b, cplx s) {
  Multivector m(b);
  m.c[0] = s;
  return m;
}

Multivector monomial(const Basis& b, std::vector<int> idx, cplx coef) {
  // tolerate unsorted input: count transpositions
  int swaps = 0;
  for (size_t i = 1; i < idx.size(); ++i)
    for (size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      ++swaps;
    }
  uint32_t mask = 0;
  for (int k : idx) {
    if (k < 1 || k > b.n) throw Error("monomial: index out of range");
    uint32_t bit = 1u << (k - 1);
    if (mask & bit) return Multivector(b);  // repeated index
    mask |= bit;
  }
  Multivector m(b);
  m.c[mask] = (swaps & 1) ? -coef : coef;
  return m;
}

static void check_same(const Basis& a, const Basis& b, const char* who) {
  if (!a.same(b)) throw Error(std::string(who) + ": basis mismatch");
}

Multivector wedge(const Multivector& a, const Multivector& b) {
  check_same(a.basis, b.basis, "wedge");
  const int N = a.basis.dim();
  Multivector r(a.basis);
  for (int ka = 0; ka < N; ++ka) {
    cplx ca = a.c[ka];
    if (ca == 0.0) continue;
    for (int kb = 0; kb < N; ++kb) {
      cplx cb = b.c[kb];
      if (cb == 0.0 || (ka & kb)) continue;
      r.c[ka | kb] += merge_sign(uint32_t(ka), uint32_t(kb)) * ca * cb;
    }
  }
  return r;
}

Multivector interior(const VectorXcd& vcoef, const Multivector& a) {
  if (vcoef.size() != a.basis.n) throw Error("interior: vector length mismatch");
  Multivector r(a.basis);
  const int N = a.basis.dim();
  for (int k = 0; k < N; ++k) {
    cplx ca = a.c[k];
    if (ca == 0.0) continue;
    uint32_t rem = uint32_t(k);
    while (rem) {
      int i = std::countr_zero(rem);
      rem &= rem - 1;
      if (vcoef[i] == 0.0) continue;
      r.c[k & ~(1u << i)] += interior_sign(uint32_t(k), i) * vcoef[i] * ca;
    }
  }
  return r;
}

// Gram matrix of monomials under the metric-induced pairing: for |K| = |L|
// it is the minor determinant of the inverse metric over rows K, columns L.
static double gram_entry(const MatrixXd& ginv, uint32_t K, uint32_t L) {
  int k = popcount(K);
  if (k != popcount(L)) return 0.0;
  if (k == 0) return 1.0;
  MatrixXd sub(k, k);
  int r = 0;
  for (uint32_t a = K; a; a &= a - 1, ++r) {
    int i = std::countr_zero(a);
    int c = 0;
    for (uint32_t b = L; b; b &= b - 1, ++c) sub(r, c) = ginv(i, std::countr_zero(b));
  }
  return sub.determinant();
}

Multivector hodge_star(const Multivector& a) {
  const Basis& B = a.basis;
  const int N = B.dim();
  const uint32_t top = uint32_t(N - 1);
  Multivector r(B);
  bool euclid = B.metric.isIdentity(1e-14);
  if (euclid) {
    for (int k = 0; k < N; ++k) {
      if (a.c[k] == 0.0) continue;
      uint32_t kc = top & ~uint32_t(k);
      r.c[kc] += merge_sign(uint32_t(k), kc) * a.c[k];
    }
    return r;
  }
  MatrixXd ginv = B.metric.inverse();
  double volscale = std::sqrt(B.metric.determinant());
  for (int kk = 0; kk < N; ++kk) {
    uint32_t K = uint32_t(kk), Kc = top & ~K;
    cplx acc = 0.0;
    for (int ll = 0; ll < N; ++ll)
      if (a.c[ll] != 0.0) acc += gram_entry(ginv, K, uint32_t(ll)) * a.c[ll];
    if (acc != 0.0) r.c[Kc] += merge_sign(K, Kc) * volscale * acc;
  }
  return r;
}

Multivector extend_linear(const MatrixXcd& m, const Multivector& a) {
  if (m.rows() != a.basis.n || m.cols() != a.basis.n)
    throw Error("extend_linear: matrix shape mismatch");
  const Basis& B = a.basis;
  const int N = B.dim();
  // images[K] = image of e^K under the algebra map, built up one generator
  // at a time from the image of the lowest generator in K
  std::vector<Multivector> images(N, Multivector(B));
  images[0] = scalar_mv(B, 1.0);
  std::vector<Multivector> img1(B.n, Multivector(B));
  for (int i = 0; i < B.n; ++i)
    for (int j = 0; j < B.n; ++j) img1[i].c[1u << j] = m(j, i);
  for (int k = 1; k < N; ++k) {
    int i = std::countr_zero(uint32_t(k));
    images[k] = wedge(img1[i], images[k & (k - 1)]);
  }
  Multivector r(B);
  for (int k = 0; k < N; ++k)
    if (a.c[k] != 0.0) r.c += a.c[k] * images[k].c;
  return r;
}

Multivector pullback(const MatrixXd& g, const Multivector& a) {
  Eigen::FullPivLU<MatrixXd> lu(g);
  if (!lu.isInvertible()) throw Error("pullback: singular matrix");
  return extend_linear(lu.inverse().cast<cplx>(), a);
}

Multivector grade_part(const Multivector& a, int k) {
  Multivector r(a.basis);
  for (int m = 0; m < a.basis.dim(); ++m)
    if (popcount(uint32_t(m)) == k) r.c[m] = a.c[m];
  return r;
}

int top_grade(const Multivector& a, double tol) {
  int t = 0;
  for (int m = 0; m < a.basis.dim(); ++m)
    if (std::abs(a.c[m]) > tol) t = std::max(t, popcount(uint32_t(m)));
  return t;
}

cplx lambda_inner(const Multivector& a, const Multivector& b) {
  check_same(a.basis, b.basis, "lambda_inner");
  if (a.basis.metric.isIdentity(1e-14)) return a.c.dot(b.c);
  MatrixXd ginv = a.basis.metric.inverse();
  cplx acc = 0.0;
  for (int k = 0; k < a.basis.dim(); ++k) {
    if (a.c[k] == 0.0) continue;
    for (int l = 0; l < a.basis.dim(); ++l)
      if (b.c[l] != 0.0) acc += std::conj(a.c[k]) * gram_entry(ginv, uint32_t(k), uint32_t(l)) * b.c[l];
  }
  return acc;
}

using nlohmann::ordered_json;

static ordered_json terms_to_json(const Multivector& a) {
  ordered_json terms = ordered_json::array();
  for (int k = 0; k < a.basis.dim(); ++k) {
    cplx v = a.c[k];
    if (v.real() == 0.0 && v.imag() == 0.0) continue;
    ordered_json mono = ordered_json::array();
    for (uint32_t m = uint32_t(k); m; m &= m - 1) mono.push_back(std::countr_zero(m) + 1);
    terms.push_back({{"monomial", mono}, {"re", v.real()}, {"im", v.imag()}});
  }
  return terms;
}

static void terms_from_json(const ordered_json& terms, Multivector& out) {
  for (const auto& t : terms) {
    uint32_t mask = 0;
    for (int idx : t.at("monomial").get<std::vector<int>>()) {
      if (idx < 1 || idx > out.basis.n) throw Error("terms_from_json: index out of range");
      mask |= 1u << (idx - 1);
    }
    out.c[mask] = cplx(t.at("re").get<double>(), t.at("im").get<double>());
  }
}

std::string to_json(const Multivector& a) {
  ordered_json j{{"n", a.basis.n}, {"terms", terms_to_json(a)}};
  return j.dump();
}

Multivector multivector_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  Multivector out(Basis(j.at("n").get<int>()));
  terms_from_json(j.at("terms"), out);
  return out;
}

double FormTuple::norm() const {
  double s = 0;
  for (const auto& m : comps) s += m.c.squaredNorm();
  return std::sqrt(s);
}

bool FormTuple::is_real(double tol) const {
  for (const auto& m : comps)
    if (!m.is_real(tol)) return false;
  return true;
}

VectorXcd FormTuple::flatten() const {
  const int d = basis.dim();
  VectorXcd v(l() * d);
  for (int i = 0; i < l(); ++i) v.segment(i * d, d) = comps[i].c;
  return v;
}

FormTuple FormTuple::unflatten(const Basis& b, int l, const VectorXcd& v) {
  const int d = b.dim();
  if (v.size() != l * d) throw Error("unflatten: length mismatch");
  FormTuple t(b, l);
  for (int i = 0; i < l; ++i) t.comps[i].c = v.segment(i * d, d);
  return t;
}

int FormTuple::real_view_dim() const {
  return (reality ? 1 : 2) * l() * basis.dim();
}

VectorXd FormTuple::real_view() const {
  VectorXcd f = flatten();
  if (reality) {
    if (f.imag().cwiseAbs().maxCoeff() > 1e-9)
      throw Error("real_view: tuple marked real has complex coefficients");
    return f.real();
  }
  VectorXd v(2 * f.size());
  v.head(f.size()) = f.real();
  v.tail(f.size()) = f.imag();
  return v;
}

FormTuple FormTuple::operator+(const FormTuple& o) const {
  FormTuple r = *this;
  for (int i = 0; i < l(); ++i) r.comps[i] += o.comps[i];
  return r;
}

FormTuple FormTuple::operator-(const FormTuple& o) const {
  FormTuple r = *this;
  for (int i = 0; i < l(); ++i) r.comps[i] -= o.comps[i];
  return r;
}

FormTuple FormTuple::operator*(cplx s) const {
  FormTuple r = *this;
  for (auto& m : r.comps) m.c *= s;
  return r;
}

std::string to_json(const FormTuple& t) {
  ordered_json comps = ordered_json::array();
  for (const auto& m : t.comps) comps.push_back({{"terms", terms_to_json(m)}});
  ordered_json j{{"n", t.basis.n}, {"reality", t.reality}, {"components", comps}};
  return j.dump();
}

FormTuple formtuple_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  Basis b(j.at("n").get<int>());
  const auto& comps = j.at("components");
  FormTuple t(b, int(comps.size()));
  t.reality = j.value("reality", true);
  for (size_t i = 0; i < comps.size(); ++i) terms_from_json(comps[i].at("terms"), t.comps[i]);
  return t;
}

}  // namespace gf
