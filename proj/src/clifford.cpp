#include "genform/clifford.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <map>
#include <vector>

#include "genform/subspace.hpp"
#include "json.hpp"

namespace gf {

double split_pairing(const VectorXd& E, const VectorXd& F) {
  int n2 = int(E.size());
  if (F.size() != n2 || (n2 & 1)) throw Error("split_pairing: bad lengths");
  int n = n2 / 2;
  return 0.5 * (E.head(n).dot(F.tail(n)) + E.tail(n).dot(F.head(n)));
}

bool gen_step(int a, int n, uint32_t& mask, double& sign) {
  if (a < n) {  // interior by v_{a+1}
    uint32_t bit = 1u << a;
    if (!(mask & bit)) return false;
    sign *= interior_sign(mask, a);
    mask &= ~bit;
    return true;
  }
  int j = a - n;  // wedge by e^{j+1}
  uint32_t bit = 1u << j;
  if (mask & bit) return false;
  sign *= interior_sign(mask, j);
  mask |= bit;
  return true;
}

MatrixXd act_generator(const Basis& b, int a) {
  const int N = b.dim();
  MatrixXd M = MatrixXd::Zero(N, N);
  for (uint32_t K = 0; K < uint32_t(N); ++K) {
    uint32_t m = K;
    double s = 1.0;
    if (gen_step(a, b.n, m, s)) M(m, K) = s;
  }
  return M;
}

MatrixXd act_vv(const Basis& b, const VectorXd& x, const VectorXd& y) {
  const int N = b.dim();
  MatrixXd M = MatrixXd::Zero(N, N);
  for (uint32_t K = 0; K < uint32_t(N); ++K) {
    for (int i = 0; i < b.n; ++i) {
      uint32_t bit = 1u << i;
      if ((K & bit) && x[i] != 0.0) M(K & ~bit, K) += x[i] * interior_sign(K, i);
      if (!(K & bit) && y[i] != 0.0) M(K | bit, K) += y[i] * interior_sign(K, i);
    }
  }
  return M;
}

MatrixXcd act_vv_c(const Basis& b, const VectorXcd& x, const VectorXcd& y) {
  const int N = b.dim();
  MatrixXcd M = MatrixXcd::Zero(N, N);
  for (uint32_t K = 0; K < uint32_t(N); ++K) {
    for (int i = 0; i < b.n; ++i) {
      uint32_t bit = 1u << i;
      if ((K & bit) && x[i] != 0.0) M(K & ~bit, K) += x[i] * interior_sign(K, i);
      if (!(K & bit) && y[i] != 0.0) M(K | bit, K) += y[i] * interior_sign(K, i);
    }
  }
  return M;
}

CliffordElement cl_identity(const Basis& b, double s) {
  CliffordElement e(b, MatrixXd::Identity(b.dim(), b.dim()) * s);
  Multivector sym(Basis(2 * b.n));
  sym.c[0] = s;
  e.symbol = sym;
  return e;
}

CliffordElement cl_from_vv(const Basis& b, const VectorXd& E) {
  if (E.size() != 2 * b.n) throw Error("cl_from_vv: length mismatch");
  CliffordElement e(b, act_vv(b, E.head(b.n), E.tail(b.n)));
  Multivector sym(Basis(2 * b.n));
  for (int a = 0; a < 2 * b.n; ++a) sym.c[1u << a] = E[a];
  e.symbol = sym;
  return e;
}

CliffordElement clifford_product(const CliffordElement& a, const CliffordElement& b) {
  if (!a.basis.same(b.basis)) throw Error("clifford_product: basis mismatch");
  return CliffordElement(a.basis, a.M * b.M);
}

MatrixXd parity_matrix(const Basis& b) {
  VectorXd d(b.dim());
  for (int K = 0; K < b.dim(); ++K) d[K] = (popcount(uint32_t(K)) & 1) ? -1.0 : 1.0;
  return d.asDiagonal();
}

CliffordElement involution_tilde(const CliffordElement& a) {
  MatrixXd P = parity_matrix(a.basis);
  CliffordElement r(a.basis, P * a.M * P);
  return r;
}

// Transposing a spin matrix swaps the roles of v_i and e^i; composing with
// the complement permutation below undoes the swap, so C M^T C^T fixes every
// generator and reverses products. The sign is forced by the two-sided
// intertwining relations and solves s(L + i) = (-1)^i s(L).
MatrixXd sigma_intertwiner(const Basis& b) {
  const int N = b.dim();
  const uint32_t top = uint32_t(N - 1);
  MatrixXd C = MatrixXd::Zero(N, N);
  for (uint32_t L = 0; L < uint32_t(N); ++L) {
    int s = 0;
    for (uint32_t m = L; m; m &= m - 1) s += std::countr_zero(m);
    C(top & ~L, L) = (s & 1) ? -1.0 : 1.0;
  }
  return C;
}

CliffordElement reversal_sigma(const CliffordElement& a) {
  MatrixXd C = sigma_intertwiner(a.basis);
  return CliffordElement(a.basis, C * a.M.transpose() * C.transpose());
}

Norm2Result clifford_norm2(const CliffordElement& g, double tol) {
  Norm2Result r;
  r.full = clifford_product(reversal_sigma(g), g);
  const MatrixXd& M = r.full.M;
  double s = M.trace() / M.rows();
  double resid = (M - s * MatrixXd::Identity(M.rows(), M.cols())).norm();
  double scale = M.norm() > 1.0 ? M.norm() : 1.0;
  r.is_scalar = resid <= tol * scale;
  r.scalar = s;
  return r;
}

namespace {

// quantized wedge monomial as a spin matrix, Chevalley recursion
const MatrixXd& quantized_monomial(const Basis& b, uint32_t mask,
                                   std::map<uint32_t, MatrixXd>& memo) {
  auto it = memo.find(mask);
  if (it != memo.end()) return it->second;
  MatrixXd result;
  if (mask == 0) {
    result = MatrixXd::Identity(b.dim(), b.dim());
  } else {
    int a = std::countr_zero(mask);
    uint32_t rest = mask & (mask - 1);
    result = act_generator(b, a) * quantized_monomial(b, rest, memo);
    int p = partner(a, b.n);
    uint32_t pbit = 1u << p;
    if (rest & pbit) {
      double s = (popcount(rest & (pbit - 1)) & 1) ? -1.0 : 1.0;
      result -= 0.5 * s * quantized_monomial(b, rest & ~pbit, memo);
    }
  }
  return memo.emplace(mask, std::move(result)).first->second;
}

// normal-ordered word (creators for B then annihilators for A, each block in
// ascending index order) applied to a basis form; false when annihilated
bool normal_word_step(int n, uint32_t A, uint32_t B, uint32_t& mask, double& sign) {
  // rightmost factor acts first: annihilators descending, then creators descending
  for (uint32_t m = A; m;) {
    int hi = 31 - std::countl_zero(m);
    m &= ~(1u << hi);
    if (!gen_step(hi, n, mask, sign)) return false;
  }
  for (uint32_t m = B; m;) {
    int hi = 31 - std::countl_zero(m);
    m &= ~(1u << hi);
    if (!gen_step(hi + n, n, mask, sign)) return false;
  }
  return true;
}

using NormalDict = std::map<uint32_t, double>;  // key = (B << n) | A

void normal_add(NormalDict& d, uint32_t key, double c) {
  if (c == 0.0) return;
  auto [it, fresh] = d.emplace(key, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0.0) d.erase(it);
  }
}

// left-multiply a normal-ordered combination by one generator
NormalDict normal_leftmul(int g, int n, const NormalDict& d) {
  NormalDict out;
  const uint32_t nmask = (1u << n) - 1;
  for (const auto& [key, c] : d) {
    uint32_t A = key & nmask, B = key >> n;
    if (g >= n) {  // creator
      int j = g - n;
      uint32_t bit = 1u << j;
      if (B & bit) continue;
      double u = (popcount(B & (bit - 1)) & 1) ? -1.0 : 1.0;
      normal_add(out, (uint32_t(B | bit) << n) | A, c * u);
    } else {  // annihilator
      int j = g;
      uint32_t bit = 1u << j;
      double pb = (popcount(B) & 1) ? -1.0 : 1.0;
      double w = (popcount(A & (bit - 1)) & 1) ? -1.0 : 1.0;
      if (B & bit) {
        double u = (popcount(B & (bit - 1)) & 1) ? -1.0 : 1.0;
        normal_add(out, (uint32_t(B & ~bit) << n) | A, c * u);
        if (!(A & bit)) normal_add(out, (B << n) | (A | bit), c * pb * w);
      } else if (!(A & bit)) {
        normal_add(out, (B << n) | (A | bit), c * pb * w);
      }
    }
  }
  return out;
}

// quantized wedge monomial in normal-ordered coordinates
const NormalDict& quantized_normal(int n, uint32_t mask, std::map<uint32_t, NormalDict>& memo) {
  auto it = memo.find(mask);
  if (it != memo.end()) return it->second;
  NormalDict result;
  if (mask == 0) {
    result[0] = 1.0;
  } else {
    int a = std::countr_zero(mask);
    uint32_t rest = mask & (mask - 1);
    result = normal_leftmul(a, n, quantized_normal(n, rest, memo));
    int p = partner(a, n);
    uint32_t pbit = 1u << p;
    if (rest & pbit) {
      double s = (popcount(rest & (pbit - 1)) & 1) ? -1.0 : 1.0;
      for (const auto& [key, c] : quantized_normal(n, rest & ~pbit, memo))
        normal_add(result, key, -0.5 * s * c);
    }
  }
  return memo.emplace(mask, std::move(result)).first->second;
}

}  // namespace

CliffordElement quantize(const Basis& b, const Multivector& symbol) {
  if (symbol.basis.n != 2 * b.n) throw Error("quantize: symbol must live over 2n generators");
  if (!symbol.is_real(1e-12)) throw Error("quantize: complex symbol unsupported");
  std::map<uint32_t, MatrixXd> memo;
  MatrixXd M = MatrixXd::Zero(b.dim(), b.dim());
  for (int mask = 0; mask < symbol.basis.dim(); ++mask) {
    double c = symbol.c[mask].real();
    if (c != 0.0) M += c * quantized_monomial(b, uint32_t(mask), memo);
  }
  CliffordElement e(b, std::move(M));
  e.symbol = symbol;
  return e;
}

Multivector dequantize(const Basis& b, const MatrixXd& M) {
  const int n = b.n, N = b.dim();
  if (M.rows() != N || M.cols() != N) throw Error("dequantize: matrix shape mismatch");
  // stage 1: peel normal-ordered coefficients, annihilator sets in ascending
  // integer order so that every proper subset is handled first
  std::vector<std::vector<std::pair<uint32_t, double>>> perA(N);
  double thresh = 1e-14 * (M.norm() > 1.0 ? M.norm() : 1.0);
  for (uint32_t A = 0; A < uint32_t(N); ++A) {
    VectorXd col = M.col(A);
    for (uint32_t sub = (A - 1) & A;; sub = (sub - 1) & A) {
      for (const auto& [Bp, cp] : perA[sub]) {
        uint32_t m = A;
        double s = 1.0;
        if (normal_word_step(n, sub, Bp, m, s)) col[m] -= cp * s;
      }
      if (sub == 0) break;
    }
    uint32_t mA = A;
    double sA = 1.0;
    if (!normal_word_step(n, A, 0, mA, sA) || mA != 0)
      throw Error("dequantize: internal annihilator chain failure");
    for (uint32_t B = 0; B < uint32_t(N); ++B)
      if (std::abs(col[B]) > thresh) perA[A].push_back({B, col[B] / sA});
  }
  // stage 2: convert to wedge-symbol coordinates, highest grade first
  VectorXd cn = VectorXd::Zero(1 << (2 * n));
  for (uint32_t A = 0; A < uint32_t(N); ++A)
    for (const auto& [B, c] : perA[A]) cn[(B << n) | A] = c;
  std::vector<uint32_t> order(1u << (2 * n));
  for (uint32_t m = 0; m < order.size(); ++m) order[m] = m;
  std::stable_sort(order.begin(), order.end(),
                   [](uint32_t x, uint32_t y) { return popcount(x) > popcount(y); });
  std::map<uint32_t, NormalDict> memo;
  Multivector symbol(Basis(2 * n));
  for (uint32_t mask : order) {
    double val = cn[mask];
    if (std::abs(val) <= thresh) continue;
    const NormalDict& qn = quantized_normal(n, mask, memo);
    double lead = qn.at(mask);
    double cm = val / lead;
    for (const auto& [key, q] : qn) cn[key] -= cm * q;
    symbol.c[mask] = cm;
  }
  return symbol;
}

Multivector ensure_symbol(const CliffordElement& a) {
  if (a.symbol) return *a.symbol;
  return dequantize(a.basis, a.M);
}

int filtration_degree(const CliffordElement& a, double tol) {
  Multivector sym = ensure_symbol(a);
  double mx = sym.c.cwiseAbs().maxCoeff();
  if (mx == 0.0) return 0;
  int t = 0;
  for (int m = 0; m < sym.basis.dim(); ++m)
    if (std::abs(sym.c[m]) > tol * mx) t = std::max(t, popcount(uint32_t(m)));
  for (int m = 0; m < sym.basis.dim(); ++m)
    if (std::abs(sym.c[m]) > tol * mx && ((t - popcount(uint32_t(m))) & 1))
      throw Error("filtration_degree: mixed parity element");
  return t;
}

int cl2_dim(int n) { return 1 + (2 * n) * (2 * n - 1) / 2; }

Multivector cl2_symbol(const CL2Element& a) {
  const int n = a.basis.n;
  Multivector sym(Basis(2 * n));
  sym.c[0] = a.scalar;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      sym.c[(1u << i) | (1u << (n + j))] = a.endo(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      sym.c[(1u << (n + i)) | (1u << (n + j))] = a.two_form.c[(1u << i) | (1u << j)];
      sym.c[(1u << i) | (1u << j)] = a.two_vector(i, j);
    }
  return sym;
}

CL2Element cl2_from_symbol(const Basis& b, const Multivector& symbol, double tol) {
  const int n = b.n;
  if (symbol.basis.n != 2 * n) throw Error("cl2_from_symbol: symbol basis mismatch");
  CL2Element r(b);
  double scale = symbol.c.cwiseAbs().maxCoeff();
  if (scale < 1.0) scale = 1.0;
  const uint32_t vmask = (1u << n) - 1;
  for (int m = 0; m < symbol.basis.dim(); ++m) {
    cplx c = symbol.c[m];
    if (std::abs(c) <= 0.0) continue;
    if (std::abs(c.imag()) > tol * scale) throw Error("cl2_from_symbol: complex coefficient");
    int pc = popcount(uint32_t(m));
    if (pc != 0 && pc != 2) {
      if (std::abs(c) > tol * scale) throw Error("cl2_from_symbol: element not in degree <= 2");
      continue;
    }
    double cr = c.real();
    if (pc == 0) {
      r.scalar = cr;
      continue;
    }
    uint32_t A = uint32_t(m) & vmask, B = uint32_t(m) >> n;
    if (A && B) {
      r.endo(std::countr_zero(A), std::countr_zero(B)) = cr;
    } else if (B) {
      r.two_form.c[B] = cr;
    } else {
      int i = std::countr_zero(A);
      int j = 31 - std::countl_zero(A);
      r.two_vector(i, j) = cr;
      r.two_vector(j, i) = -cr;
    }
  }
  return r;
}

CliffordElement quantize_cl2(const CL2Element& a) { return quantize(a.basis, cl2_symbol(a)); }

CL2Element cl2_from_clifford(const CliffordElement& a, double tol) {
  return cl2_from_symbol(a.basis, ensure_symbol(a), tol);
}

VectorXd cl2_pack(const CL2Element& a) {
  const int n = a.basis.n;
  VectorXd v = VectorXd::Zero(cl2_dim(n));
  v[0] = a.scalar;
  int k = 1;
  for (int p = 0; p < 2 * n; ++p)
    for (int q = p + 1; q < 2 * n; ++q, ++k) {
      if (q < n) v[k] = a.two_vector(p, q);
      else if (p < n) v[k] = a.endo(p, q - n);
      else v[k] = a.two_form.c[(1u << (p - n)) | (1u << (q - n))].real();
    }
  return v;
}

CL2Element cl2_unpack(const Basis& b, const VectorXd& coeffs) {
  const int n = b.n;
  if (coeffs.size() != cl2_dim(n)) throw Error("cl2_unpack: length mismatch");
  CL2Element a(b);
  a.scalar = coeffs[0];
  int k = 1;
  for (int p = 0; p < 2 * n; ++p)
    for (int q = p + 1; q < 2 * n; ++q, ++k) {
      double c = coeffs[k];
      if (q < n) {
        a.two_vector(p, q) = c;
        a.two_vector(q, p) = -c;
      } else if (p < n) {
        a.endo(p, q - n) = c;
      } else {
        a.two_form.c[(1u << (p - n)) | (1u << (q - n))] = c;
      }
    }
  return a;
}

std::string to_json(const CL2Element& a) {
  using nlohmann::ordered_json;
  const int n = a.basis.n;
  auto mat = [](const MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
      ordered_json row = ordered_json::array();
      for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    return rows;
  };
  ordered_json j{{"scalar", a.scalar},
                 {"endo", mat(a.endo)},
                 {"two_form", nlohmann::ordered_json::parse(to_json(a.two_form))},
                 {"two_vector", mat(a.two_vector)}};
  (void)n;
  return j.dump();
}

CL2Element cl2_from_json(const std::string& text) {
  using nlohmann::ordered_json;
  ordered_json j = ordered_json::parse(text);
  Multivector tf = multivector_from_json(j.at("two_form").dump());
  CL2Element a(tf.basis);
  a.two_form = tf;
  a.scalar = j.at("scalar").get<double>();
  auto mat = [&](const ordered_json& rows, MatrixXd& m) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j2 = 0; j2 < m.cols(); ++j2) m(i, j2) = rows.at(i).at(j2).get<double>();
  };
  mat(j.at("endo"), a.endo);
  mat(j.at("two_vector"), a.two_vector);
  return a;
}

CliffordElement exp_cl2(const CL2Element& a) {
  CliffordElement q = quantize_cl2(a);
  CliffordElement r(a.basis, q.M.exp());
  return r;
}

namespace {

VectorXd extract_vv(const MatrixXd& X, int n) {
  VectorXd E(2 * n);
  for (int j = 0; j < n; ++j) E[j] = X(0, 1 << j);       // V component
  for (int i = 0; i < n; ++i) E[n + i] = X(1 << i, 0);   // V* component
  return E;
}

}  // namespace

CliffordElement tau_closed_form(const MatrixXd& A) {
  int n = int(A.rows());
  Basis b(n);
  CL2Element c(b);
  c.endo = A;
  return quantize_cl2(c);
}

CL2Element cl2_from_so(const Basis& b, const MatrixXd& X) {
  const int n = b.n;
  if (X.rows() != 2 * n || X.cols() != 2 * n) throw Error("cl2_from_so: shape mismatch");
  MatrixXd P = MatrixXd::Zero(2 * n, 2 * n);
  P.topRightCorner(n, n) = 0.5 * MatrixXd::Identity(n, n);
  P.bottomLeftCorner(n, n) = 0.5 * MatrixXd::Identity(n, n);
  if ((X.transpose() * P + P * X).norm() > 1e-8 * (X.norm() > 1.0 ? X.norm() : 1.0))
    throw Error("cl2_from_so: matrix is not pairing-skew");
  const int d = cl2_dim(n);
  std::vector<MatrixXd> Q(d);
  for (int k = 0; k < d; ++k) {
    VectorXd e = VectorXd::Zero(d);
    e[k] = 1.0;
    Q[k] = quantize_cl2(cl2_unpack(b, e)).M;
  }
  // equations: bracket with each generator must reproduce the given action
  MatrixXd S(2 * n * 2 * n, d);
  VectorXd rhs(2 * n * 2 * n);
  for (int g = 0; g < 2 * n; ++g) {
    MatrixXd Ag = act_generator(b, g);
    for (int k = 0; k < d; ++k)
      S.block(g * 2 * n, k, 2 * n, 1) = extract_vv(Q[k] * Ag - Ag * Q[k], n);
    rhs.segment(g * 2 * n, 2 * n) = X.col(g);
  }
  VectorXd x = pinv_solve<double>(S, rhs);
  double resid = (S * x - rhs).norm();
  if (resid > 1e-8 * (rhs.norm() > 1.0 ? rhs.norm() : 1.0))
    throw Error("cl2_from_so: embedding system inconsistent");
  return cl2_unpack(b, x);
}

MatrixXd so_matrix(const CL2Element& a) {
  const int n = a.basis.n;
  MatrixXd X = MatrixXd::Zero(2 * n, 2 * n);
  X.topLeftCorner(n, n) = a.endo;
  X.bottomRightCorner(n, n) = -a.endo.transpose();
  X.topRightCorner(n, n) = a.two_vector;
  MatrixXd B = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      B(i, j) = a.two_form.c[(1u << i) | (1u << j)].real();
      B(j, i) = -B(i, j);
    }
  X.bottomLeftCorner(n, n) = B;
  return X;
}

WordEvaluator::WordEvaluator(const Basis& b) : basis(b) {
  gens.reserve(2 * b.n);
  for (int a = 0; a < 2 * b.n; ++a) gens.push_back(act_generator(b, a));
}

VectorXcd WordEvaluator::apply(uint32_t mask, const VectorXcd& x) const {
  if (mask == 0) return x;
  int a = std::countr_zero(mask);
  uint32_t rest = mask & (mask - 1);
  VectorXcd out = gens[a] * apply(rest, x);
  int p = partner(a, basis.n);
  uint32_t pbit = 1u << p;
  if (rest & pbit) {
    double s = (popcount(rest & (pbit - 1)) & 1) ? -1.0 : 1.0;
    out -= (0.5 * s) * apply(rest & ~pbit, x);
  }
  return out;
}

FormTuple WordEvaluator::apply(uint32_t mask, const FormTuple& phi) const {
  FormTuple out = phi;
  for (auto& comp : out.comps) comp.c = apply(mask, comp.c);
  return out;
}

CliffordElement tau_endo(const MatrixXd& A) {
  const int n = int(A.rows());
  if (A.cols() != n) throw Error("tau_endo: square matrix required");
  Basis b(n);
  MatrixXd X = MatrixXd::Zero(2 * n, 2 * n);
  X.topLeftCorner(n, n) = A;
  X.bottomRightCorner(n, n) = -A.transpose();
  return quantize_cl2(cl2_from_so(b, X));
}

MatrixXd ad_tilde_matrix(const CliffordElement& g, const VectorXd& E) {
  const int n = g.n();
  MatrixXd gt = parity_matrix(g.basis) * g.M * parity_matrix(g.basis);
  Eigen::FullPivLU<MatrixXd> lu(gt);
  if (!lu.isInvertible()) throw Error("ad_tilde: singular element");
  return lu.solve(act_vv(g.basis, E.head(n), E.tail(n)) * g.M);
}

std::optional<VectorXd> ad_tilde(const CliffordElement& g, const VectorXd& E, double rel_tol) {
  MatrixXd X = ad_tilde_matrix(g, E);
  VectorXd F = extract_vv(X, g.n());
  MatrixXd model = act_vv(g.basis, F.head(g.n()), F.tail(g.n()));
  double scale = X.norm() > 1.0 ? X.norm() : 1.0;
  if ((X - model).norm() > rel_tol * scale) return std::nullopt;
  return F;
}

Membership group_membership(const CliffordElement& g, double tol) {
  Membership m;
  Eigen::FullPivLU<MatrixXd> lu(g.M);
  m.invertible = lu.isInvertible();
  if (!m.invertible) throw Error("group_membership: singular element");
  m.cpin = true;
  for (int a = 0; a < 2 * g.n() && m.cpin; ++a) {
    VectorXd E = VectorXd::Zero(2 * g.n());
    E[a] = 1.0;
    if (!ad_tilde(g, E, tol)) m.cpin = false;
  }
  Norm2Result nr = clifford_norm2(g, tol);
  bool unit = nr.is_scalar && std::abs(std::abs(nr.scalar) - 1.0) <= tol;
  m.pin = m.cpin && unit;
  double even_resid = (parity_matrix(g.basis) * g.M * parity_matrix(g.basis) - g.M).norm();
  bool even = even_resid <= tol * (g.M.norm() > 1.0 ? g.M.norm() : 1.0);
  m.spin = m.pin && even;
  m.spin0 = m.spin && std::abs(nr.scalar - 1.0) <= tol;
  return m;
}

}  // namespace gf
