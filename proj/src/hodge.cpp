#include "genform/hodge.hpp"

#include <cmath>

namespace gf {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// wedge by e^{j+1} on a flattened tuple, one block per component
MatrixXcd stacked_wedge(const Basis& b, int l, const MatrixXd& W, const MatrixXcd& Q) {
  const int D = b.dim();
  MatrixXcd out(Q.rows(), Q.cols());
  for (int c = 0; c < l; ++c)
    out.middleRows(c * D, D) = W * Q.middleRows(c * D, D);
  return out;
}

LevelChain finish_chain(LevelChain chain) {
  const int n = chain.basis.n;
  std::vector<MatrixXd> W;
  for (int j = 0; j < n; ++j) W.push_back(act_generator(chain.basis, n + j));
  chain.wedge_blocks.resize(chain.depth() - 1);
  for (int k = 0; k + 1 < chain.depth(); ++k) {
    const MatrixXcd& Q = chain.levels[k];
    const MatrixXcd& R = chain.levels[k + 1];
    for (int j = 0; j < n; ++j) {
      MatrixXcd img = stacked_wedge(chain.basis, chain.l, W[j], Q);
      chain.wedge_blocks[k].push_back(R.adjoint() * img);
      double esc = (img - R * chain.wedge_blocks[k][j]).norm();
      chain.closure_residual = std::max(chain.closure_residual, esc);
    }
  }
  return chain;
}

}  // namespace

LevelChain sweep_chain(const FiberComplex& fc) {
  LevelChain chain;
  chain.basis = fc.phi.basis;
  chain.l = fc.phi.l();
  for (const auto& sp : fc.spaces) chain.levels.push_back(sp.basis);
  return finish_chain(std::move(chain));
}

LevelChain grade_chain(const Basis& b) {
  LevelChain chain;
  chain.basis = b;
  chain.l = 1;
  for (int g = 0; g <= b.n; ++g) {
    std::vector<int> masks;
    for (int m = 0; m < b.dim(); ++m)
      if (popcount(uint32_t(m)) == g) masks.push_back(m);
    MatrixXcd Q = MatrixXcd::Zero(b.dim(), int(masks.size()));
    for (size_t c = 0; c < masks.size(); ++c) Q(masks[c], int(c)) = 1.0;
    chain.levels.push_back(Q);
  }
  return finish_chain(std::move(chain));
}

HodgePackage::HodgePackage(LevelChain chain) : chain_(std::move(chain)) {
  if (chain_.depth() < 2) throw Error("hodge: chain needs at least two levels");
}

VectorXcd HodgePackage::to_level(int k, const FormTuple& t, double* defect) const {
  VectorXcd v = t.flatten();
  VectorXcd coords = chain_.levels[k].adjoint() * v;
  if (defect) *defect = (v - chain_.levels[k] * coords).norm();
  return coords;
}

FormTuple HodgePackage::from_level(int k, const VectorXcd& coords) const {
  return FormTuple::unflatten(chain_.basis, chain_.l, chain_.levels[k] * coords);
}

const FreqPackage& HodgePackage::at(const Freq& m) {
  uint64_t key = freq_key(m);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  FreqPackage pkg;
  const int L = chain_.depth();
  const cplx scale(0.0, kTwoPi);
  for (int k = 0; k + 1 < L; ++k) {
    MatrixXcd D = MatrixXcd::Zero(chain_.level_dim(k + 1), chain_.level_dim(k));
    for (int j = 0; j < chain_.basis.n; ++j)
      if (m[j] != 0) D += (scale * double(m[j])) * chain_.wedge_blocks[k][j];
    pkg.d.push_back(D);
  }
  for (int k = 0; k + 2 < L; ++k)
    pkg.chain_residual = std::max(pkg.chain_residual, (pkg.d[k + 1] * pkg.d[k]).norm());

  for (int k = 0; k < L; ++k) {
    const int dk = chain_.level_dim(k);
    MatrixXcd delta = MatrixXcd::Zero(dk, dk);
    if (k + 1 < L) delta += pkg.d[k].adjoint() * pkg.d[k];
    if (k > 0) delta += pkg.d[k - 1] * pkg.d[k - 1].adjoint();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(delta);
    const auto& ev = es.eigenvalues();
    double cutoff = kRankTol * std::max(ev.cwiseAbs().maxCoeff(), 1.0);
    MatrixXcd G = MatrixXcd::Zero(dk, dk);
    MatrixXcd P = MatrixXcd::Zero(dk, dk);
    int hd = 0;
    for (int i = 0; i < dk; ++i) {
      MatrixXcd vv = es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      if (ev[i] <= cutoff) {
        P += vv;
        ++hd;
      } else {
        G += vv / ev[i];
      }
    }
    pkg.green.push_back(G);
    pkg.harm.push_back(P);
    pkg.harm_dims.push_back(hd);
    pkg.identity_residual = std::max(
        pkg.identity_residual, (delta * G + P - MatrixXcd::Identity(dk, dk)).norm());
  }
  for (int k = 0; k + 1 < L; ++k)
    pkg.commute_residual = std::max(
        pkg.commute_residual, (pkg.d[k] * pkg.green[k] - pkg.green[k + 1] * pkg.d[k]).norm());

  return cache_.emplace(key, std::move(pkg)).first->second;
}

HodgePackage hodge_package(const FormTuple& phi, int depth) {
  return HodgePackage(sweep_chain(fiber_complex(phi, depth)));
}

namespace {

// odometer over 0 < |m|_inf <= trunc, one representative per +-m pair
bool next_rep(Freq& m, int trunc) {
  const int n = int(m.size());
  while (true) {
    int j = n - 1;
    while (j >= 0 && m[j] == trunc) {
      m[j] = -trunc;
      --j;
    }
    if (j < 0) return false;
    ++m[j];
    int first = 0;
    while (first < n && m[first] == 0) ++first;
    if (first == n) continue;
    if (m[first] > 0) return true;
  }
}

}  // namespace

TopologicalReport topological_check(const LevelChain& chain, int trunc,
                                    std::vector<int> tested_levels) {
  TopologicalReport rep;
  rep.tested_levels = tested_levels;
  const int L = chain.depth();
  for (int k : tested_levels)
    if (k < 0 || k >= L) throw Error("topological_check: tested level out of range");
  const int n = chain.basis.n;
  for (int k = 0; k < L; ++k) rep.zero_dims.push_back(chain.level_dim(k));
  rep.worst_dims.assign(L, 0);

  Freq m(n, -trunc);
  m[n - 1] -= 1;  // odometer starts one step before the first candidate
  // rank revealing qr, orders of magnitude cheaper than an svd across the
  // whole frequency box and only the rank is needed here
  Eigen::ColPivHouseholderQR<MatrixXcd> qr;
  while (next_rep(m, trunc)) {
    std::vector<int> ranks(L - 1);
    for (int k = 0; k + 1 < L; ++k) {
      MatrixXcd D = MatrixXcd::Zero(chain.level_dim(k + 1), chain.level_dim(k));
      for (int j = 0; j < n; ++j)
        if (m[j] != 0) D += cplx(0.0, kTwoPi * m[j]) * chain.wedge_blocks[k][j];
      qr.setThreshold(kRankTol);
      qr.compute(D);
      ranks[k] = int(qr.rank());
    }
    for (int k = 0; k < L; ++k) {
      int hd = chain.level_dim(k);
      if (k + 1 < L) hd -= ranks[k];
      if (k > 0) hd -= ranks[k - 1];
      rep.worst_dims[k] = std::max(rep.worst_dims[k], hd);
    }
    ++rep.frequencies_checked;
  }
  for (int k : tested_levels)
    if (rep.worst_dims[k] != 0) rep.pass = false;
  return rep;
}

}  // namespace gf
