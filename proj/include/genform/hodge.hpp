#pragma once
// Per-frequency Hodge theory on the torus for chains of fiber subspaces
// closed under wedging by the coordinate covectors: restricted differentials,
// flat-coordinate adjoints, Laplacians, Green operators and harmonic
// projectors, assembled lazily per frequency from precomputed wedge blocks.

#include <map>
#include <vector>

#include "genform/fourier.hpp"
#include "genform/orbit.hpp"

namespace gf {

// level k holds orthonormal columns over the flattened tuple coordinates;
// wedge_blocks[k][j] is (e^{j+1} ^ .) written level k -> level k+1
struct LevelChain {
  Basis basis;
  int l = 1;
  std::vector<MatrixXcd> levels;
  std::vector<std::vector<MatrixXcd>> wedge_blocks;
  double closure_residual = 0.0;  // wedge images escaping the next level

  int depth() const { return int(levels.size()); }
  int level_dim(int k) const { return int(levels[k].cols()); }
};

// levels taken from the word sweeps of one structure; index k corresponds
// to words of length k, k-2, ... applied to the spinor
LevelChain sweep_chain(const FiberComplex& fc);
// plain de Rham chain graded by form degree
LevelChain grade_chain(const Basis& b);

struct FreqPackage {
  std::vector<MatrixXcd> d;      // d[k]: level k -> level k+1, scaled by 2 pi i m
  std::vector<MatrixXcd> green;  // per level
  std::vector<MatrixXcd> harm;   // harmonic projector per level
  std::vector<int> harm_dims;
  double identity_residual = 0.0;  // Delta G + Pi against the identity
  double chain_residual = 0.0;     // worst |d d|
  double commute_residual = 0.0;   // worst |d G - G d|
};

class HodgePackage {
 public:
  explicit HodgePackage(LevelChain chain);

  const LevelChain& chain() const { return chain_; }
  const FreqPackage& at(const Freq& m);

  // coordinates of a tuple inside one level; defect reports the part of the
  // tuple falling outside the level span
  VectorXcd to_level(int k, const FormTuple& t, double* defect = nullptr) const;
  FormTuple from_level(int k, const VectorXcd& coords) const;

 private:
  LevelChain chain_;
  std::map<uint64_t, FreqPackage> cache_;
};

// sweep levels of the structure, depth + 2 spaces
HodgePackage hodge_package(const FormTuple& phi, int depth = 3);

struct TopologicalReport {
  std::vector<int> tested_levels;
  std::vector<int> zero_dims;   // harmonic dims at m = 0, all levels
  std::vector<int> worst_dims;  // max harmonic dim over nonzero m, all levels
  int frequencies_checked = 0;
  bool pass = true;  // tested levels carry no harmonics away from m = 0
};
// rank counting only, no Green assembly; scans one representative of each
// +-m pair with 0 < |m|_inf <= trunc
TopologicalReport topological_check(const LevelChain& chain, int trunc,
                                    std::vector<int> tested_levels = {2, 3});

}  // namespace gf
