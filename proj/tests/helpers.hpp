#pragma once
#include <random>

#include "genform/multivector.hpp"

namespace gft {

using namespace gf;

inline Multivector random_mv(const Basis& b, std::mt19937_64& rng, bool complex_coeffs = false) {
  std::normal_distribution<double> g;
  Multivector m(b);
  for (int k = 0; k < b.dim(); ++k)
    m.c[k] = complex_coeffs ? cplx(g(rng), g(rng)) : cplx(g(rng), 0.0);
  return m;
}

inline VectorXd random_vec(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

inline MatrixXd random_mat(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = g(rng);
  return m;
}

inline MatrixXd random_spd(int n, std::mt19937_64& rng) {
  MatrixXd a = random_mat(n, n, rng);
  return a * a.transpose() + MatrixXd::Identity(n, n);
}

inline MatrixXd random_skew(int n, std::mt19937_64& rng) {
  MatrixXd a = random_mat(n, n, rng);
  return 0.5 * (a - a.transpose());
}

}  // namespace gft
