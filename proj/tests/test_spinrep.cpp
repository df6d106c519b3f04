#include "genform/spinrep.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "helpers.hpp"

using namespace gf;
using gft::random_mat;
using gft::random_mv;
using gft::random_skew;
using gft::random_vec;

TEST_CASE("action of vectors doubles to the norm") {
  std::mt19937_64 rng(300);
  Basis b(4);
  for (int rep = 0; rep < 10; ++rep) {
    VectorXd E = random_vec(8, rng);
    Multivector phi = random_mv(b, rng, true);
    CliffordElement g = cl_from_vv(b, E);
    Multivector twice = act(g, act(g, phi));
    CHECK((twice - phi * cplx(split_pairing(E, E))).norm() < 1e-12 * (1.0 + phi.norm()));
    // degree one action on the constant is the form part
    Multivector one = scalar_mv(b, 1.0);
    Multivector img = act(g, one);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(img.c[1u << j].real() - E[4 + j]) < 1e-14);
    CHECK(std::abs(img.c[0]) < 1e-14);
  }
}

TEST_CASE("action is a homomorphism") {
  std::mt19937_64 rng(301);
  Basis b(3);
  for (int rep = 0; rep < 10; ++rep) {
    CliffordElement x(b, random_mat(8, 8, rng)), y(b, random_mat(8, 8, rng));
    Multivector phi = random_mv(b, rng, true);
    Multivector lhs = act(clifford_product(x, y), phi);
    Multivector rhs = act(x, act(y, phi));
    CHECK((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
  }
}

TEST_CASE("equivariance of the twisted adjoint") {
  std::mt19937_64 rng(302);
  Basis b(3);
  for (int rep = 0; rep < 5; ++rep) {
    VectorXd coeffs = 0.4 * random_vec(cl2_dim(3), rng);
    coeffs[0] = 0.0;
    CliffordElement g = exp_cl2(cl2_unpack(b, coeffs));
    VectorXd E = random_vec(6, rng);
    auto AdE = ad_tilde(g, E);
    REQUIRE(AdE.has_value());
    // tilde(g)^{-1} E g = Ad(E) as endomorphisms of the spinor space
    MatrixXd lhs = ad_tilde_matrix(g, E);
    MatrixXd rhs = cl_from_vv(b, *AdE).M;
    CHECK((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
  }
}

TEST_CASE("parity behaviour of even and odd elements") {
  std::mt19937_64 rng(303);
  Basis b(3);
  VectorXd E = random_vec(6, rng);
  Multivector even = random_mv(b, rng);
  for (int k = 0; k < b.dim(); ++k)
    if (popcount(uint32_t(k)) & 1) even.c[k] = 0.0;
  Multivector img = act(cl_from_vv(b, E), even);
  for (int k = 0; k < b.dim(); ++k)
    if (!(popcount(uint32_t(k)) & 1)) CHECK(std::abs(img.c[k]) < 1e-14);
}

TEST_CASE("gl lift at scalar matrices grades the half determinant") {
  Basis b(8);
  double lam = 1.3;
  MatrixXd g = lam * MatrixXd::Identity(8, 8);
  for (int k : {0, 2, 4, 7, 8}) {
    std::vector<int> idx;
    for (int i = 1; i <= k; ++i) idx.push_back(i);
    Multivector m = monomial(b, idx);
    Multivector img = gl_lift_action(g, m);
    CHECK((img - m * std::pow(lam, 4 - k)).norm() < 1e-10);
  }
  MatrixXd flip = MatrixXd::Identity(8, 8);
  flip(0, 0) = -1.0;
  CHECK_THROWS_AS(gl_lift_action(flip, scalar_mv(b, 1.0)), Error);
}

TEST_CASE("gl lift derivative matches the embedded endomorphism") {
  std::mt19937_64 rng(304);
  for (int n : {2, 3, 4}) {
    Basis b(n);
    for (int rep = 0; rep < 3; ++rep) {
      MatrixXd A = random_mat(n, n, rng);
      Multivector phi = random_mv(b, rng);
      double h = 1e-5;
      MatrixXd gp = (h * A).exp(), gm = (-h * A).exp();
      Multivector fd = (gl_lift_action(gp, phi) - gl_lift_action(gm, phi)) * (1.0 / (2 * h));
      Multivector an = act(tau_endo(A), phi);
      CHECK((fd - an).norm() < 1e-8 * (1.0 + an.norm()));
    }
  }
}

TEST_CASE("gl lift is a group action") {
  std::mt19937_64 rng(305);
  Basis b(3);
  for (int rep = 0; rep < 5; ++rep) {
    MatrixXd g = random_mat(3, 3, rng) + 3.0 * MatrixXd::Identity(3, 3);
    MatrixXd h = random_mat(3, 3, rng) + 3.0 * MatrixXd::Identity(3, 3);
    if (g.determinant() <= 0 || h.determinant() <= 0 || (g * h).determinant() <= 0) continue;
    Multivector phi = random_mv(b, rng);
    Multivector lhs = gl_lift_action(g * h, phi);
    Multivector rhs = gl_lift_action(g, gl_lift_action(h, phi));
    CHECK((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
  }
}

TEST_CASE("b field action is the wedge exponential") {
  std::mt19937_64 rng(306);
  Basis b(4);
  Multivector tf(b);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) tf.c[(1u << i) | (1u << j)] = random_vec(1, rng)[0];
  Multivector one = scalar_mv(b, 1.0);
  Multivector img = b_transform(tf, one);
  Multivector expect = one + tf + wedge(tf, tf) * 0.5;
  CHECK((img - expect).norm() < 1e-12);
  CHECK((b_transform(Multivector(b), one) - one).norm() == 0.0);
  // agreement with the quantized exponential on random input
  CL2Element c(b);
  c.two_form = tf;
  Multivector phi = random_mv(b, rng, true);
  CHECK((b_transform(tf, phi) - act(exp_cl2(c), phi)).norm() < 1e-11);
}

TEST_CASE("beta field action contracts the volume") {
  std::mt19937_64 rng(307);
  Basis b(4);
  MatrixXd beta = random_skew(4, rng);
  Multivector vol = monomial(b, {1, 2, 3, 4});
  Multivector img = beta_transform(beta, vol);
  // first order term: contraction of the volume by each 2-vector
  Multivector expect = vol;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      VectorXcd vi = VectorXcd::Zero(4), vj = VectorXcd::Zero(4);
      vi[i] = 1.0;
      vj[j] = 1.0;
      expect += interior(vi, interior(vj, vol)) * beta(i, j);
    }
  // beta^2 term acts only in the scalar direction here
  Multivector second = (beta_transform(beta, vol) - expect);
  CHECK(top_grade(second) == 0);
  CL2Element c(b);
  c.two_vector = beta;
  Multivector phi = random_mv(b, rng, true);
  CHECK((beta_transform(beta, phi) - act(exp_cl2(c), phi)).norm() < 1e-11);
}
