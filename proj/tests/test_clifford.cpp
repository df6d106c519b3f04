#include "genform/clifford.hpp"

#include <algorithm>

#include "doctest.h"
#include "genform/spinrep.hpp"
#include "genform/subspace.hpp"
#include "helpers.hpp"

using namespace gf;
using gft::random_mat;
using gft::random_mv;
using gft::random_skew;
using gft::random_vec;

static double mdist(const MatrixXd& a, const MatrixXd& b) { return (a - b).norm(); }

TEST_CASE("generator relations of the split form") {
  for (int n : {2, 3, 4}) {
    Basis b(n);
    std::mt19937_64 rng(100 + n);
    for (int i = 0; i < n; ++i) {
      MatrixXd v = act_generator(b, i), e = act_generator(b, n + i);
      CHECK(v.norm() > 0);
      CHECK((v * v).norm() == 0.0);
      CHECK((e * e).norm() == 0.0);
      CHECK(mdist(v * e + e * v, MatrixXd::Identity(b.dim(), b.dim())) == 0.0);
    }
    for (int rep = 0; rep < 10; ++rep) {
      VectorXd E = random_vec(2 * n, rng), F = random_vec(2 * n, rng);
      MatrixXd ME = cl_from_vv(b, E).M, MF = cl_from_vv(b, F).M;
      double ee = split_pairing(E, E);
      CHECK(mdist(ME * ME, ee * MatrixXd::Identity(b.dim(), b.dim())) < 1e-12);
      CHECK(mdist(ME * MF + MF * ME,
                  2.0 * split_pairing(E, F) * MatrixXd::Identity(b.dim(), b.dim())) < 1e-12);
    }
  }
}

TEST_CASE("spot examples for the product") {
  Basis b(2);
  VectorXd v1 = VectorXd::Zero(4), e1 = VectorXd::Zero(4);
  v1[0] = 1.0;
  e1[2] = 1.0;
  MatrixXd Mv = cl_from_vv(b, v1).M, Me = cl_from_vv(b, e1).M;
  CHECK((Mv * Mv).norm() == 0.0);
  MatrixXd sum = cl_from_vv(b, VectorXd(v1 + e1)).M;
  CHECK(mdist(sum * sum, MatrixXd::Identity(4, 4)) == 0.0);
  CHECK(mdist(Mv * Me + Me * Mv, MatrixXd::Identity(4, 4)) == 0.0);
}

TEST_CASE("spin representation is faithful and onto") {
  for (int n : {2, 3}) {
    Basis b(n);
    int NN = b.dim() * b.dim();
    MatrixXd all(NN, 1 << (2 * n));
    for (int mask = 0; mask < (1 << (2 * n)); ++mask) {
      Multivector sym(Basis(2 * n));
      sym.c[mask] = 1.0;
      MatrixXd Q = quantize(b, sym).M;
      all.col(mask) = Eigen::Map<VectorXd>(Q.data(), NN);
    }
    CHECK(numeric_rank<double>(all) == (1 << (2 * n)));
  }
}

TEST_CASE("reversal fixes generators and reverses products") {
  std::mt19937_64 rng(200);
  for (int n : {1, 2, 3, 4}) {
    Basis b(n);
    for (int a = 0; a < 2 * n; ++a) {
      VectorXd E = VectorXd::Zero(2 * n);
      E[a] = 1.0;
      CliffordElement g = cl_from_vv(b, E);
      CHECK(mdist(reversal_sigma(g).M, g.M) < 1e-13);
    }
    for (int rep = 0; rep < 5; ++rep) {
      CliffordElement x(b, random_mat(b.dim(), b.dim(), rng));
      CliffordElement y(b, random_mat(b.dim(), b.dim(), rng));
      CHECK(mdist(reversal_sigma(clifford_product(x, y)).M,
                  clifford_product(reversal_sigma(y), reversal_sigma(x)).M) < 1e-10);
      CHECK(mdist(reversal_sigma(reversal_sigma(x)).M, x.M) < 1e-12);
      CHECK(mdist(involution_tilde(involution_tilde(x)).M, x.M) == 0.0);
      CHECK(mdist(involution_tilde(reversal_sigma(x)).M,
                  reversal_sigma(involution_tilde(x)).M) < 1e-12);
    }
    // sigma(E F) = F E on vectors
    VectorXd E = random_vec(2 * n, rng), F = random_vec(2 * n, rng);
    CliffordElement ge = cl_from_vv(b, E), gf2 = cl_from_vv(b, F);
    CHECK(mdist(reversal_sigma(clifford_product(ge, gf2)).M,
                clifford_product(gf2, ge).M) < 1e-12);
  }
}

TEST_CASE("tilde is plus minus one on parity") {
  Basis b(3);
  std::mt19937_64 rng(201);
  VectorXd E = random_vec(6, rng);
  CliffordElement g = cl_from_vv(b, E);
  CHECK(mdist(involution_tilde(g).M, -g.M) == 0.0);
  VectorXd F = random_vec(6, rng);
  CliffordElement gg = clifford_product(g, cl_from_vv(b, F));
  CHECK(mdist(involution_tilde(gg).M, gg.M) == 0.0);
}

// quantization of a monomial must agree with full antisymmetrization
static MatrixXd antisym_product(const Basis& b, std::vector<int> gens) {
  std::sort(gens.begin(), gens.end());
  MatrixXd acc = MatrixXd::Zero(b.dim(), b.dim());
  int count = 0;
  std::vector<int> perm = gens;
  do {
    // parity of the permutation relative to sorted order
    int inv = 0;
    for (size_t i = 0; i < perm.size(); ++i)
      for (size_t j = i + 1; j < perm.size(); ++j)
        if (perm[i] > perm[j]) ++inv;
    MatrixXd prod = MatrixXd::Identity(b.dim(), b.dim());
    for (int g : perm) prod = prod * act_generator(b, g);
    acc += ((inv & 1) ? -1.0 : 1.0) * prod;
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc / count;
}

TEST_CASE("quantized monomials equal antisymmetrized products") {
  Basis b2(2);
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<int> gens;
    for (int a = 0; a < 4; ++a)
      if (mask & (1 << a)) gens.push_back(a);
    Multivector sym(Basis(4));
    sym.c[mask] = 1.0;
    CHECK(mdist(quantize(b2, sym).M, antisym_product(b2, gens)) < 1e-12);
  }
  Basis b3(3);
  std::mt19937_64 rng(202);
  for (int rep = 0; rep < 10; ++rep) {
    uint32_t mask = rng() % 64;
    std::vector<int> gens;
    for (int a = 0; a < 6; ++a)
      if (mask & (1u << a)) gens.push_back(a);
    if (gens.size() > 4) continue;
    Multivector sym(Basis(6));
    sym.c[mask] = 1.0;
    CHECK(mdist(quantize(b3, sym).M, antisym_product(b3, gens)) < 1e-12);
  }
}

TEST_CASE("dequantize inverts quantize") {
  std::mt19937_64 rng(203);
  for (int n : {1, 2, 3, 4}) {
    Basis b(n);
    Multivector sym = random_mv(Basis(2 * n), rng);
    CliffordElement q = quantize(b, sym);
    Multivector back = dequantize(b, q.M);
    CHECK((back - sym).norm() < 1e-10 * sym.norm());
    // and the other direction, starting from a random matrix
    MatrixXd M = random_mat(b.dim(), b.dim(), rng);
    Multivector s2 = dequantize(b, M);
    CHECK(mdist(quantize(b, s2).M, M) < 1e-9 * M.norm());
  }
  // sparse degree-2 symbols at full size
  Basis b8(8);
  CL2Element c(b8);
  c.scalar = 0.3;
  c.endo = random_mat(8, 8, rng);
  c.two_vector = random_skew(8, rng);
  Multivector tf(Basis(8));
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) tf.c[(1u << i) | (1u << j)] = random_vec(1, rng)[0];
  c.two_form = tf;
  CliffordElement q8 = quantize_cl2(c);
  Multivector sym8 = cl2_symbol(c);
  CHECK((dequantize(b8, q8.M) - sym8).norm() < 1e-9 * sym8.norm());
}

TEST_CASE("explicit symbol of a creation annihilation pair") {
  Basis b(2);
  MatrixXd M = act_generator(b, 0) * act_generator(b, 2);  // v1 then e1
  Multivector sym = dequantize(b, M);
  // v1 e1 = Q(v1 ^ e1) + 1/2
  CHECK(std::abs(sym.c[0] - cplx(0.5)) < 1e-12);
  CHECK(std::abs(sym.c[(1u << 0) | (1u << 2)] - cplx(1.0)) < 1e-12);
  CHECK(sym.norm() < 1.5 + 1e-9);
}

TEST_CASE("cl2 element conversions round trip") {
  std::mt19937_64 rng(204);
  for (int n : {2, 4, 8}) {
    Basis b(n);
    VectorXd coeffs = random_vec(cl2_dim(n), rng);
    CL2Element a = cl2_unpack(b, coeffs);
    CHECK((cl2_pack(a) - coeffs).norm() == 0.0);
    CL2Element back = cl2_from_symbol(b, cl2_symbol(a));
    CHECK((cl2_pack(back) - coeffs).norm() < 1e-12);
    CL2Element viaq = cl2_from_clifford(quantize_cl2(a));
    CHECK((cl2_pack(viaq) - coeffs).norm() < 1e-9);
    CL2Element json = cl2_from_json(to_json(a));
    CHECK((cl2_pack(json) - coeffs).norm() == 0.0);
  }
}

TEST_CASE("filtration degree") {
  Basis b(3);
  CHECK(filtration_degree(cl_identity(b)) == 0);
  std::mt19937_64 rng(205);
  VectorXd Ea = random_vec(6, rng), Eb = random_vec(6, rng);
  CHECK(filtration_degree(cl_from_vv(b, Ea)) == 1);
  CliffordElement prod = clifford_product(cl_from_vv(b, Ea), cl_from_vv(b, Eb));
  CHECK(filtration_degree(prod) == 2);
  CliffordElement mixed(b, cl_identity(b).M + cl_from_vv(b, Ea).M);
  CHECK_THROWS_AS(filtration_degree(mixed), Error);
  // products respect the filtration bound
  for (int rep = 0; rep < 5; ++rep) {
    CliffordElement x = clifford_product(cl_from_vv(b, random_vec(6, rng)),
                                         cl_from_vv(b, random_vec(6, rng)));
    CliffordElement y = clifford_product(cl_from_vv(b, random_vec(6, rng)),
                                         cl_from_vv(b, random_vec(6, rng)));
    CHECK(filtration_degree(clifford_product(x, y)) <= 4);
  }
}

TEST_CASE("exponential of degree two elements") {
  std::mt19937_64 rng(206);
  Basis b(4);
  CL2Element zero(b);
  CHECK(mdist(exp_cl2(zero).M, MatrixXd::Identity(16, 16)) == 0.0);
  // pure 2-form: wedge series
  CL2Element bf(b);
  Multivector tf(b);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) tf.c[(1u << i) | (1u << j)] = random_vec(1, rng)[0];
  bf.two_form = tf;
  CliffordElement eb = exp_cl2(bf);
  Multivector phi = random_mv(b, rng);
  Multivector viaseries = b_transform(tf, phi);
  CHECK((act(eb, phi) - viaseries).norm() < 1e-12 * (1.0 + viaseries.norm()));
  // nilpotent series from quantized powers matches the matrix exponential
  MatrixXd Q = quantize_cl2(bf).M;
  MatrixXd series = MatrixXd::Identity(16, 16) + Q + 0.5 * Q * Q;
  CHECK(mdist(eb.M, series) < 1e-12);
  // pure 2-vector
  CL2Element bv(b);
  bv.two_vector = random_skew(4, rng);
  CliffordElement ebv = exp_cl2(bv);
  CHECK((act(ebv, phi) - beta_transform(bv.two_vector, phi)).norm() < 1e-11);
}

TEST_CASE("endomorphism embedding acts as the block differential") {
  std::mt19937_64 rng(207);
  for (int n : {2, 3, 4}) {
    Basis b(n);
    MatrixXd A = random_mat(n, n, rng);
    CliffordElement t1 = tau_endo(A);
    CliffordElement t2 = tau_closed_form(A);
    CHECK(mdist(t1.M, t2.M) < 1e-9 * (1.0 + t2.M.norm()));
    for (int g = 0; g < 2 * n; ++g) {
      VectorXd E = VectorXd::Zero(2 * n);
      E[g] = 1.0;
      VectorXd target = VectorXd::Zero(2 * n);
      if (g < n)
        target.head(n) = A.col(g);
      else
        target.tail(n) = -A.row(g - n).transpose();
      MatrixXd lhs = t1.M * cl_from_vv(b, E).M - cl_from_vv(b, E).M * t1.M;
      CHECK(mdist(lhs, act_vv(b, target.head(n), target.tail(n))) < 1e-9);
    }
  }
}

TEST_CASE("twisted adjoint on shear elements") {
  std::mt19937_64 rng(208);
  Basis b(4);
  Multivector tf(b);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) tf.c[(1u << i) | (1u << j)] = random_vec(1, rng)[0];
  CL2Element bf(b);
  bf.two_form = tf;
  CliffordElement g = exp_cl2(bf);
  for (int i = 0; i < 4; ++i) {
    VectorXd E = VectorXd::Zero(8);
    E[i] = 1.0;  // v_{i+1}
    auto img = ad_tilde(g, E);
    REQUIRE(img.has_value());
    // expect v + i_v b
    VectorXcd vi = VectorXcd::Zero(4);
    vi[i] = 1.0;
    Multivector ivb = interior(vi, tf);
    CHECK(std::abs((*img)[i] - 1.0) < 1e-10);
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs((*img)[4 + j] - ivb.c[1u << j].real()) < 1e-10);
      if (j != i) CHECK(std::abs((*img)[j]) < 1e-10);
    }
    VectorXd Eta = VectorXd::Zero(8);
    Eta[4 + i] = 1.0;
    auto img2 = ad_tilde(g, Eta);
    REQUIRE(img2.has_value());
    CHECK((*img2 - Eta).norm() < 1e-10);
  }
}

TEST_CASE("twisted adjoint preserves the pairing") {
  std::mt19937_64 rng(209);
  for (int n : {3, 4}) {
    Basis b(n);
    for (int rep = 0; rep < 5; ++rep) {
      VectorXd coeffs = 0.4 * random_vec(cl2_dim(n), rng);
      coeffs[0] = 0.0;
      CliffordElement g = exp_cl2(cl2_unpack(b, coeffs));
      VectorXd E = random_vec(2 * n, rng), F = random_vec(2 * n, rng);
      auto iE = ad_tilde(g, E), iF = ad_tilde(g, F);
      REQUIRE(iE.has_value());
      REQUIRE(iF.has_value());
      CHECK(std::abs(split_pairing(*iE, *iF) - split_pairing(E, F)) < 1e-10);
    }
  }
}

TEST_CASE("twisted adjoint failure outside the group") {
  Basis b(2);
  VectorXd v1 = VectorXd::Zero(4);
  v1[0] = 1.0;
  CliffordElement g(b, MatrixXd::Identity(4, 4) + cl_from_vv(b, v1).M);
  VectorXd e1 = VectorXd::Zero(4);
  e1[2] = 1.0;
  CHECK(!ad_tilde(g, e1).has_value());
}

TEST_CASE("group membership classification") {
  std::mt19937_64 rng(210);
  Basis b(3);
  VectorXd coeffs = 0.3 * random_vec(cl2_dim(3), rng);
  coeffs[0] = 0.0;
  CliffordElement g = exp_cl2(cl2_unpack(b, coeffs));
  Membership m = group_membership(g);
  CHECK(m.cpin);
  CHECK(m.pin);
  CHECK(m.spin);
  CHECK(m.spin0);
  Membership ms = group_membership(cl_identity(b, 2.0));
  CHECK(ms.cpin);
  CHECK(!ms.pin);
  // odd reflection: unit non-null vector
  VectorXd refl = VectorXd::Zero(6);
  refl[0] = 1.0;
  refl[3] = 1.0;  // v1 + e1, square 1
  Membership mr = group_membership(cl_from_vv(b, refl));
  CHECK(mr.cpin);
  CHECK(mr.pin);
  CHECK(!mr.spin);
  // singular input
  VectorXd nullv = VectorXd::Zero(6);
  nullv[0] = 1.0;
  CHECK_THROWS_AS(group_membership(cl_from_vv(b, nullv)), Error);
}

TEST_CASE("clifford norm of shear exponentials is one") {
  std::mt19937_64 rng(211);
  Basis b(4);
  CL2Element bf(b);
  Multivector tf(b);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) tf.c[(1u << i) | (1u << j)] = random_vec(1, rng)[0];
  bf.two_form = tf;
  CliffordElement g = exp_cl2(bf);
  // sigma(e^b) = e^{-b}
  CL2Element mbf(b);
  mbf.two_form = tf * cplx(-1.0);
  CHECK(mdist(reversal_sigma(g).M, exp_cl2(mbf).M) < 1e-10);
  Norm2Result nr = clifford_norm2(g);
  CHECK(nr.is_scalar);
  CHECK(std::abs(nr.scalar - 1.0) < 1e-10);
  // a non group element whose norm is not scalar
  Multivector sym(Basis(8));
  sym.c[(1u << 4) | (1u << 5) | (1u << 6) | (1u << 7)] = 1.0;  // pure 4-form part
  CliffordElement q(b, MatrixXd::Identity(16, 16) + quantize(b, sym).M);
  CHECK(!clifford_norm2(q).is_scalar);
}
