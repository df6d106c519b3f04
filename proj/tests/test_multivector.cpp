#include "genform/multivector.hpp"

#include "doctest.h"
#include "helpers.hpp"

using namespace gf;
using gft::random_mat;
using gft::random_mv;
using gft::random_spd;
using gft::random_vec;

static double dist(const Multivector& a, const Multivector& b) { return (a - b).norm(); }

TEST_CASE("wedge basics") {
  Basis b(4);
  auto e1 = monomial(b, {1}), e2 = monomial(b, {2}), e3 = monomial(b, {3});
  CHECK(wedge(e1, e1).norm() == 0.0);
  CHECK(dist(wedge(e1, e2), wedge(e2, e1) * -1.0) == 0.0);
  CHECK(dist(wedge(e1 + e2, e3), wedge(e1, e3) + wedge(e2, e3)) == 0.0);
  // unsorted input picks up the permutation sign
  CHECK(dist(monomial(b, {2, 1}), wedge(e2, e1)) == 0.0);
}

TEST_CASE("wedge graded commutativity and associativity") {
  Basis b(5);
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    int p = int(rng() % 4), q = int(rng() % 4);
    Multivector a(b), c(b);
    for (int k = 0; k < b.dim(); ++k) {
      if (popcount(uint32_t(k)) == p) a.c[k] = gft::random_vec(1, rng)[0];
      if (popcount(uint32_t(k)) == q) c.c[k] = gft::random_vec(1, rng)[0];
    }
    double sign = (p * q % 2) ? -1.0 : 1.0;
    CHECK(dist(wedge(a, c), wedge(c, a) * sign) < 1e-12);
    Multivector d = random_mv(b, rng);
    CHECK(dist(wedge(wedge(a, c), d), wedge(a, wedge(c, d))) < 1e-10);
  }
}

TEST_CASE("interior is the dual pairing on degree one") {
  Basis b(3);
  VectorXcd v1 = VectorXcd::Zero(3), v2 = VectorXcd::Zero(3);
  v1[0] = 1.0;
  v2[1] = 1.0;
  CHECK(interior(v1, monomial(b, {1}))[0] == cplx(1.0));
  CHECK(interior(v1, monomial(b, {1, 2})).c[2] == cplx(1.0));
  CHECK(interior(v2, monomial(b, {1})).norm() == 0.0);
}

TEST_CASE("interior squares to zero and is an antiderivation") {
  Basis b(6);
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    VectorXcd v = random_vec(6, rng).cast<cplx>();
    Multivector a = random_mv(b, rng);
    CHECK(interior(v, interior(v, a)).norm() < 1e-12);
    // check the graded Leibniz rule on homogeneous left factors
    for (int p = 0; p <= 3; ++p) {
      Multivector ap = grade_part(a, p);
      Multivector c = random_mv(b, rng);
      double sign = (p % 2) ? -1.0 : 1.0;
      Multivector lhs = interior(v, wedge(ap, c));
      Multivector rhs = wedge(interior(v, ap), c) + wedge(ap, interior(v, c)) * sign;
      CHECK(dist(lhs, rhs) < 1e-10);
    }
  }
}

TEST_CASE("hodge star on the standard basis") {
  Basis b(4);
  CHECK(dist(hodge_star(scalar_mv(b, 1.0)), monomial(b, {1, 2, 3, 4})) == 0.0);
  CHECK(dist(hodge_star(monomial(b, {1})), monomial(b, {2, 3, 4})) == 0.0);
  std::mt19937_64 rng(13);
  for (int k = 0; k <= 4; ++k) {
    Multivector a = grade_part(random_mv(b, rng), k);
    double sign = (k * (4 - k) % 2) ? -1.0 : 1.0;
    CHECK(dist(hodge_star(hodge_star(a)), a * sign) < 1e-12);
  }
  Basis b7(7);
  Multivector a7 = random_mv(b7, rng);
  CHECK(dist(hodge_star(hodge_star(a7)), a7) < 1e-12);
}

TEST_CASE("hodge star defining identity with a general metric") {
  std::mt19937_64 rng(14);
  for (int n : {3, 4}) {
    Basis b(n, random_spd(n, rng));
    double vol = std::sqrt(b.metric.determinant());
    for (int rep = 0; rep < 5; ++rep) {
      Multivector x = random_mv(b, rng), y = random_mv(b, rng);
      Multivector w = wedge(x, hodge_star(y));
      cplx expect = lambda_inner(x, y) * vol;
      CHECK(std::abs(w.c[b.dim() - 1] - expect) < 1e-9);
      // star preserves the induced inner product
      CHECK(std::abs(lambda_inner(hodge_star(x), hodge_star(y)) - lambda_inner(x, y)) < 1e-9);
    }
  }
}

TEST_CASE("induced inner product is positive definite") {
  std::mt19937_64 rng(15);
  Basis b(4, random_spd(4, rng));
  for (int rep = 0; rep < 10; ++rep) {
    Multivector a = random_mv(b, rng);
    cplx q = lambda_inner(a, a);
    CHECK(q.real() > 0.0);
    CHECK(std::abs(q.imag()) < 1e-10);
  }
}

TEST_CASE("pullback is functorial and multiplicative") {
  Basis b(4);
  std::mt19937_64 rng(16);
  for (int rep = 0; rep < 10; ++rep) {
    MatrixXd g = random_mat(4, 4, rng) + 3.0 * MatrixXd::Identity(4, 4);
    MatrixXd h = random_mat(4, 4, rng) + 3.0 * MatrixXd::Identity(4, 4);
    Multivector a = random_mv(b, rng), c = random_mv(b, rng);
    CHECK(dist(pullback(MatrixXd::Identity(4, 4), a), a) < 1e-14);
    CHECK(dist(pullback(g * h, a), pullback(h, pullback(g, a))) < 1e-12);
    CHECK(dist(pullback(g, wedge(a, c)), wedge(pullback(g, a), pullback(g, c))) < 1e-10);
  }
  double lam = 1.7;
  Multivector m2 = monomial(b, {1, 3});
  CHECK(dist(pullback(lam * MatrixXd::Identity(4, 4), m2), m2 * std::pow(lam, -2)) < 1e-12);
}

TEST_CASE("grade projection and top grade") {
  Basis b(4);
  Multivector a = monomial(b, {1}) + monomial(b, {1, 2}) * 2.0;
  CHECK(grade_part(a, 1).norm() == 1.0);
  CHECK(top_grade(a) == 2);
  CHECK(top_grade(scalar_mv(b, 1.0)) == 0);
}

TEST_CASE("json round trip is bit exact") {
  std::mt19937_64 rng(17);
  Basis b(5);
  Multivector a = random_mv(b, rng, true);
  a.c[7] = 0.0;  // leave a hole
  Multivector back = multivector_from_json(to_json(a));
  REQUIRE(back.basis.n == 5);
  for (int k = 0; k < b.dim(); ++k) {
    CHECK(back.c[k].real() == a.c[k].real());
    CHECK(back.c[k].imag() == a.c[k].imag());
  }
  FormTuple t(b, 3);
  for (auto& m : t.comps) m = random_mv(b, rng, true);
  t.reality = false;
  FormTuple tback = formtuple_from_json(to_json(t));
  REQUIRE(tback.l() == 3);
  CHECK(tback.reality == false);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < b.dim(); ++k) CHECK(tback.comps[i].c[k] == t.comps[i].c[k]);
}

TEST_CASE("form tuple flatten and split views") {
  Basis b(3);
  std::mt19937_64 rng(18);
  FormTuple t(b, 2);
  t.comps[0] = random_mv(b, rng, true);
  t.comps[1] = random_mv(b, rng, true);
  t.reality = false;
  VectorXcd f = t.flatten();
  FormTuple u = FormTuple::unflatten(b, 2, f);
  CHECK((u.flatten() - f).norm() == 0.0);
  VectorXd rv = t.real_view();
  CHECK(rv.size() == 2 * f.size());
  CHECK((rv.head(f.size()) - f.real()).norm() == 0.0);
}
