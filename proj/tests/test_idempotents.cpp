#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cliffsolve/error.hpp"
#include "cliffsolve/idempotent.hpp"
#include "cliffsolve/matrix_rep.hpp"
#include "cliffsolve/multivector.hpp"
#include "support.hpp"

using namespace cliffsolve;
using cliffsolve::testing::random_multivector;

TEST_CASE("hermitian idempotent recognition") {
  const Signature sig = make_signature(1, 3);
  CHECK(is_hermitian_idempotent(Multivector::identity(sig)).ok);
  CHECK(is_hermitian_idempotent(Multivector::zero(sig)).ok);

  Multivector t1 = parse_multivector(
      "0.25*e + 0.25*e^1 + 0.25i*e^23 + 0.25i*e^123", sig);
  CHECK(is_hermitian_idempotent(t1).ok);

  auto bad = is_hermitian_idempotent(Multivector::generator(sig, 1));
  CHECK(!bad.ok);
  CHECK(bad.idempotency_residual == 1.0);  // (e^1)^2 - e^1 has unit blades
  CHECK(bad.hermiticity_residual == 0.0);

  CHECK_THROWS_AS(HermitianIdempotent(Multivector::generator(sig, 1)), Error);
}

TEST_CASE("the five canonical projectors") {
  auto ts = canonical_idempotents();
  REQUIRE(ts.size() == 5);
  const Signature sig = make_signature(1, 3);

  CHECK(ts[0].value() == Multivector::zero(sig));
  CHECK(ts[2].value() == parse_multivector("0.5*e + 0.5*e^1", sig));
  CHECK(ts[3].value() == parse_multivector(
                             "0.75*e + 0.25*e^1 + 0.25i*e^23 - 0.25i*e^123", sig));
  CHECK(ts[4].value() == Multivector::identity(sig));

  const GammaSet g = build_gamma(4);
  for (int k = 0; k <= 4; ++k) {
    const Multivector& t = ts[k].value();
    CHECK(t * t == t);  // dyadic coefficients: exact
    CHECK(hermitian_conjugate(t) == t);
    CHECK(ts[k].type() == k);
    Complex tr = rep(t, g).trace();
    CHECK(std::abs(tr - Complex{double(k), 0.0}) <= 1e-15);
  }
  CHECK_THROWS_AS(canonical_idempotent(5), Error);
}

TEST_CASE("dual projector") {
  auto ts = canonical_idempotents();
  const Signature sig = make_signature(1, 3);
  CHECK(dual(ts[4]).value() == Multivector::zero(sig));
  CHECK(dual(ts[2]).value() == parse_multivector("0.5*e - 0.5*e^1", sig));
  for (const auto& t : ts) {
    HermitianIdempotent d = dual(t);
    CHECK(d.type() == 4 - t.type());
    CHECK(dual(d).value() == t.value());
    CHECK(t.value() * d.value() == Multivector::zero(sig));
    CHECK(d.value() * t.value() == Multivector::zero(sig));
    CHECK(t.value() + d.value() == Multivector::identity(sig));
  }
}

TEST_CASE("cached right-multiplication operators") {
  HermitianIdempotent t = canonical_idempotent(2);
  const Eigen::MatrixXcd& r = t.right_op();
  CHECK((r * r - r).cwiseAbs().maxCoeff() == 0.0);
  CHECK((t.right_op().data() == r.data()));  // same cached object
  CHECK((r + t.dual_right_op() -
         Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(401);
  Multivector u = random_multivector(t.sig(), rng);
  Multivector ut = u * t.value();
  Eigen::VectorXcd c(16);
  for (BladeMask m = 0; m < 16; ++m) c[m] = u[m];
  Eigen::VectorXcd proj = r * c;
  for (BladeMask m = 0; m < 16; ++m) CHECK(std::abs(proj[m] - ut[m]) <= 1e-15);
}

TEST_CASE("membership in I, K, L, G") {
  auto ts = canonical_idempotents();
  const Signature sig = make_signature(1, 3);
  std::mt19937_64 rng(402);

  for (const auto& t : ts) {
    CHECK(membership(t.value(), t, IdealSet::I).ok);
    CHECK(membership(t.value(), t, IdealSet::K).ok);
    CHECK(membership(Multivector::identity(sig), t, IdealSet::G).ok);
  }

  // i * t2 is anti-Hermitian and two-sided: a pinned element of L(t2)
  HermitianIdempotent t2 = canonical_idempotent(2);
  Multivector u = Complex{0.0, 1.0} * t2.value();
  CHECK(membership(u, t2, IdealSet::L).ok);
  CHECK(!membership(t2.value(), t2, IdealSet::L).ok);  // Hermitian, not anti

  // I(t) absorbs arbitrary left factors
  for (const auto& t : ts)
    for (int k = 0; k < 20; ++k) {
      Multivector a = random_multivector(sig, rng);
      Multivector v = random_multivector(sig, rng) * t.value();
      CHECK(membership(v, t, IdealSet::I).ok);
      CHECK(membership(a * v, t, IdealSet::I).ok);
      // right factors from K(t) stay inside as well
      Multivector kx = t.value() * random_multivector(sig, rng) * t.value();
      CHECK(membership(v * kx, t, IdealSet::I).ok);
    }
}

TEST_CASE("L(t) sampling and commutator closure") {
  std::mt19937_64 rng(403);
  for (const auto& t : canonical_idempotents()) {
    for (int k = 0; k < 20; ++k) {
      Multivector l1 = sample_L(t, rng);
      Multivector l2 = sample_L(t, rng);
      CHECK(membership(l1, t, IdealSet::L).ok);
      Multivector comm = l1 * l2 - l2 * l1;
      CHECK(membership(comm, t, IdealSet::L).ok);
    }
  }
  HermitianIdempotent t0 = canonical_idempotent(0);
  CHECK(max_norm(sample_L(t0, rng)) == 0.0);
}

TEST_CASE("decomposition into the ideal and its dual") {
  const Signature sig = make_signature(1, 3);
  HermitianIdempotent t2 = canonical_idempotent(2);
  std::mt19937_64 rng(404);

  auto [phi_e, rest_e] = decompose(Multivector::identity(sig), t2);
  CHECK(phi_e == t2.value());
  CHECK(rest_e == dual(t2).value());

  Multivector member = random_multivector(sig, rng) * t2.value();
  auto [phi_m, rest_m] = decompose(member, t2);
  CHECK(approx_equal(phi_m, member, 1e-13));
  CHECK(max_norm(rest_m) <= 1e-13);

  for (const auto& t : canonical_idempotents())
    for (int k = 0; k < 25; ++k) {
      Multivector psi = random_multivector(sig, rng);
      auto [phi, rest] = decompose(psi, t);
      // rest = psi - phi, so re-adding phi can round by at most 1 ulp
      CHECK(max_norm(phi + rest - psi) <= 3e-16);
      CHECK(membership(phi, t, IdealSet::I).ok);
      CHECK(membership(rest, dual(t), IdealSet::I).ok);
      CHECK(max_norm(phi * dual(t).value()) <= 1e-13);
      CHECK(max_norm(rest * t.value()) <= 1e-13);
    }
}

TEST_CASE("exponential map lands in the unitary group") {
  const Signature sig = make_signature(1, 3);
  HermitianIdempotent t2 = canonical_idempotent(2);
  const Multivector e = Multivector::identity(sig);

  CHECK(exp_to_G(Multivector::zero(sig), t2) == e);

  // exp(i theta t) = e + (e^{i theta} - 1) t for an idempotent t
  const double theta = 0.7;
  Multivector l = Complex{0.0, theta} * t2.value();
  Multivector u = exp_to_G(l, t2);
  Multivector want = e + (std::exp(Complex{0.0, theta}) - Complex{1.0, 0.0}) *
                             t2.value();
  CHECK(approx_equal(u, want, 1e-14));
  CHECK(membership(u, t2, IdealSet::G).ok);

  CHECK_THROWS_AS(exp_to_G(Multivector::generator(sig, 1), t2), Error);

  std::mt19937_64 rng(405);
  for (const auto& t : canonical_idempotents())
    for (int k = 0; k < 10; ++k) {
      Multivector lk = sample_L(t, rng);
      Multivector uk = exp_to_G(lk, t);
      CHECK(max_norm(hermitian_conjugate(uk) * uk - e) <= 1e-12);
      CHECK(membership(uk, t, IdealSet::G).ok);
      // large argument exercises the squaring path
      Multivector big = exp_to_G(8.0 * lk, t);
      CHECK(max_norm(hermitian_conjugate(big) * big - e) <= 5e-12);
    }
}

TEST_CASE("group closure under product and adjoint inverse") {
  std::mt19937_64 rng(406);
  const Signature sig = make_signature(1, 3);
  const Multivector e = Multivector::identity(sig);
  for (const auto& t : canonical_idempotents())
    for (int k = 0; k < 10; ++k) {
      Multivector u1 = exp_to_G(sample_L(t, rng), t);
      Multivector u2 = exp_to_G(sample_L(t, rng), t);
      CHECK(membership(u1 * u2, t, IdealSet::G).ok);
      Multivector inv = hermitian_conjugate(u1);
      CHECK(max_norm(u1 * inv - e) <= 1e-12);
      CHECK(max_norm(inv * u1 - e) <= 1e-12);
      CHECK(membership(inv, t, IdealSet::G).ok);
    }
}
