#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cliffsolve/error.hpp"
#include "cliffsolve/multivector.hpp"
#include "cliffsolve/signature.hpp"
#include "support.hpp"

using namespace cliffsolve;
using cliffsolve::testing::oracle_blade_product;
using cliffsolve::testing::random_multivector;

TEST_CASE("signature validation") {
  CHECK(make_signature(1, 3).n() == 4);
  CHECK(make_signature(1, 3).dim() == 16);
  CHECK(make_signature(1, 1).is_lorentzian());
  CHECK(make_signature(0, 2).metric(1) == -1);
  CHECK(make_signature(2, 0).metric(2) == +1);
  CHECK_THROWS_AS(make_signature(0, 0), Error);
  CHECK_THROWS_AS(make_signature(-1, 2), Error);
  CHECK_THROWS_AS(make_signature(7, 6), Error);
  CHECK_NOTHROW(make_signature(6, 6));
}

TEST_CASE("blade product pinned cases") {
  const Signature sig = make_signature(1, 3);
  SUBCASE("disjoint ascending blades, no swaps") {
    auto [c, m] = blade_product(0b0001, 0b0010, sig);  // e^1 e^2
    CHECK(c == +1);
    CHECK(m == 0b0011);
  }
  SUBCASE("contraction picks up the metric") {
    auto [c, m] = blade_product(0b0010, 0b0010, sig);  // e^2 e^2
    CHECK(c == -1);
    CHECK(m == 0);
  }
  SUBCASE("one transposition then contraction") {
    auto [c, m] = blade_product(0b0011, 0b0010, sig);  // e^12 e^2
    CHECK(c == -1);
    CHECK(m == 0b0001);
  }
}

TEST_CASE("blade product matches the naive oracle exhaustively") {
  for (auto [r, s] : {std::pair{1, 1}, {1, 3}, {2, 2}, {0, 3}, {3, 0}, {1, 4}}) {
    const Signature sig = make_signature(r, s);
    for (BladeMask a = 0; a < sig.dim(); ++a)
      for (BladeMask b = 0; b < sig.dim(); ++b) {
        auto got = blade_product(a, b, sig);
        auto want = oracle_blade_product(a, b, sig);
        CHECK(got.sign == want.sign);
        CHECK(got.mask == want.mask);
      }
  }
}

TEST_CASE("defining relations are exact") {
  const Signature sig = make_signature(1, 3);
  for (int a = 1; a <= sig.n(); ++a)
    for (int b = 1; b <= sig.n(); ++b) {
      const Multivector ea = Multivector::generator(sig, a);
      const Multivector eb = Multivector::generator(sig, b);
      Multivector anti = ea * eb + eb * ea;
      Multivector want = Multivector::zero(sig);
      if (a == b) want[0] = 2.0 * sig.metric(a);
      CHECK(anti == want);
    }
}

TEST_CASE("unit element and bilinearity") {
  const Signature sig = make_signature(1, 3);
  std::mt19937_64 rng(2024);
  const Multivector e = Multivector::identity(sig);
  for (int k = 0; k < 8; ++k) {
    Multivector u = random_multivector(sig, rng);
    CHECK(e * u == u);
    CHECK(u * e == u);
  }
  Multivector u = random_multivector(sig, rng);
  Multivector v = random_multivector(sig, rng);
  Multivector w = random_multivector(sig, rng);
  CHECK(approx_equal(u * (v + w), u * v + u * w, 1e-13));
}

TEST_CASE("idempotent square pinned value") {
  const Signature sig = make_signature(1, 3);
  Multivector p = Multivector::identity(sig) + Multivector::generator(sig, 1);
  CHECK(p * p == 2.0 * p);  // dyadic coefficients, exact
}

TEST_CASE("associativity over random triples") {
  const Signature sig = make_signature(1, 3);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 1000; ++k) {
    Multivector u = random_multivector(sig, rng);
    Multivector v = random_multivector(sig, rng);
    Multivector w = random_multivector(sig, rng);
    double scale = std::max({1.0, max_norm(u) * max_norm(v) * max_norm(w)});
    CHECK(approx_equal((u * v) * w, u * (v * w), 1e-13 * scale));
  }
}

TEST_CASE("wedge is the disjoint part and is alternating") {
  const Signature sig = make_signature(1, 3);
  const Multivector e1 = Multivector::generator(sig, 1);
  const Multivector e2 = Multivector::generator(sig, 2);
  CHECK(wedge(e1, e2) == Multivector::blade(sig, 0b0011));
  CHECK(wedge(e2, e1) == Multivector::blade(sig, 0b0011, -1.0));
  CHECK(wedge(e1, e1) == Multivector::zero(sig));
  CHECK(wedge(e2, e2) == Multivector::zero(sig));

  std::mt19937_64 rng(11);
  Multivector a(sig), b(sig);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 1; i <= sig.n(); ++i) {
    a += Multivector::generator(sig, i) * Complex{unit(rng), 0.0};
    b += Multivector::generator(sig, i) * Complex{unit(rng), 0.0};
  }
  CHECK(approx_equal(wedge(a, b), -wedge(b, a), 1e-14));
  // on vectors, uv = u.v + u^v with the symmetric part scalar
  Multivector sym = a * b + b * a;
  for (BladeMask m = 1; m < sig.dim(); ++m) CHECK(std::abs(sym[m]) == 0.0);
  CHECK(approx_equal(a * b - wedge(a, b),
                     Multivector::scalar(sig, sym[0] / 2.0), 1e-14));
}

TEST_CASE("grade and parity projections partition the element") {
  const Signature sig = make_signature(1, 3);
  std::mt19937_64 rng(3);
  Multivector u = random_multivector(sig, rng);
  Multivector sum = Multivector::zero(sig);
  for (int k = 0; k <= sig.n(); ++k) sum += grade_project(u, k);
  CHECK(sum == u);
  CHECK(parity_project(u, Parity::Even) + parity_project(u, Parity::Odd) == u);
  CHECK_THROWS_AS(grade_project(u, 5), Error);
}

TEST_CASE("reverse and conjugate are involutive anti-automorphisms") {
  const Signature sig = make_signature(1, 3);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    Multivector u = random_multivector(sig, rng);
    Multivector v = random_multivector(sig, rng);
    CHECK(reverse(reverse(u)) == u);
    CHECK(complex_conjugate(complex_conjugate(u)) == u);
    double scale = std::max(1.0, max_norm(u) * max_norm(v));
    CHECK(approx_equal(reverse(u * v), reverse(v) * reverse(u), 1e-13 * scale));
    CHECK(complex_conjugate(u * v) ==
          product(complex_conjugate(u), complex_conjugate(v)));
  }
  // reverse signs by grade: +,+,-,-,+ pattern
  CHECK(reverse(Multivector::generator(sig, 2)) == Multivector::generator(sig, 2));
  CHECK(reverse(Multivector::blade(sig, 0b0011)) ==
        Multivector::blade(sig, 0b0011, -1.0));
  CHECK(reverse(Multivector::blade(sig, 0b0111)) ==
        Multivector::blade(sig, 0b0111, -1.0));
  CHECK(reverse(Multivector::blade(sig, 0b1111)) == Multivector::blade(sig, 0b1111));
}

TEST_CASE("hermitian conjugation pinned values") {
  const Signature sig = make_signature(1, 3);
  const Multivector e1 = Multivector::generator(sig, 1);
  const Multivector e2 = Multivector::generator(sig, 2);
  CHECK(hermitian_conjugate(e1) == e1);
  CHECK(hermitian_conjugate(e2) == -e2);
  // i*e^23 is Hermitian: reversion and conjugation each flip, beta commutes past
  Multivector u = Multivector::blade(sig, 0b0110, Complex{0.0, 1.0});
  CHECK(hermitian_conjugate(u) == u);
}

TEST_CASE("hermitian conjugation laws") {
  const Signature sig = make_signature(1, 3);
  std::mt19937_64 rng(13);
  for (int k = 0; k < 50; ++k) {
    Multivector u = random_multivector(sig, rng);
    Multivector v = random_multivector(sig, rng);
    CHECK(hermitian_conjugate(hermitian_conjugate(u)) == u);
    double scale = std::max(1.0, max_norm(u) * max_norm(v));
    CHECK(approx_equal(hermitian_conjugate(u * v),
                       hermitian_conjugate(v) * hermitian_conjugate(u),
                       1e-13 * scale));
  }
  CHECK_THROWS_AS(hermitian_conjugate(
                      Multivector::identity(make_signature(2, 2))),
                  Error);
}

TEST_CASE("positivity seed: adjoint blade times blade is plus e") {
  for (auto [r, s] : {std::pair{1, 1}, {1, 2}, {1, 3}, {1, 4}}) {
    const Signature sig = make_signature(r, s);
    for (BladeMask m = 0; m < sig.dim(); ++m) {
      Multivector b = Multivector::blade(sig, m);
      CHECK(hermitian_conjugate(b) * b == Multivector::identity(sig));
    }
  }
}

TEST_CASE("involution dispatcher") {
  const Signature sig = make_signature(1, 3);
  std::mt19937_64 rng(17);
  Multivector u = random_multivector(sig, rng);
  CHECK(involution(u, Involution::Reverse) == reverse(u));
  CHECK(involution(u, Involution::ComplexConjugate) == complex_conjugate(u));
}

TEST_CASE("text rendering") {
  const Signature sig = make_signature(1, 3);
  CHECK(to_string(Multivector::zero(sig)) == "0");
  CHECK(to_string(Multivector::identity(sig)) == "1*e");
  Multivector u(sig);
  u[0] = 0.5;
  u[0b0001] = 0.5;
  CHECK(to_string(u) == "0.5*e + 0.5*e^1");
  Multivector v(sig);
  v[0b0110] = Complex{0.0, 0.25};
  v[0b0111] = Complex{1.0, -2.0};
  CHECK(to_string(v) == "0.25i*e^23 + (1-2i)*e^123");
}

TEST_CASE("parsing accepts the documented forms") {
  const Signature sig = make_signature(1, 3);
  Multivector t1(sig);
  t1[0] = 0.25;
  t1[0b0001] = 0.25;
  t1[0b0110] = Complex{0.0, 0.25};
  t1[0b0111] = Complex{0.0, 0.25};
  CHECK(parse_multivector("0.25*e + 0.25*e^1 + 0.25i*e^23 + 0.25i*e^123", sig) == t1);

  CHECK(parse_multivector("e", sig) == Multivector::identity(sig));
  CHECK(parse_multivector("-e^12", sig) == Multivector::blade(sig, 0b0011, -1.0));
  CHECK(parse_multivector("i", sig) == Multivector::scalar(sig, Complex{0.0, 1.0}));
  CHECK(parse_multivector("i*e^2", sig) ==
        Multivector::blade(sig, 0b0010, Complex{0.0, 1.0}));
  CHECK(parse_multivector("(1.5-0.5i)*e^14", sig) ==
        Multivector::blade(sig, 0b1001, Complex{1.5, -0.5}));
  CHECK(parse_multivector("2*e^1 - 2*e^1", sig) == Multivector::zero(sig));
  CHECK(parse_multivector(" 3 ", sig) == Multivector::scalar(sig, 3.0));

  const Signature big = make_signature(1, 10);
  CHECK(parse_multivector("e^{10,11}", big) ==
        Multivector::blade(big, (BladeMask{1} << 9) | (BladeMask{1} << 10)));
  CHECK(blade_name((BladeMask{1} << 9) | (BladeMask{1} << 10)) == "e^{10,11}");

  CHECK_THROWS_AS(parse_multivector("", sig), Error);
  CHECK_THROWS_AS(parse_multivector("e^5", sig), Error);
  CHECK_THROWS_AS(parse_multivector("e^11", sig), Error);
  CHECK_THROWS_AS(parse_multivector("1 +", sig), Error);
  CHECK_THROWS_AS(parse_multivector("q", sig), Error);
}

TEST_CASE("render/parse round-trip is exact") {
  const Signature sig = make_signature(1, 3);
  std::mt19937_64 rng(23);
  for (int k = 0; k < 200; ++k) {
    Multivector u = random_multivector(sig, rng);
    CHECK(parse_multivector(to_string(u), sig) == u);
  }
  const Signature big = make_signature(1, 10);
  std::mt19937_64 rng2(29);
  Multivector u = random_multivector(big, rng2);
  CHECK(parse_multivector(to_string(u), big) == u);
}
