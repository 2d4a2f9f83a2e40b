#pragma once

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cliffsolve/signature.hpp"

namespace cliffsolve {

using Complex = std::complex<double>;

enum class Parity { Even, Odd };

inline Parity blade_parity(BladeMask m) {
  return (blade_grade(m) & 1) ? Parity::Odd : Parity::Even;
}

// Element of the complexified Clifford algebra C (x) Cl(r,s), stored as a
// dense vector of 2^n complex coefficients indexed by blade mask.
// Multivectors are immutable values in spirit: every operation returns a
// fresh object.
class Multivector {
 public:
  Multivector() = default;
  explicit Multivector(Signature sig);
  Multivector(Signature sig, std::vector<Complex> coeffs);

  static Multivector zero(Signature sig) { return Multivector(sig); }
  static Multivector scalar(Signature sig, Complex value);
  static Multivector identity(Signature sig) { return scalar(sig, 1.0); }
  static Multivector blade(Signature sig, BladeMask mask, Complex coeff = 1.0);
  // Generator e^a, a in 1..n.
  static Multivector generator(Signature sig, int a);

  const Signature& sig() const { return sig_; }
  int n() const { return sig_.n(); }
  std::size_t dim() const { return coeffs_.size(); }

  Complex& operator[](BladeMask m) { return coeffs_[m]; }
  const Complex& operator[](BladeMask m) const { return coeffs_[m]; }
  std::span<const Complex> coeffs() const { return coeffs_; }

  Multivector& operator+=(const Multivector& rhs);
  Multivector& operator-=(const Multivector& rhs);
  Multivector& operator*=(Complex c);

  friend Multivector operator+(Multivector lhs, const Multivector& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend Multivector operator-(Multivector lhs, const Multivector& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend Multivector operator-(Multivector u) {
    u *= -1.0;
    return u;
  }
  friend Multivector operator*(Multivector u, Complex c) {
    u *= c;
    return u;
  }
  friend Multivector operator*(Complex c, Multivector u) {
    u *= c;
    return u;
  }
  friend Multivector operator*(const Multivector& u, const Multivector& v);

  bool operator==(const Multivector& rhs) const = default;

 private:
  Signature sig_{};
  std::vector<Complex> coeffs_;
};

// Clifford product, bilinear extension of blade_product.
Multivector product(const Multivector& u, const Multivector& v);

// Exterior product: the grade-(p+q) part of the Clifford product on blades,
// i.e. the sum restricted to disjoint blade pairs.
Multivector wedge(const Multivector& u, const Multivector& v);

Multivector grade_project(const Multivector& u, int k);
Multivector parity_project(const Multivector& u, Parity p);

// Reversion: grade-k coefficients pick up (-1)^{k(k-1)/2}.
Multivector reverse(const Multivector& u);
Multivector complex_conjugate(const Multivector& u);

enum class Involution { Reverse, ComplexConjugate };
Multivector involution(const Multivector& u, Involution kind);

// V^dagger = beta * reverse(conj(V)) * beta with beta = e^1.
// Requires signature (1, n-1).
Multivector hermitian_conjugate(const Multivector& u);

double max_norm(const Multivector& u);
bool approx_equal(const Multivector& a, const Multivector& b, double tol);

// Text form: "coef*e^{indices}" terms joined by " + ", e.g.
// "0.5*e + 0.5*e^1", "(0.25+0.25i)*e^23". Round-trips exactly for decimal
// literals. Parsing accepts bare blades ("e^12"), bare "i", and braced
// index lists ("e^{10,11}").
std::string to_string(const Multivector& u);
Multivector parse_multivector(std::string_view text, Signature sig);

std::string format_double(double x);  // %.17g
std::string format_complex(Complex c);

}  // namespace cliffsolve
