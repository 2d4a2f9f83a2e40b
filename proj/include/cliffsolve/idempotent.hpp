#pragma once

#include <Eigen/Dense>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "cliffsolve/multivector.hpp"

namespace cliffsolve {

struct IdempotentCheck {
  bool ok;
  double idempotency_residual;  // max-norm of t*t - t
  double hermiticity_residual;  // max-norm of t^dagger - t
};

// true iff both residuals are <= 1e-13. Requires signature (1,n-1).
IdempotentCheck is_hermitian_idempotent(const Multivector& t);

// Constant projector t with t*t = t and t^dagger = t, plus its dual e - t.
// Right-multiplication matrices are built on first use and shared across
// copies (write-once).
class HermitianIdempotent {
 public:
  explicit HermitianIdempotent(Multivector t);

  const Multivector& value() const { return t_; }
  const Multivector& dual_value() const { return dual_; }
  const Signature& sig() const { return t_.sig(); }

  // trace of the matrix representation, i.e. 2^{n/2} * Re t_e; the five
  // canonical projectors in (1,3) have types 0..4. -1 when n is odd.
  int type() const { return type_; }

  const Eigen::MatrixXcd& right_op() const;       // U -> U t
  const Eigen::MatrixXcd& dual_right_op() const;  // U -> U (e - t)

 private:
  struct Cache;
  Multivector t_;
  Multivector dual_;
  int type_;
  std::shared_ptr<Cache> cache_;
};

HermitianIdempotent dual(const HermitianIdempotent& t);

// The five projector types of C (x) Cl(1,3), index k = type = rank:
// 0, 1/4(e+e^1+ie^23+ie^123), 1/2(e+e^1), 1/4(3e+e^1+ie^23-ie^123), e.
// Coefficients are dyadic, so t*t = t holds exactly.
std::vector<HermitianIdempotent> canonical_idempotents();
HermitianIdempotent canonical_idempotent(int k);

enum class IdealSet { I, K, L, G };

struct MembershipCheck {
  bool ok;
  double residual;  // worst defining-identity deviation, max-norm
};

// I: U t = U. K: also t U = U. L: in K and U^dagger = -U.
// G: U^dagger U = e and U - e in K. Tolerance 1e-12 relative to max(1, |U|).
MembershipCheck membership(const Multivector& u, const HermitianIdempotent& t,
                           IdealSet which);

// phi = Psi t and phi' = Psi - phi. phi' agrees with Psi t' to rounding,
// and phi + phi' rebuilds Psi up to one rounding of the final add
// (bitwise on dyadic data such as the canonical projectors).
std::pair<Multivector, Multivector> decompose(const Multivector& psi,
                                              const HermitianIdempotent& t);

// exp(l) by scaled squaring of the power series; throws unless l is in L(t).
// The result lies in G(t).
Multivector exp_to_G(const Multivector& l, const HermitianIdempotent& t);

// Random element of L(t): project a random multivector into K(t) via
// x -> t x t, then anti-Hermitize.
Multivector sample_L(const HermitianIdempotent& t, std::mt19937_64& rng);

}  // namespace cliffsolve
