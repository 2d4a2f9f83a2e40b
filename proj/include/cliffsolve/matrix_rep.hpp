#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cliffsolve/multivector.hpp"
#include "cliffsolve/signature.hpp"

namespace cliffsolve {

// Faithful N x N representation of C (x) Cl(1,n-1), N = 2^{n/2}, built by
// tensor-product doubling from the n=2 pair. gamma^1 is Hermitian, the rest
// anti-Hermitian, so rep(U^dagger) = rep(U)^dagger. Relations are verified
// at build time, not assumed.
struct GammaSet {
  Signature sig;
  int N = 0;
  std::vector<Eigen::MatrixXcd> gamma;  // gamma[a-1] for a in 1..n
};

GammaSet build_gamma(int n);

// Homomorphic extension: sum of coeff(A) * gamma^{a1}...gamma^{ak} over blades.
Eigen::MatrixXcd rep(const Multivector& u, const GammaSet& g);

enum class Side { Left, Right };

// Matrix of U -> AU (left) or U -> UA (right) on the 2^n blade coefficients.
Eigen::MatrixXcd mul_operator(const Multivector& a, Side side);

// Blade masks of one parity, ascending numeric order. This ordering defines
// the coordinate convention of every parity-restricted operator and state.
std::vector<BladeMask> parity_masks(Signature sig, Parity p);

// Principal submatrix on the given parity block. Throws if the operator has
// any coupling out of that block (it would not act on the subspace).
Eigen::MatrixXcd restrict_to_parity(const Eigen::MatrixXcd& full, Signature sig,
                                    Parity p);

// mul_operator followed by restrict_to_parity.
Eigen::MatrixXcd mul_operator(const Multivector& a, Side side, Parity restrict_to);

struct SpectralReport {
  bool is_hermitian;            // residual <= 1e-10
  double hermiticity_residual;  // max |M - M^dagger|
  double min_eigenvalue;        // of the Hermitian part
  double max_eigenvalue;
};

SpectralReport spectral_check(const Eigen::MatrixXcd& m);

}  // namespace cliffsolve
