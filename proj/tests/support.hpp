#pragma once

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <random>
#include <vector>

#include "cliffsolve/multivector.hpp"
#include "cliffsolve/signature.hpp"
#include "cliffsolve/tetrad.hpp"

namespace cliffsolve::testing {

// Naive blade product: concatenate the two ascending index lists, bubble-sort
// counting adjacent swaps, then contract equal neighbours against the metric.
// Deliberately slow and obvious; the shipped shift-and-popcount version is
// checked against this exhaustively for small n.
inline BladeProduct oracle_blade_product(BladeMask a, BladeMask b,
                                         const Signature& sig) {
  std::vector<int> idx;
  for (int i = 1; i <= sig.n(); ++i)
    if (a & (BladeMask{1} << (i - 1))) idx.push_back(i);
  for (int i = 1; i <= sig.n(); ++i)
    if (b & (BladeMask{1} << (i - 1))) idx.push_back(i);

  int sign = 1;
  for (std::size_t pass = 0; pass + 1 < idx.size() || pass == 0; ++pass) {
    bool swapped = false;
    for (std::size_t j = 0; j + 1 < idx.size(); ++j) {
      if (idx[j] > idx[j + 1]) {
        std::swap(idx[j], idx[j + 1]);
        sign = -sign;
        swapped = true;
      }
    }
    if (!swapped) break;
  }

  for (std::size_t j = 0; j + 1 < idx.size();) {
    if (idx[j] == idx[j + 1]) {
      sign *= sig.metric(idx[j]);
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(j),
                idx.begin() + static_cast<std::ptrdiff_t>(j) + 2);
      if (j > 0) --j;
    } else {
      ++j;
    }
  }

  BladeMask mask = 0;
  for (int i : idx) mask |= BladeMask{1} << (i - 1);
  return {sign, mask};
}

inline Multivector random_multivector(Signature sig, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Multivector u(sig);
  for (BladeMask m = 0; m < u.dim(); ++m) u[m] = Complex{unit(rng), unit(rng)};
  return u;
}

// Proper orthochronous by construction: exp(A eta) with A antisymmetric
// satisfies y eta y^T = eta and is connected to the identity.
inline Tetrad random_tetrad(Signature sig, std::mt19937_64& rng,
                            double scale = 0.4) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int n = sig.n();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = scale * unit(rng);
      a(i, j) = v;
      a(j, i) = -v;
    }
  Eigen::MatrixXd g = a;
  for (int j = 1; j <= n; ++j) g.col(j - 1) *= sig.metric(j);
  return Tetrad(sig, g.exp());
}

}  // namespace cliffsolve::testing
