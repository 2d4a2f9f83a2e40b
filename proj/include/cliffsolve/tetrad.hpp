#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "cliffsolve/multivector.hpp"
#include "cliffsolve/signature.hpp"

namespace cliffsolve {

struct TetradValidation {
  bool valid;
  double max_deviation;  // max |(y eta y^T - eta)_{mu nu}|
};

// Passes iff y eta y^T = eta within 1e-12.
TetradValidation validate_tetrad(const Eigen::MatrixXd& y, Signature sig);

std::size_t binomial(int n, int k);

// Ascending index tuples (1-based) of length k drawn from 1..n, lexicographic.
// For k >= 2 this is NOT the numeric order of the corresponding blade masks.
std::vector<std::vector<int>> ascending_tuples(int n, int k);

BladeMask tuple_to_mask(std::span<const int> tuple);

// Frame matrix y^mu_a (row mu = coordinate, column a = generator) with
// y eta y^T = eta, so the genvectors h^mu = y^mu_a e^a obey the same
// anticommutation relations as the e^a. Validated on construction.
// Copies share the lazily built per-grade wedge-basis cache.
class Tetrad {
 public:
  Tetrad(Signature sig, Eigen::MatrixXd y);

  static Tetrad identity(Signature sig);
  static Tetrad boost(double chi);  // (1,1): [[cosh,sinh],[sinh,cosh]]

  const Signature& sig() const { return sig_; }
  int n() const { return sig_.n(); }
  const Eigen::MatrixXd& matrix() const { return y_; }

  // Basis-change block for grade k: entry (A_pos, M_pos) is the k x k minor
  // det(y[M, A]), rows M, columns A, both tuple-lex ordered. Built on first
  // use, write-once, shared across copies.
  const Eigen::MatrixXd& wedge_block(int k) const;
  const Eigen::PartialPivLU<Eigen::MatrixXd>& wedge_block_lu(int k) const;

 private:
  struct BasisCache;
  Signature sig_;
  Eigen::MatrixXd y_;
  std::shared_ptr<BasisCache> cache_;
};

// h^mu = y^mu_a e^a, mu in 1..n.
Multivector genvector(const Tetrad& y, int mu);

// Antisymmetric tensor components u_{mu1...muk}, one per ascending tuple,
// grade k slot ordered like ascending_tuples(n, k).
struct TensorComponents {
  Signature sig;
  std::vector<std::vector<Complex>> by_grade;

  static TensorComponents zero(Signature sig);
  Complex& at(std::span<const int> indices);
  const Complex& at(std::span<const int> indices) const;
  Complex& at(std::initializer_list<int> indices) {
    return at(std::span<const int>(indices.begin(), indices.size()));
  }
  const Complex& at(std::initializer_list<int> indices) const {
    return at(std::span<const int>(indices.begin(), indices.size()));
  }
};

// U = u e + sum_k sum_{mu1<...<muk} u_{mu1...muk} h^{mu1}^...^h^{muk}.
Multivector from_tensors(const TensorComponents& c, const Tetrad& y);

// Inverse of from_tensors (per-grade linear solve against the minor blocks).
TensorComponents to_tensors(const Multivector& u, const Tetrad& y);

}  // namespace cliffsolve
