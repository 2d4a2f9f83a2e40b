#include "cliffsolve/tetrad.hpp"

#include <cmath>
#include <mutex>
#include <optional>

#include "cliffsolve/error.hpp"

namespace cliffsolve {

namespace {
constexpr double kTetradTol = 1e-12;

Eigen::MatrixXd eta_matrix(Signature sig) {
  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(sig.n(), sig.n());
  for (int a = 1; a <= sig.n(); ++a) eta(a - 1, a - 1) = sig.metric(a);
  return eta;
}
}  // namespace

TetradValidation validate_tetrad(const Eigen::MatrixXd& y, Signature sig) {
  if (y.rows() != sig.n() || y.cols() != sig.n())
    throw Error("tetrad: expected " + std::to_string(sig.n()) + "x" +
                std::to_string(sig.n()) + " matrix, got " +
                std::to_string(y.rows()) + "x" + std::to_string(y.cols()));
  const Eigen::MatrixXd eta = eta_matrix(sig);
  const double dev = (y * eta * y.transpose() - eta).cwiseAbs().maxCoeff();
  return {dev <= kTetradTol, dev};
}

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t c = 1;
  for (int i = 0; i < k; ++i) c = c * static_cast<std::size_t>(n - i) / (i + 1);
  return c;
}

std::vector<std::vector<int>> ascending_tuples(int n, int k) {
  std::vector<std::vector<int>> out;
  out.reserve(binomial(n, k));
  std::vector<int> cur(static_cast<std::size_t>(std::max(k, 0)));
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i <= n - (k - depth) + 1; ++i) {
      cur[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 1, 0);
  return out;
}

BladeMask tuple_to_mask(std::span<const int> tuple) {
  BladeMask m = 0;
  for (int i : tuple) m |= BladeMask{1} << (i - 1);
  return m;
}

struct Tetrad::BasisCache {
  struct Block {
    Eigen::MatrixXd w;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  };
  std::mutex mu;
  std::vector<std::optional<Block>> blocks;  // indexed by grade
};

Tetrad::Tetrad(Signature sig, Eigen::MatrixXd y)
    : sig_(sig), y_(std::move(y)), cache_(std::make_shared<BasisCache>()) {
  auto report = validate_tetrad(y_, sig_);
  if (!report.valid)
    throw Error("tetrad: y eta y^T deviates from eta by " +
                format_double(report.max_deviation));
  cache_->blocks.resize(static_cast<std::size_t>(sig_.n()) + 1);
}

Tetrad Tetrad::identity(Signature sig) {
  return Tetrad(sig, Eigen::MatrixXd::Identity(sig.n(), sig.n()));
}

Tetrad Tetrad::boost(double chi) {
  Eigen::MatrixXd y(2, 2);
  y << std::cosh(chi), std::sinh(chi), std::sinh(chi), std::cosh(chi);
  return Tetrad(make_signature(1, 1), std::move(y));
}

const Eigen::MatrixXd& Tetrad::wedge_block(int k) const {
  if (k < 0 || k > n()) throw Error("wedge_block: grade out of range");
  auto& slot = cache_->blocks[static_cast<std::size_t>(k)];
  std::scoped_lock lock(cache_->mu);
  if (!slot) {
    const auto tuples = ascending_tuples(n(), k);
    const auto count = static_cast<Eigen::Index>(tuples.size());
    Eigen::MatrixXd w(count, count);
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index mi = 0; mi < count; ++mi) {
      for (Eigen::Index ai = 0; ai < count; ++ai) {
        for (int r = 0; r < k; ++r)
          for (int c = 0; c < k; ++c)
            sub(r, c) = y_(tuples[mi][r] - 1, tuples[ai][c] - 1);
        w(ai, mi) = k == 0 ? 1.0 : sub.determinant();
      }
    }
    slot.emplace();
    slot->lu.compute(w);
    slot->w = std::move(w);
  }
  return slot->w;
}

const Eigen::PartialPivLU<Eigen::MatrixXd>& Tetrad::wedge_block_lu(int k) const {
  wedge_block(k);
  return cache_->blocks[static_cast<std::size_t>(k)]->lu;
}

Multivector genvector(const Tetrad& y, int mu) {
  if (mu < 1 || mu > y.n())
    throw Error("genvector: index " + std::to_string(mu) + " out of range 1.." +
                std::to_string(y.n()));
  Multivector h(y.sig());
  for (int a = 1; a <= y.n(); ++a)
    h[BladeMask{1} << (a - 1)] = y.matrix()(mu - 1, a - 1);
  return h;
}

TensorComponents TensorComponents::zero(Signature sig) {
  TensorComponents c{sig, {}};
  c.by_grade.resize(static_cast<std::size_t>(sig.n()) + 1);
  for (int k = 0; k <= sig.n(); ++k)
    c.by_grade[static_cast<std::size_t>(k)].resize(binomial(sig.n(), k));
  return c;
}

namespace {
std::size_t tuple_position(Signature sig, std::span<const int> indices) {
  const int k = static_cast<int>(indices.size());
  if (k > sig.n()) throw Error("tensor component: too many indices");
  int prev = 0;
  for (int i : indices) {
    if (i <= prev || i > sig.n())
      throw Error("tensor component: indices must be strictly increasing in 1.." +
                  std::to_string(sig.n()));
    prev = i;
  }
  // lexicographic rank of the ascending tuple
  std::size_t pos = 0;
  int start = 1;
  for (int d = 0; d < k; ++d) {
    for (int i = start; i < indices[static_cast<std::size_t>(d)]; ++i)
      pos += binomial(sig.n() - i, k - d - 1);
    start = indices[static_cast<std::size_t>(d)] + 1;
  }
  return pos;
}
}  // namespace

Complex& TensorComponents::at(std::span<const int> indices) {
  return by_grade[indices.size()][tuple_position(sig, indices)];
}

const Complex& TensorComponents::at(std::span<const int> indices) const {
  return by_grade[indices.size()][tuple_position(sig, indices)];
}

Multivector from_tensors(const TensorComponents& c, const Tetrad& y) {
  if (!(c.sig == y.sig())) throw Error("from_tensors: signature mismatch");
  if (c.by_grade.size() != static_cast<std::size_t>(y.n()) + 1)
    throw Error("from_tensors: component set has wrong grade count");
  Multivector u(y.sig());
  for (int k = 0; k <= y.n(); ++k) {
    const auto& ck = c.by_grade[static_cast<std::size_t>(k)];
    if (ck.size() != binomial(y.n(), k))
      throw Error("from_tensors: grade " + std::to_string(k) +
                  " has wrong component count");
    const Eigen::VectorXcd coords =
        Eigen::Map<const Eigen::VectorXcd>(ck.data(), static_cast<Eigen::Index>(ck.size()));
    if (coords.cwiseAbs().maxCoeff() == 0.0) continue;
    const Eigen::VectorXd bre = y.wedge_block(k) * coords.real();
    const Eigen::VectorXd bim = y.wedge_block(k) * coords.imag();
    const Eigen::VectorXcd blades = bre + Complex{0.0, 1.0} * bim;
    const auto tuples = ascending_tuples(y.n(), k);
    for (std::size_t i = 0; i < tuples.size(); ++i)
      u[tuple_to_mask(tuples[i])] += blades[static_cast<Eigen::Index>(i)];
  }
  return u;
}

TensorComponents to_tensors(const Multivector& u, const Tetrad& y) {
  if (!(u.sig() == y.sig())) throw Error("to_tensors: signature mismatch");
  TensorComponents c = TensorComponents::zero(y.sig());
  for (int k = 0; k <= y.n(); ++k) {
    const auto tuples = ascending_tuples(y.n(), k);
    Eigen::VectorXd bre(static_cast<Eigen::Index>(tuples.size()));
    Eigen::VectorXd bim(static_cast<Eigen::Index>(tuples.size()));
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      const Complex v = u[tuple_to_mask(tuples[i])];
      bre[static_cast<Eigen::Index>(i)] = v.real();
      bim[static_cast<Eigen::Index>(i)] = v.imag();
    }
    const Eigen::VectorXd cre = y.wedge_block_lu(k).solve(bre);
    const Eigen::VectorXd cim = y.wedge_block_lu(k).solve(bim);
    auto& ck = c.by_grade[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < ck.size(); ++i)
      ck[i] = Complex{cre[static_cast<Eigen::Index>(i)],
                      cim[static_cast<Eigen::Index>(i)]};
  }
  return c;
}

}  // namespace cliffsolve
