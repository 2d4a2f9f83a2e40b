#include "cliffsolve/matrix_rep.hpp"

#include <bit>

#include "cliffsolve/error.hpp"

namespace cliffsolve {

namespace {

const Complex kI{0.0, 1.0};

Eigen::MatrixXcd kron2(const Eigen::Matrix2cd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(2 * b.rows(), 2 * b.cols());
  out.topLeftCorner(b.rows(), b.cols()) = a(0, 0) * b;
  out.topRightCorner(b.rows(), b.cols()) = a(0, 1) * b;
  out.bottomLeftCorner(b.rows(), b.cols()) = a(1, 0) * b;
  out.bottomRightCorner(b.rows(), b.cols()) = a(1, 1) * b;
  return out;
}

void verify_gamma(const GammaSet& g) {
  const int n = g.sig.n();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(g.N, g.N);
  for (int a = 1; a <= n; ++a) {
    const auto& ga = g.gamma[static_cast<std::size_t>(a - 1)];
    const double herm = (a == 1) ? (ga - ga.adjoint()).cwiseAbs().maxCoeff()
                                 : (ga + ga.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-14) throw Error("build_gamma: Hermiticity pattern violated");
    for (int b = 1; b <= n; ++b) {
      const auto& gb = g.gamma[static_cast<std::size_t>(b - 1)];
      Eigen::MatrixXcd anti = ga * gb + gb * ga;
      if (a == b) anti -= 2.0 * static_cast<double>(g.sig.metric(a)) * id;
      if (anti.cwiseAbs().maxCoeff() > 1e-14)
        throw Error("build_gamma: anticommutation relations violated");
    }
  }
}

}  // namespace

GammaSet build_gamma(int n) {
  if (n < 2 || n > kMaxDimension || (n % 2) != 0)
    throw Error("build_gamma: n must be even and in 2.." +
                std::to_string(kMaxDimension) + ", got " + std::to_string(n));

  Eigen::Matrix2cd s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, -kI, kI, 0;
  s3 << 1, 0, 0, -1;

  std::vector<Eigen::MatrixXcd> gam;
  gam.emplace_back(s1);                             // gamma^1
  gam.emplace_back((Eigen::Matrix2cd() << 0, 1, -1, 0).finished());  // gamma^2

  for (int m = 2; m < n; m += 2) {
    std::vector<Eigen::MatrixXcd> next;
    next.reserve(static_cast<std::size_t>(m) + 2);
    for (const auto& ga : gam) next.push_back(kron2(s3, ga));
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(gam[0].rows(), gam[0].cols());
    next.push_back(kI * kron2(s1, id));
    next.push_back(kI * kron2(s2, id));
    gam = std::move(next);
  }

  GammaSet g{make_signature(1, n - 1), 1 << (n / 2), std::move(gam)};
  verify_gamma(g);
  return g;
}

Eigen::MatrixXcd rep(const Multivector& u, const GammaSet& g) {
  if (!(u.sig() == g.sig)) throw Error("rep: signature mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(g.N, g.N);
  for (BladeMask m = 0; m < u.dim(); ++m) {
    const Complex c = u[m];
    if (c.real() == 0.0 && c.imag() == 0.0) continue;
    Eigen::MatrixXcd blade = Eigen::MatrixXcd::Identity(g.N, g.N);
    for (BladeMask rest = m; rest != 0; rest &= rest - 1)
      blade = blade * g.gamma[static_cast<std::size_t>(std::countr_zero(rest))];
    out += c * blade;
  }
  return out;
}

Eigen::MatrixXcd mul_operator(const Multivector& a, Side side) {
  const Signature sig = a.sig();
  const auto dim = static_cast<Eigen::Index>(sig.dim());
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
  for (BladeMask am = 0; am < a.dim(); ++am) {
    const Complex c = a[am];
    if (c.real() == 0.0 && c.imag() == 0.0) continue;
    for (BladeMask j = 0; j < a.dim(); ++j) {
      const auto pr = side == Side::Left ? blade_product(am, j, sig)
                                         : blade_product(j, am, sig);
      op(static_cast<Eigen::Index>(pr.mask), static_cast<Eigen::Index>(j)) +=
          static_cast<double>(pr.sign) * c;
    }
  }
  return op;
}

std::vector<BladeMask> parity_masks(Signature sig, Parity p) {
  std::vector<BladeMask> out;
  out.reserve(sig.dim() / 2);
  for (BladeMask m = 0; m < sig.dim(); ++m)
    if (blade_parity(m) == p) out.push_back(m);
  return out;
}

Eigen::MatrixXcd restrict_to_parity(const Eigen::MatrixXcd& full, Signature sig,
                                    Parity p) {
  const auto dim = static_cast<Eigen::Index>(sig.dim());
  if (full.rows() != dim || full.cols() != dim)
    throw Error("restrict_to_parity: operator is not 2^n x 2^n");
  const auto keep = parity_masks(sig, p);
  const double scale = std::max(1.0, full.cwiseAbs().maxCoeff());
  for (BladeMask j : keep)
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (blade_parity(static_cast<BladeMask>(i)) == p) continue;
      if (std::abs(full(i, static_cast<Eigen::Index>(j))) > 1e-14 * scale)
        throw Error("restrict_to_parity: operator couples out of the " +
                    std::string(p == Parity::Even ? "even" : "odd") + " block");
    }
  const auto half = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXcd out(half, half);
  for (Eigen::Index i = 0; i < half; ++i)
    for (Eigen::Index j = 0; j < half; ++j)
      out(i, j) = full(static_cast<Eigen::Index>(keep[static_cast<std::size_t>(i)]),
                       static_cast<Eigen::Index>(keep[static_cast<std::size_t>(j)]));
  return out;
}

Eigen::MatrixXcd mul_operator(const Multivector& a, Side side, Parity restrict_to) {
  return restrict_to_parity(mul_operator(a, side), a.sig(), restrict_to);
}

SpectralReport spectral_check(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw Error("spectral_check: matrix is not square");
  const double residual = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm,
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error("spectral_check: eigensolver failed");
  return {residual <= 1e-10, residual, es.eigenvalues().minCoeff(),
          es.eigenvalues().maxCoeff()};
}

}  // namespace cliffsolve
