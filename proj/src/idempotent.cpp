#include "cliffsolve/idempotent.hpp"

#include <cmath>
#include <mutex>
#include <optional>

#include "cliffsolve/error.hpp"
#include "cliffsolve/matrix_rep.hpp"

namespace cliffsolve {

namespace {
constexpr double kIdempotentTol = 1e-13;
constexpr double kMembershipTol = 1e-12;
}  // namespace

IdempotentCheck is_hermitian_idempotent(const Multivector& t) {
  const double idem = max_norm(t * t - t);
  const double herm = max_norm(hermitian_conjugate(t) - t);
  return {idem <= kIdempotentTol && herm <= kIdempotentTol, idem, herm};
}

struct HermitianIdempotent::Cache {
  std::mutex mu;
  std::optional<Eigen::MatrixXcd> right, dual_right;
};

HermitianIdempotent::HermitianIdempotent(Multivector t)
    : t_(std::move(t)),
      dual_(Multivector::identity(t_.sig()) - t_),
      cache_(std::make_shared<Cache>()) {
  auto check = is_hermitian_idempotent(t_);
  if (!check.ok)
    throw Error("idempotent: residuals t*t-t = " +
                format_double(check.idempotency_residual) + ", adjoint-t = " +
                format_double(check.hermiticity_residual) + " exceed 1e-13");
  type_ = (t_.n() % 2 == 0)
              ? static_cast<int>(std::lround(t_[0].real() *
                                             double(1 << (t_.n() / 2))))
              : -1;
}

const Eigen::MatrixXcd& HermitianIdempotent::right_op() const {
  std::scoped_lock lock(cache_->mu);
  if (!cache_->right) cache_->right = mul_operator(t_, Side::Right);
  return *cache_->right;
}

const Eigen::MatrixXcd& HermitianIdempotent::dual_right_op() const {
  std::scoped_lock lock(cache_->mu);
  if (!cache_->dual_right) cache_->dual_right = mul_operator(dual_, Side::Right);
  return *cache_->dual_right;
}

HermitianIdempotent dual(const HermitianIdempotent& t) {
  return HermitianIdempotent(t.dual_value());
}

HermitianIdempotent canonical_idempotent(int k) {
  const Signature sig = make_signature(1, 3);
  const Complex qi{0.0, 0.25};
  Multivector t(sig);
  switch (k) {
    case 0:
      break;
    case 1:
      t[0b0000] = 0.25;
      t[0b0001] = 0.25;
      t[0b0110] = qi;
      t[0b0111] = qi;
      break;
    case 2:
      t[0b0000] = 0.5;
      t[0b0001] = 0.5;
      break;
    case 3:
      t[0b0000] = 0.75;
      t[0b0001] = 0.25;
      t[0b0110] = qi;
      t[0b0111] = -qi;
      break;
    case 4:
      t[0b0000] = 1.0;
      break;
    default:
      throw Error("canonical_idempotent: index must be 0..4, got " +
                  std::to_string(k));
  }
  return HermitianIdempotent(std::move(t));
}

std::vector<HermitianIdempotent> canonical_idempotents() {
  std::vector<HermitianIdempotent> out;
  out.reserve(5);
  for (int k = 0; k <= 4; ++k) out.push_back(canonical_idempotent(k));
  return out;
}

MembershipCheck membership(const Multivector& u, const HermitianIdempotent& t,
                           IdealSet which) {
  const double scale = std::max(1.0, max_norm(u));
  double residual = 0.0;
  const auto right_defect = [&](const Multivector& v) {
    return max_norm(v * t.value() - v);
  };
  const auto left_defect = [&](const Multivector& v) {
    return max_norm(t.value() * v - v);
  };
  switch (which) {
    case IdealSet::I:
      residual = right_defect(u);
      break;
    case IdealSet::K:
      residual = std::max(right_defect(u), left_defect(u));
      break;
    case IdealSet::L:
      residual = std::max({right_defect(u), left_defect(u),
                           max_norm(hermitian_conjugate(u) + u)});
      break;
    case IdealSet::G: {
      const Multivector e = Multivector::identity(u.sig());
      const Multivector shifted = u - e;
      residual = std::max({max_norm(hermitian_conjugate(u) * u - e),
                           right_defect(shifted), left_defect(shifted)});
      break;
    }
  }
  return {residual <= kMembershipTol * scale, residual};
}

std::pair<Multivector, Multivector> decompose(const Multivector& psi,
                                              const HermitianIdempotent& t) {
  Multivector phi = psi * t.value();
  Multivector rest = psi - phi;
  return {std::move(phi), std::move(rest)};
}

Multivector exp_to_G(const Multivector& l, const HermitianIdempotent& t) {
  auto check = membership(l, t, IdealSet::L);
  if (!check.ok)
    throw Error("exp_to_G: argument is not in L(t), residual " +
                format_double(check.residual));

  const double nrm = max_norm(l);
  int squarings = 0;
  if (nrm > 0.5)
    squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  const double inv_scale = std::ldexp(1.0, -squarings);

  Multivector x = l * Complex{inv_scale, 0.0};
  const Multivector e = Multivector::identity(l.sig());
  Multivector sum = e;
  Multivector term = e;
  for (int k = 1; k <= 64; ++k) {
    term = term * x * Complex{1.0 / k, 0.0};
    sum += term;
    if (max_norm(term) <= 1e-17 * std::max(1.0, max_norm(sum))) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

Multivector sample_L(const HermitianIdempotent& t, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Multivector x(t.sig());
  for (BladeMask m = 0; m < x.dim(); ++m) x[m] = Complex{unit(rng), unit(rng)};
  Multivector y = t.value() * x * t.value();
  return 0.5 * (y - hermitian_conjugate(y));
}

}  // namespace cliffsolve
