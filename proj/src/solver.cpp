#include "cliffsolve/solver.hpp"

#include <cmath>

#include "cliffsolve/error.hpp"

namespace cliffsolve {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kGammaFloor = 1e-10;

double herm_residual(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd herm_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("eigensolver failed");
  return es.eigenvalues();
}

void check_system_shape(const FirstOrderSystem& sys) {
  if (sys.n < 1 || sys.D < 1) throw Error("system: n and D must be positive");
  if (sys.H.size() != static_cast<std::size_t>(sys.n))
    throw Error("system: expected " + std::to_string(sys.n) + " H matrices");
  for (const auto& h : sys.H)
    if (h.rows() != sys.D || h.cols() != sys.D)
      throw Error("system: every H_i must be D x D");
  if (sys.M.size() != 0 && (sys.M.rows() != sys.D || sys.M.cols() != sys.D))
    throw Error("system: M must be D x D or empty");
  for (const auto& t : sys.M_varying)
    if (t.op.rows() != sys.D || t.op.cols() != sys.D || !t.envelope)
      throw Error("system: varying term needs a D x D matrix and an envelope");
}

void check_grid(const FirstOrderSystem& sys, const Grid& grid) {
  if (grid.axes.empty()) throw Error("grid: needs at least one active axis");
  int prev = 1;
  const int margin = grid.stencil_order == 4 ? 5 : 3;
  for (const auto& a : grid.axes) {
    if (a.axis <= prev || a.axis > sys.n)
      throw Error("grid: active axes must be strictly increasing in 2.." +
                  std::to_string(sys.n));
    if (a.points < margin)
      throw Error("grid: axis " + std::to_string(a.axis) + " needs at least " +
                  std::to_string(margin) + " points for the stencil");
    if (!(a.extent > 0.0)) throw Error("grid: axis extent must be positive");
    prev = a.axis;
  }
  if (grid.steps < 0) throw Error("grid: negative step count");
  if (!(grid.cfl > 0.0)) throw Error("grid: CFL must be positive");
  if (grid.stencil_order != 2 && grid.stencil_order != 4)
    throw Error("grid: stencil order must be 2 or 4");
  if (grid.dt < 0.0) throw Error("grid: negative dt");
}

}  // namespace

FriedrichsReport validate_friedrichs(const FirstOrderSystem& sys) {
  check_system_shape(sys);
  FriedrichsReport rep{};
  rep.pass = true;
  rep.hermiticity_residuals.reserve(sys.H.size());
  for (const auto& h : sys.H) {
    const double r = herm_residual(h);
    rep.hermiticity_residuals.push_back(r);
    if (r > kHermTol) rep.pass = false;
  }
  const Eigen::VectorXd ev = herm_eigenvalues(sys.H[0]);
  rep.gamma = ev.minCoeff();
  rep.h1_max_eigenvalue = ev.maxCoeff();
  if (!(rep.gamma > kGammaFloor)) rep.pass = false;
  return rep;
}

std::pair<Eigen::MatrixXcd, double> boundary_flux_matrix(
    const FirstOrderSystem& sys, std::span<const double> tau) {
  check_system_shape(sys);
  if (tau.size() != static_cast<std::size_t>(sys.n))
    throw Error("boundary flux: normal must have n components");
  double norm2 = 0.0;
  for (double t : tau) norm2 += t * t;
  if (norm2 == 0.0) throw Error("boundary flux: zero normal vector");
  Eigen::MatrixXcd flux = Eigen::MatrixXcd::Zero(sys.D, sys.D);
  for (int i = 0; i < sys.n; ++i)
    flux += tau[static_cast<std::size_t>(i)] * sys.H[static_cast<std::size_t>(i)];
  const double min_eig = herm_eigenvalues(flux).minCoeff();
  return {std::move(flux), min_eig};
}

double axis_spacing(const AxisSpec& a) { return a.extent / a.points; }

FieldGrid zero_field(const Grid& grid, int D) {
  FieldGrid f;
  f.D = D;
  for (const auto& a : grid.axes) f.shape.push_back(static_cast<std::size_t>(a.points));
  f.data.assign(f.points() * static_cast<std::size_t>(D), Complex{});
  return f;
}

std::vector<double> point_coords(const Grid& grid, std::size_t p) {
  std::vector<double> x(grid.axes.size());
  std::size_t rest = p;
  for (std::size_t a = grid.axes.size(); a-- > 0;) {
    const auto count = static_cast<std::size_t>(grid.axes[a].points);
    x[a] = static_cast<double>(rest % count) * axis_spacing(grid.axes[a]);
    rest /= count;
  }
  return x;
}

CompiledSystem::CompiledSystem(const FirstOrderSystem& sys, const Grid& grid)
    : grid_(grid), d_(sys.D) {
  check_grid(sys, grid);
  const FriedrichsReport rep = validate_friedrichs(sys);
  if (!rep.pass)
    throw Error("system fails the symmetric-hyperbolicity validation (gamma = " +
                format_double(rep.gamma) + ")");

  for (const auto& a : grid_.axes) shape_.push_back(static_cast<std::size_t>(a.points));
  strides_.assign(shape_.size(), 1);
  for (std::size_t i = shape_.size(); i-- > 1;)
    strides_[i - 1] = strides_[i] * shape_[i];
  points_ = strides_[0] * shape_[0];

  Eigen::LLT<Eigen::MatrixXcd> llt(sys.H[0]);
  if (llt.info() != Eigen::Success)
    throw Error("H_1 factorization failed despite positive gamma");

  // spectral radius of H1^{-1} H_i via the Hermitian similar form
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es1(sys.H[0]);
  const Eigen::MatrixXcd isqrt = es1.operatorInverseSqrt();
  double dx_min = 0.0;
  for (const auto& a : grid_.axes) {
    const auto& h = sys.H[static_cast<std::size_t>(a.axis - 1)];
    conv_.push_back(llt.solve(h));
    const Eigen::VectorXd ev = herm_eigenvalues(isqrt * h * isqrt);
    lambda_max_ = std::max(lambda_max_,
                           std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff())));
    const double dx = axis_spacing(a);
    dx_min = (dx_min == 0.0) ? dx : std::min(dx_min, dx);
  }

  const double dt_limit =
      lambda_max_ > 0.0 ? grid_.cfl * dx_min / lambda_max_ : grid_.cfl * dx_min;
  if (grid_.dt > 0.0) {
    if (grid_.dt > dt_limit * (1.0 + 1e-12))
      throw Error("dt " + format_double(grid_.dt) + " violates the CFL bound " +
                  format_double(dt_limit));
    dt_ = grid_.dt;
  } else {
    dt_ = dt_limit;
  }

  const bool has_const_m = sys.M.size() != 0 && sys.M.cwiseAbs().maxCoeff() != 0.0;
  const Eigen::MatrixXcd m0 =
      sys.M.size() != 0 ? sys.M : Eigen::MatrixXcd::Zero(d_, d_);
  if (!sys.M_varying.empty()) {
    pointwise_.reserve(points_);
    for (std::size_t p = 0; p < points_; ++p) {
      const auto x = point_coords(grid_, p);
      Eigen::MatrixXcd m = m0;
      for (const auto& t : sys.M_varying) m += t.envelope(x) * t.op;
      pointwise_.push_back(llt.solve(m));
    }
  } else if (has_const_m) {
    pointwise_.push_back(llt.solve(m0));
  }

  if (sys.source) {
    src_.reserve(points_);
    for (std::size_t p = 0; p < points_; ++p) {
      const auto x = point_coords(grid_, p);
      Eigen::VectorXcd j = sys.source(x);
      if (j.size() != d_) throw Error("source returned a vector of wrong length");
      src_.push_back(llt.solve(j));
    }
  }
}

void CompiledSystem::eval_rhs(std::span<const Complex> u, std::span<Complex> du,
                              ExecPolicy policy) const {
  if (u.size() != points_ * static_cast<std::size_t>(d_) || du.size() != u.size())
    throw Error("eval_rhs: state size mismatch");
  if (policy == ExecPolicy::Reference)
    rhs_reference(u, du);
  else
    rhs_fused(u, du, policy == ExecPolicy::OpenMP);
}

void CompiledSystem::rhs_fused(std::span<const Complex> u, std::span<Complex> du,
                               bool parallel) const {
  const auto np = static_cast<std::ptrdiff_t>(points_);
  const int d = d_;
  const int order = grid_.stencil_order;
  const std::size_t naxes = shape_.size();

#pragma omp parallel if (parallel)
  {
    Eigen::VectorXcd diff(d);
#pragma omp for schedule(static)
    for (std::ptrdiff_t p = 0; p < np; ++p) {
      const auto base = static_cast<std::size_t>(p) * static_cast<std::size_t>(d);
      Eigen::Map<Eigen::VectorXcd> out(du.data() + base, d);
      if (src_.empty())
        out.setZero();
      else
        out = src_[static_cast<std::size_t>(p)];

      for (std::size_t a = 0; a < naxes; ++a) {
        const std::size_t stride = strides_[a];
        const std::size_t count = shape_[a];
        const std::size_t idx =
            (static_cast<std::size_t>(p) / stride) % count;
        const double dx = axis_spacing(grid_.axes[a]);

        const auto shifted = [&](std::ptrdiff_t off) {
          const std::size_t j =
              (idx + count + static_cast<std::size_t>(
                                 (off % static_cast<std::ptrdiff_t>(count)) +
                                 static_cast<std::ptrdiff_t>(count))) %
              count;
          const std::size_t q =
              static_cast<std::size_t>(p) + (j - idx) * stride;
          return Eigen::Map<const Eigen::VectorXcd>(
              u.data() + q * static_cast<std::size_t>(d), d);
        };

        if (order == 2) {
          diff = (shifted(1) - shifted(-1)) * (0.5 / dx);
        } else {
          diff = ((shifted(1) - shifted(-1)) * 8.0 - (shifted(2) - shifted(-2))) *
                 (1.0 / (12.0 * dx));
        }
        out.noalias() -= conv_[a] * diff;
      }

      if (!pointwise_.empty()) {
        const auto& m =
            pointwise_.size() == 1 ? pointwise_[0] : pointwise_[static_cast<std::size_t>(p)];
        out.noalias() -=
            m * Eigen::Map<const Eigen::VectorXcd>(u.data() + base, d);
      }
    }
  }
}

// Naive evaluation with explicit index arithmetic and scalar loops; kept as
// an independent oracle for the fused kernel.
void CompiledSystem::rhs_reference(std::span<const Complex> u,
                                   std::span<Complex> du) const {
  const std::size_t d = static_cast<std::size_t>(d_);
  std::vector<std::size_t> multi(shape_.size());
  for (std::size_t p = 0; p < points_; ++p) {
    std::size_t rest = p;
    for (std::size_t a = shape_.size(); a-- > 0;) {
      multi[a] = rest % shape_[a];
      rest /= shape_[a];
    }

    for (std::size_t r = 0; r < d; ++r) {
      Complex acc{0.0, 0.0};

      if (!pointwise_.empty()) {
        const auto& m = pointwise_.size() == 1 ? pointwise_[0] : pointwise_[p];
        for (std::size_t c = 0; c < d; ++c)
          acc -= m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) *
                 u[p * d + c];
      }

      for (std::size_t a = 0; a < shape_.size(); ++a) {
        const double dx = axis_spacing(grid_.axes[a]);
        const auto at = [&](std::ptrdiff_t off, std::size_t c) {
          std::size_t q = 0;
          for (std::size_t b = 0; b < shape_.size(); ++b) {
            std::size_t idx = multi[b];
            if (b == a) {
              const auto n = static_cast<std::ptrdiff_t>(shape_[b]);
              idx = static_cast<std::size_t>(
                  ((static_cast<std::ptrdiff_t>(idx) + off) % n + n) % n);
            }
            q = q * shape_[b] + idx;
          }
          return u[q * d + c];
        };
        for (std::size_t c = 0; c < d; ++c) {
          Complex deriv;
          if (grid_.stencil_order == 2)
            deriv = (at(1, c) - at(-1, c)) / (2.0 * dx);
          else
            deriv = (8.0 * (at(1, c) - at(-1, c)) - (at(2, c) - at(-2, c))) /
                    (12.0 * dx);
          acc -= conv_[a](static_cast<Eigen::Index>(r),
                          static_cast<Eigen::Index>(c)) *
                 deriv;
        }
      }

      if (!src_.empty()) acc += src_[p][static_cast<Eigen::Index>(r)];
      du[p * d + r] = acc;
    }
  }
}

namespace {

bool all_finite(std::span<const Complex> v) {
  for (const Complex& c : v)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

}  // namespace

Trajectory solve_cauchy(const FirstOrderSystem& sys, const FieldGrid& psi0,
                        const Grid& grid, const SolveOptions& opts) {
  CompiledSystem cs(sys, grid);
  if (psi0.D != sys.D) throw Error("initial data has wrong component count");
  if (psi0.points() != cs.points() || psi0.data.size() != cs.points() * static_cast<std::size_t>(sys.D))
    throw Error("initial data does not match the grid");

  const double dt = cs.dt();
  const std::size_t len = psi0.data.size();

  FieldGrid cur = psi0;
  cur.time = 0.0;

  Trajectory traj;
  traj.dt = dt;
  traj.steps = grid.steps;
  traj.slices.push_back(cur);
  traj.slice_steps.push_back(0);
  if (opts.on_step) opts.on_step(0, cur);

  std::vector<Complex> k1(len), k2(len), k3(len), k4(len), tmp(len);
  const auto stage = [&](const std::vector<Complex>& base, double factor,
                         const std::vector<Complex>& slope,
                         std::vector<Complex>& into) {
    for (std::size_t i = 0; i < len; ++i) into[i] = base[i] + factor * slope[i];
  };

  for (int step = 1; step <= grid.steps; ++step) {
    cs.eval_rhs(cur.data, k1, opts.policy);
    stage(cur.data, 0.5 * dt, k1, tmp);
    cs.eval_rhs(tmp, k2, opts.policy);
    stage(cur.data, 0.5 * dt, k2, tmp);
    cs.eval_rhs(tmp, k3, opts.policy);
    stage(cur.data, dt, k3, tmp);
    cs.eval_rhs(tmp, k4, opts.policy);
    for (std::size_t i = 0; i < len; ++i)
      cur.data[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    cur.time = dt * step;

    if (!all_finite(cur.data))
      throw Error("solve_cauchy: non-finite values at step " +
                  std::to_string(step) + " (t = " + format_double(cur.time) + ")");

    if (opts.post_step) opts.post_step(step, cur);
    if (opts.on_step) opts.on_step(step, cur);

    const bool sampled = opts.sample_every > 0 && step % opts.sample_every == 0;
    if (sampled || step == grid.steps) {
      traj.slices.push_back(cur);
      traj.slice_steps.push_back(step);
      if (sampled && step == grid.steps) break;
    }
  }
  return traj;
}

double energy(const FirstOrderSystem& sys, const FieldGrid& slice,
              const Grid& grid) {
  check_system_shape(sys);
  if (slice.D != sys.D) throw Error("energy: component count mismatch");
  double cell = 1.0;
  for (const auto& a : grid.axes) cell *= axis_spacing(a);
  const auto& h1 = sys.H[0];
  const int d = sys.D;
  double total = 0.0;
  for (std::size_t p = 0; p < slice.points(); ++p) {
    Eigen::Map<const Eigen::VectorXcd> up(slice.point(p), d);
    total += (up.adjoint() * h1 * up).value().real();
  }
  return total * cell;
}

}  // namespace cliffsolve
