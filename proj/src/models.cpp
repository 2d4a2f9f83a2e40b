#include "cliffsolve/models.hpp"

#include <algorithm>
#include <cmath>

#include "cliffsolve/error.hpp"
#include "cliffsolve/matrix_rep.hpp"

namespace cliffsolve {

namespace {

constexpr double kKTol = 1e-13;
constexpr double kGaugeTol = 1e-10;
constexpr double kParityTol = 1e-14;

Multivector beta(Signature sig) { return Multivector::blade(sig, 0b1); }

Parity flip(Parity p) { return p == Parity::Even ? Parity::Odd : Parity::Even; }

// pure parity of a nonzero multivector; throws when mixed
Parity pure_parity(const Multivector& u, const char* what) {
  const double scale = std::max(1.0, max_norm(u));
  if (max_norm(parity_project(u, Parity::Odd)) <= kParityTol * scale)
    return Parity::Even;
  if (max_norm(parity_project(u, Parity::Even)) <= kParityTol * scale)
    return Parity::Odd;
  throw Error(std::string(what) + " must have a pure parity");
}

Eigen::VectorXcd parity_coeffs(const Multivector& u, Parity p) {
  const auto masks = parity_masks(u.sig(), p);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(masks.size()));
  for (std::size_t i = 0; i < masks.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = u[masks[i]];
  return v;
}

Eigen::VectorXcd full_coeffs(const Multivector& u) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(u.dim()));
  for (BladeMask m = 0; m < u.dim(); ++m) v[static_cast<Eigen::Index>(m)] = u[m];
  return v;
}

FirstOrderSystem::SpatialFn profile_fn(const ScalarProfile& p) {
  return [p](std::span<const double> x) { return p(x); };
}

}  // namespace

double ScalarProfile::operator()(std::span<const double> x) const {
  if (kind == Kind::Constant) return amplitude;
  if (axis < 0 || static_cast<std::size_t>(axis) >= x.size())
    throw Error("profile refers to an axis the grid does not activate");
  const double v = x[static_cast<std::size_t>(axis)];
  if (kind == Kind::Gaussian) {
    const double z = (v - center) / width;
    return amplitude * std::exp(-0.5 * z * z);
  }
  return amplitude * std::sin(2.0 * M_PI * mode * v / extent + phase);
}

FirstOrderSystem assemble_equipped(const EquippedSystemSpec& spec) {
  const Signature sig = spec.tetrad.sig();
  if (sig.r != 1)
    throw Error("beta symmetrization requires a Lorentzian signature (1, n-1)");
  const int n = sig.n();
  const Multivector b = beta(sig);
  const bool restricted = spec.restriction != ParityRestriction::None;
  const Parity up = spec.restriction == ParityRestriction::Odd ? Parity::Odd
                                                               : Parity::Even;

  FirstOrderSystem sys;
  sys.n = n;
  sys.D = restricted ? 1 << (n - 1) : 1 << n;
  for (int mu = 1; mu <= n; ++mu) {
    const Multivector bh = product(b, genvector(spec.tetrad, mu));
    sys.H.push_back(restricted ? mul_operator(bh, Side::Left, up)
                               : mul_operator(bh, Side::Left));
  }

  Eigen::MatrixXcd mconst = Eigen::MatrixXcd::Zero(sys.D, sys.D);
  bool any_const = false;
  for (const auto& term : spec.terms) {
    if (max_norm(term.A) == 0.0 || max_norm(term.B) == 0.0) continue;
    if (restricted && pure_parity(term.A, "term factor A") ==
                          pure_parity(term.B, "term factor B"))
      throw Error("parity grading violated: need (A even, B odd) or (A odd, B even)");
    Eigen::MatrixXcd op = mul_operator(product(b, term.A), Side::Left) *
                          mul_operator(term.B, Side::Right);
    if (restricted) op = restrict_to_parity(op, sig, up);
    if (term.envelope.is_constant()) {
      mconst += term.envelope.amplitude * op;
      any_const = true;
    } else {
      sys.M_varying.push_back({profile_fn(term.envelope), std::move(op)});
    }
  }
  if (any_const) sys.M = std::move(mconst);

  if (spec.source && max_norm(spec.source->f) != 0.0) {
    const Multivector bf = product(b, spec.source->f);
    Eigen::VectorXcd base;
    if (restricted) {
      if (pure_parity(spec.source->f, "source") != flip(up))
        throw Error("source must have the parity opposite to the unknown");
      base = parity_coeffs(bf, up);
    } else {
      base = full_coeffs(bf);
    }
    sys.source = [base, env = spec.source->envelope](std::span<const double> x) {
      return Eigen::VectorXcd(env(x) * base);
    };
  }

  const auto rep = validate_friedrichs(sys);
  if (!rep.pass)
    throw Error("assembly refused: H_1 is not positive definite (gamma = " +
                format_double(rep.gamma) + ")");
  return sys;
}

FirstOrderSystem assemble_model_dirac(const DiracModelSpec& spec) {
  const Signature sig = spec.tetrad.sig();
  if (!(sig == spec.t.sig()))
    throw Error("idempotent and tetrad signatures differ");
  EquippedSystemSpec eq{spec.tetrad};
  for (const auto& g : spec.A) {
    if (g.mu < 1 || g.mu > sig.n())
      throw Error("gauge component index out of range");
    const auto mem = membership(g.value, spec.t, IdealSet::L);
    if (!mem.ok && mem.residual > kGaugeTol)
      throw Error("gauge potential is not in L(t) (residual " +
                  format_double(mem.residual) + ")");
    eq.terms.push_back({genvector(spec.tetrad, g.mu), g.value, g.envelope});
  }
  if (spec.m != 0.0)
    eq.terms.push_back({Multivector::scalar(sig, Complex{0.0, spec.m}),
                        Multivector::identity(sig)});
  return assemble_equipped(eq);
}

Multivector default_hestenes_K(Signature sig) {
  return -Multivector::blade(sig, 0b0110);
}

FirstOrderSystem assemble_dirac_hestenes(const HestenesModelSpec& spec) {
  const Signature sig = spec.tetrad.sig();
  if (sig.r != 1 || sig.s != 3)
    throw Error("the Dirac-Hestenes form requires signature (1,3)");
  const Multivector b = beta(sig);
  const double ks = std::max(1.0, max_norm(spec.K));
  if (max_norm(spec.K - grade_project(spec.K, 2)) > kKTol * ks)
    throw Error("K must be a grade-2 element");
  if (max_norm(product(spec.K, spec.K) + Multivector::identity(sig)) > kKTol * ks)
    throw Error("K must square to -e");
  if (max_norm(product(b, spec.K) - product(spec.K, b)) > kKTol * ks)
    throw Error("K must commute with e^1");

  EquippedSystemSpec eq{spec.tetrad};
  eq.restriction = spec.psi_parity == Parity::Even ? ParityRestriction::Even
                                                   : ParityRestriction::Odd;
  for (const auto& comp : spec.a) {
    if (comp.mu < 1 || comp.mu > sig.n())
      throw Error("covector component index out of range");
    eq.terms.push_back({genvector(spec.tetrad, comp.mu), spec.K, comp.profile});
  }
  if (spec.m != 0.0)
    eq.terms.push_back({Multivector::scalar(sig, Complex{spec.m, 0.0}),
                        product(spec.K, b)});
  return assemble_equipped(eq);
}

FieldGrid sample_initial(const Grid& grid, const InitialData& init,
                         std::optional<Parity> restrict_to) {
  Eigen::VectorXcd state = restrict_to ? parity_coeffs(init.U0, *restrict_to)
                                       : full_coeffs(init.U0);
  if (restrict_to &&
      max_norm(parity_project(init.U0, flip(*restrict_to))) >
          kParityTol * std::max(1.0, max_norm(init.U0)))
    throw Error("initial data has components outside the restricted parity");
  FieldGrid f = zero_field(grid, static_cast<int>(state.size()));
  for (std::size_t p = 0; p < f.points(); ++p) {
    const auto x = point_coords(grid, p);
    const double g = init.profile(x);
    for (Eigen::Index c = 0; c < state.size(); ++c)
      f.point(p)[static_cast<std::size_t>(c)] = g * state[c];
  }
  return f;
}

EnergyReport energy_run(const FirstOrderSystem& sys, const FieldGrid& psi0,
                        const Grid& grid, int log_every, ExecPolicy policy) {
  EnergyReport rep;
  const int every = std::max(1, log_every);
  SolveOptions opts;
  opts.policy = policy;
  opts.on_step = [&](int step, const FieldGrid& f) {
    if (step % every == 0 || step == grid.steps) {
      rep.steps.push_back(step);
      rep.series.push_back(energy(sys, f, grid));
    }
  };
  const Trajectory traj = solve_cauchy(sys, psi0, grid, opts);
  rep.dt = traj.dt;
  rep.e0 = rep.series.front();
  rep.e_final = rep.series.back();
  if (rep.e0 != 0.0)
    for (double e : rep.series)
      rep.drift = std::max(rep.drift, std::abs(e - rep.e0) / rep.e0);
  return rep;
}

namespace {

double max_abs_diff(const FieldGrid& a, const FieldGrid& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    d = std::max(d, std::abs(a.data[i] - b.data[i]));
  return d;
}

// lower-order operator of the original (unsymmetrized) equation at a point
struct OriginalOperators {
  std::vector<Eigen::MatrixXcd> conv;  // L_{h^mu}, mu = 1..n
  Eigen::MatrixXcd m_const;
  std::vector<std::pair<FirstOrderSystem::SpatialFn, Eigen::MatrixXcd>> m_varying;

  Eigen::MatrixXcd at(std::span<const double> x) const {
    Eigen::MatrixXcd m = m_const;
    for (const auto& [env, op] : m_varying) m += env(x) * op;
    return m;
  }
};

OriginalOperators original_operators(const DiracModelSpec& spec) {
  const Signature sig = spec.tetrad.sig();
  const int d = 1 << sig.n();
  OriginalOperators ops;
  for (int mu = 1; mu <= sig.n(); ++mu)
    ops.conv.push_back(mul_operator(genvector(spec.tetrad, mu), Side::Left));
  ops.m_const = Complex{0.0, spec.m} * Eigen::MatrixXcd::Identity(d, d);
  for (const auto& g : spec.A) {
    Eigen::MatrixXcd op =
        ops.conv[static_cast<std::size_t>(g.mu - 1)] *
        mul_operator(g.value, Side::Right);
    if (g.envelope.is_constant())
      ops.m_const += g.envelope.amplitude * op;
    else
      ops.m_varying.push_back({profile_fn(g.envelope), std::move(op)});
  }
  return ops;
}

}  // namespace

TheoremReport verify_theorem(const DiracModelSpec& spec, const InitialData& init,
                             const Grid& grid) {
  const Signature sig = spec.tetrad.sig();
  if (!(init.U0.sig() == sig)) throw Error("initial data signature mismatch");
  const auto mem = membership(init.U0, spec.t, IdealSet::I);
  if (!mem.ok)
    throw Error("initial data leaves I(t) (residual " +
                format_double(mem.residual) + ")");

  const FirstOrderSystem sys = assemble_model_dirac(spec);
  const int d = sys.D;

  TheoremReport rep;
  const auto frep = validate_friedrichs(sys);
  rep.gamma = frep.gamma;
  rep.hermiticity_residuals = frep.hermiticity_residuals;

  const FieldGrid psi0 = sample_initial(grid, init);
  const Eigen::MatrixXcd& proj = spec.t.right_op();
  const Eigen::MatrixXcd& dual_proj = spec.t.dual_right_op();
  const auto orig = original_operators(spec);
  const double dt = CompiledSystem(sys, grid).dt();

  // per-axis stride bookkeeping for the residual stencil
  std::vector<std::size_t> shape, strides;
  for (const auto& a : grid.axes) shape.push_back(static_cast<std::size_t>(a.points));
  strides.assign(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;) strides[i - 1] = strides[i] * shape[i];

  // main equipped run: leakage, energy, and the three-slice stencil residual
  std::vector<Complex> phi_m, phi_0, phi_p;
  int have = 0;
  double energy0 = 0.0;
  const auto project_slice = [&](const FieldGrid& f, std::vector<Complex>& out) {
    out.resize(f.data.size());
    for (std::size_t p = 0; p < f.points(); ++p) {
      Eigen::Map<const Eigen::VectorXcd> c(f.point(p), d);
      Eigen::Map<Eigen::VectorXcd>(out.data() + p * static_cast<std::size_t>(d), d) =
          proj * c;
    }
  };

  SolveOptions main_opts;
  main_opts.on_step = [&](int step, const FieldGrid& f) {
    double slice_scale = 0.0, slice_leak = 0.0;
    for (std::size_t p = 0; p < f.points(); ++p) {
      Eigen::Map<const Eigen::VectorXcd> c(f.point(p), d);
      slice_scale = std::max(slice_scale, c.cwiseAbs().maxCoeff());
      slice_leak =
          std::max(slice_leak, (dual_proj * c).cwiseAbs().maxCoeff());
    }
    rep.zero_leakage = std::max(rep.zero_leakage, slice_leak);
    if (slice_scale > 0.0)
      rep.leakage_max = std::max(rep.leakage_max, slice_leak / slice_scale);

    const double e = energy(sys, f, grid);
    if (step == 0) energy0 = e;
    if (energy0 > 0.0)
      rep.energy_drift = std::max(rep.energy_drift, std::abs(e - energy0) / energy0);

    // shift the three-slice window; the middle slice is step - 1
    phi_m.swap(phi_0);
    phi_0.swap(phi_p);
    project_slice(f, phi_p);
    if (++have < 3) return;

    const int order = grid.stencil_order;
    Eigen::VectorXcd r(d), deriv(d);
    double scale = 0.0, worst = 0.0;
    for (std::size_t p = 0; p < f.points(); ++p) {
      const auto at = [&](const std::vector<Complex>& s, std::size_t q) {
        return Eigen::Map<const Eigen::VectorXcd>(
            s.data() + q * static_cast<std::size_t>(d), d);
      };
      r = orig.conv[0] * ((at(phi_p, p) - at(phi_m, p)) / (2.0 * dt));
      for (std::size_t a = 0; a < shape.size(); ++a) {
        const std::size_t count = shape[a], stride = strides[a];
        const std::size_t idx = (p / stride) % count;
        const auto neighbor = [&](std::ptrdiff_t off) {
          const std::size_t j = static_cast<std::size_t>(
              (static_cast<std::ptrdiff_t>(idx) + off +
               2 * static_cast<std::ptrdiff_t>(count)) %
              static_cast<std::ptrdiff_t>(count));
          return at(phi_0, p + (j - idx) * stride);
        };
        const double dx = axis_spacing(grid.axes[a]);
        if (order == 2)
          deriv = (neighbor(1) - neighbor(-1)) * (0.5 / dx);
        else
          deriv = ((neighbor(1) - neighbor(-1)) * 8.0 -
                   (neighbor(2) - neighbor(-2))) *
                  (1.0 / (12.0 * dx));
        r += orig.conv[static_cast<std::size_t>(grid.axes[a].axis - 1)] * deriv;
      }
      const auto x = point_coords(grid, p);
      r += orig.at(x) * at(phi_0, p);
      worst = std::max(worst, r.cwiseAbs().maxCoeff());
      scale = std::max(scale, at(phi_0, p).cwiseAbs().maxCoeff());
    }
    rep.equation_residual =
        std::max(rep.equation_residual, worst / std::max(1e-300, scale));
  };
  const auto main_traj = solve_cauchy(sys, psi0, grid, main_opts);

  // restricted run: project the state onto I(t) coefficients after each step
  SolveOptions restricted_opts;
  restricted_opts.post_step = [&](int, FieldGrid& f) {
    for (std::size_t p = 0; p < f.points(); ++p) {
      Eigen::Map<Eigen::VectorXcd> c(f.point(p), d);
      c = proj * c;
    }
  };
  const auto restricted_traj = solve_cauchy(sys, psi0, grid, restricted_opts);
  rep.restricted_agreement =
      max_abs_diff(restricted_traj.slices.back(), main_traj.slices.back());

  // control: pure t' data through the equipped system equals the free run
  const FieldGrid ctrl0 =
      sample_initial(grid, {spec.t.dual_value(), init.profile});
  const auto ctrl_traj = solve_cauchy(sys, ctrl0, grid);
  DiracModelSpec free_spec{spec.tetrad, spec.t, spec.m, {}};
  const auto free_traj =
      solve_cauchy(assemble_model_dirac(free_spec), ctrl0, grid);
  rep.control_residual =
      max_abs_diff(ctrl_traj.slices.back(), free_traj.slices.back());
  return rep;
}

namespace {

// +omega eigenmode evolved on a q-mode box, compared to its exact phase
// advance; error in relative L2
double plane_wave_error(const FirstOrderSystem& sys, int axis, int q,
                        int points, int stencil_order, double final_time,
                        double omega, const Eigen::VectorXcd& u_hat) {
  Grid grid;
  grid.axes = {{axis, 1.0, points}};
  grid.stencil_order = stencil_order;
  const double bound = CompiledSystem(sys, grid).dt();
  grid.steps = static_cast<int>(std::ceil(final_time / bound));
  grid.dt = final_time / grid.steps;

  const int d = static_cast<int>(u_hat.size());
  const double k = 2.0 * M_PI * q;
  FieldGrid u0 = zero_field(grid, d);
  for (std::size_t p = 0; p < u0.points(); ++p) {
    const double x = point_coords(grid, p)[0];
    const Complex wave = std::exp(Complex{0.0, k * x});
    for (int c = 0; c < d; ++c) u0.point(p)[c] = wave * u_hat[c];
  }
  const auto traj = solve_cauchy(sys, u0, grid);

  const Complex advance = std::exp(Complex{0.0, -omega * final_time});
  double err2 = 0.0, ref2 = 0.0;
  const auto& fin = traj.slices.back();
  for (std::size_t p = 0; p < fin.points(); ++p) {
    const double x = point_coords(grid, p)[0];
    const Complex wave = std::exp(Complex{0.0, k * x}) * advance;
    for (int c = 0; c < d; ++c) {
      err2 += std::norm(fin.point(p)[c] - wave * u_hat[c]);
      ref2 += std::norm(wave * u_hat[c]);
    }
  }
  return std::sqrt(err2 / ref2);
}

struct PlaneWaveBasis {
  Eigen::VectorXd omega;       // ascending
  Eigen::MatrixXcd modes;      // columns: eigenvectors in state coordinates
};

PlaneWaveBasis plane_wave_basis(const FirstOrderSystem& sys,
                                std::span<const double> k) {
  Eigen::MatrixXcd num = Eigen::MatrixXcd::Zero(sys.D, sys.D);
  for (std::size_t j = 0; j < k.size(); ++j) num += k[j] * sys.H[j + 1];
  if (sys.M.size() != 0) num -= Complex{0.0, 1.0} * sys.M;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es1(sys.H[0]);
  const Eigen::MatrixXcd isqrt = es1.operatorInverseSqrt();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(isqrt * num * isqrt);
  if (es.info() != Eigen::Success) throw Error("dispersion eigensolve failed");
  return {es.eigenvalues(), isqrt * es.eigenvectors()};
}

}  // namespace

DispersionReport dispersion_check(const DiracModelSpec& spec,
                                  std::span<const double> k,
                                  bool time_domain) {
  if (!spec.A.empty())
    throw Error("dispersion check requires a free system (A = 0)");
  const FirstOrderSystem sys = assemble_model_dirac(spec);
  if (k.size() != static_cast<std::size_t>(sys.n - 1))
    throw Error("wave covector needs n-1 spatial components");

  const auto basis = plane_wave_basis(sys, k);
  DispersionReport rep;
  double k2 = 0.0;
  for (double ki : k) k2 += ki * ki;
  rep.target = std::sqrt(spec.m * spec.m + k2);
  rep.omega.assign(basis.omega.data(), basis.omega.data() + basis.omega.size());
  for (Eigen::Index i = 0; i < basis.omega.size(); ++i) {
    const double expect = i < basis.omega.size() / 2 ? -rep.target : rep.target;
    rep.max_deviation =
        std::max(rep.max_deviation, std::abs(basis.omega[i] - expect));
  }

  if (time_domain) {
    std::size_t j0 = k.size();
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (k[j] == 0.0) continue;
      if (j0 != k.size())
        throw Error("time-domain check needs a single nonzero component");
      j0 = j;
    }
    if (j0 == k.size()) throw Error("time-domain check needs a nonzero mode");
    const double qd = k[j0] / (2.0 * M_PI);
    const int q = static_cast<int>(std::lround(qd));
    if (std::abs(qd - q) > 1e-9 || q == 0)
      throw Error("wave number must be a 2 pi q box mode");

    const Eigen::VectorXcd u_hat = basis.modes.col(basis.modes.cols() - 1);
    for (int points : {64, 128})
      rep.time_errors.push_back(plane_wave_error(sys, static_cast<int>(j0) + 2, q,
                                                 points, 2, 0.2, rep.target, u_hat));
    rep.time_order = std::log2(rep.time_errors[0] / rep.time_errors[1]);
  }
  return rep;
}

ConvergenceReport plane_wave_convergence(const DiracModelSpec& spec, int q,
                                         std::span<const int> levels,
                                         int stencil_order, double final_time) {
  if (!spec.A.empty())
    throw Error("convergence study requires a free system (A = 0)");
  const FirstOrderSystem sys = assemble_model_dirac(spec);
  std::vector<double> k(static_cast<std::size_t>(sys.n - 1), 0.0);
  k[0] = 2.0 * M_PI * q;
  const auto basis = plane_wave_basis(sys, k);
  const double omega = basis.omega[basis.omega.size() - 1];
  const Eigen::VectorXcd u_hat = basis.modes.col(basis.modes.cols() - 1);

  ConvergenceReport rep;
  for (int points : levels) {
    rep.levels.push_back(points);
    rep.errors.push_back(plane_wave_error(sys, 2, q, points, stencil_order,
                                          final_time, omega, u_hat));
  }
  for (std::size_t i = 0; i + 1 < rep.errors.size(); ++i)
    rep.orders.push_back(std::log2(rep.errors[i] / rep.errors[i + 1]));
  return rep;
}

}  // namespace cliffsolve
