#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "cliffsolve/multivector.hpp"

namespace cliffsolve {

// Constant-coefficient symmetric first-order system
//   sum_i H_i d_i u + M(x) u = j(x),   i = 1..n,  x^1 = time.
// All H_i Hermitian, H_1 positive definite (validated, not assumed).
// M(x) = M + sum_k envelope_k(x) * term_k; envelopes and the source see the
// spatial coordinates of the active axes, in grid-axis order.
struct FirstOrderSystem {
  int n = 0;
  int D = 0;
  std::vector<Eigen::MatrixXcd> H;  // H[i-1] multiplies d_i u
  Eigen::MatrixXcd M;               // constant part, D x D (may be zero-sized)

  using SpatialFn = std::function<double(std::span<const double>)>;
  struct VaryingTerm {
    SpatialFn envelope;
    Eigen::MatrixXcd op;
  };
  std::vector<VaryingTerm> M_varying;

  std::function<Eigen::VectorXcd(std::span<const double>)> source;  // null = 0
};

struct FriedrichsReport {
  bool pass;
  std::vector<double> hermiticity_residuals;  // per H_i, max |H - H^dagger|
  double gamma;                               // min eigenvalue of H_1
  double h1_max_eigenvalue;
};

// Condition a): every H_i Hermitian within 1e-10, H_1 positive definite
// with gamma > 1e-10. Report-only.
FriedrichsReport validate_friedrichs(const FirstOrderSystem& sys);

// Condition b) pointwise: sum_i tau_i H_i for an exterior normal tau,
// with its minimum eigenvalue. Throws on a zero normal.
std::pair<Eigen::MatrixXcd, double> boundary_flux_matrix(
    const FirstOrderSystem& sys, std::span<const double> tau);

struct AxisSpec {
  int axis = 2;       // coordinate index in 2..n
  double extent = 1;  // periodic box length
  int points = 0;
};

struct Grid {
  std::vector<AxisSpec> axes;  // active axes, strictly increasing
  int steps = 0;
  double cfl = 0.4;
  double dt = 0.0;        // 0: derive dt = cfl * min dx / lambda_max
  int stencil_order = 2;  // central differences, 2 or 4
};

double axis_spacing(const AxisSpec& a);

// State on one time slice: point-major, data[p*D + c], points flattened
// row-major over the active axes.
struct FieldGrid {
  int D = 0;
  std::vector<std::size_t> shape;
  std::vector<Complex> data;
  double time = 0.0;

  std::size_t points() const {
    std::size_t p = 1;
    for (auto s : shape) p *= s;
    return p;
  }
  Complex* point(std::size_t p) { return data.data() + p * static_cast<std::size_t>(D); }
  const Complex* point(std::size_t p) const {
    return data.data() + p * static_cast<std::size_t>(D);
  }
};

FieldGrid zero_field(const Grid& grid, int D);

// Spatial coordinates of flattened point index p, one per active axis.
std::vector<double> point_coords(const Grid& grid, std::size_t p);

// Kernel selection. Serial and OpenMP share one code path (bitwise
// identical results, OpenMP only splits the point loop); Reference is an
// independent naive evaluation kept as a test oracle.
enum class ExecPolicy { Serial, OpenMP, Reference };

// The system bound to a grid: H_1 factored, per-point lower-order matrices
// and sources sampled, CFL time step derived.
class CompiledSystem {
 public:
  CompiledSystem(const FirstOrderSystem& sys, const Grid& grid);

  // du = -H1^{-1} (sum_{i>=2} H_i D_i u + M(x) u - j(x))
  void eval_rhs(std::span<const Complex> u, std::span<Complex> du,
                ExecPolicy policy) const;

  double lambda_max() const { return lambda_max_; }
  double dt() const { return dt_; }
  int D() const { return d_; }
  std::size_t points() const { return points_; }
  const Grid& grid() const { return grid_; }

 private:
  void rhs_fused(std::span<const Complex> u, std::span<Complex> du,
                 bool parallel) const;
  void rhs_reference(std::span<const Complex> u, std::span<Complex> du) const;

  Grid grid_;
  int d_ = 0;
  std::size_t points_ = 1;
  std::vector<std::size_t> strides_;       // per active axis
  std::vector<std::size_t> shape_;
  std::vector<Eigen::MatrixXcd> conv_;     // H1^{-1} H_axis per active axis
  std::vector<Eigen::MatrixXcd> pointwise_;  // H1^{-1} M(x_p); size 1 if constant
  std::vector<Eigen::VectorXcd> src_;        // H1^{-1} j(x_p); empty if zero
  double lambda_max_ = 0.0;
  double dt_ = 0.0;
};

struct SolveOptions {
  ExecPolicy policy = ExecPolicy::Serial;
  int sample_every = 0;  // 0: keep first and last slice only
  // called with the slice after each step (and once with the initial data)
  std::function<void(int step, const FieldGrid&)> on_step;
  // mutation hook applied after each step, before on_step sees the slice
  std::function<void(int step, FieldGrid&)> post_step;
};

struct Trajectory {
  std::vector<FieldGrid> slices;
  std::vector<int> slice_steps;
  double dt = 0.0;
  int steps = 0;
};

// Classical RK4 over the compiled right-hand side. Validates the Friedrichs
// conditions, the grid, and the CFL bound; aborts on non-finite values.
Trajectory solve_cauchy(const FirstOrderSystem& sys, const FieldGrid& psi0,
                        const Grid& grid, const SolveOptions& opts = {});

// E = sum_p (H_1 u_p, u_p) * prod dx. Real and nonnegative for valid systems;
// summed serially so results are reproducible.
double energy(const FirstOrderSystem& sys, const FieldGrid& slice,
              const Grid& grid);

}  // namespace cliffsolve
