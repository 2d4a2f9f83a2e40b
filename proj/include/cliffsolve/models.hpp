#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cliffsolve/idempotent.hpp"
#include "cliffsolve/multivector.hpp"
#include "cliffsolve/solver.hpp"
#include "cliffsolve/tetrad.hpp"

namespace cliffsolve {

// Real scalar envelope over the active-axis coordinates. Fourier modes are
// periodic-box modes sin(2 pi mode x / extent + phase), so plane waves stay
// exact on the torus when extent matches the grid.
struct ScalarProfile {
  enum class Kind { Constant, Gaussian, FourierMode };
  Kind kind = Kind::Constant;
  double amplitude = 1.0;
  int axis = 0;  // index into the active-axis coordinate list
  double center = 0.5;
  double width = 0.1;
  int mode = 1;
  double extent = 1.0;
  double phase = 0.0;

  static ScalarProfile constant(double c) { return {Kind::Constant, c}; }
  static ScalarProfile gaussian(double center, double width, double amp = 1.0,
                                int axis = 0) {
    ScalarProfile p{Kind::Gaussian, amp, axis};
    p.center = center;
    p.width = width;
    return p;
  }
  static ScalarProfile fourier_mode(int mode, double extent, double amp = 1.0,
                                    double phase = 0.0, int axis = 0) {
    ScalarProfile p{Kind::FourierMode, amp, axis};
    p.mode = mode;
    p.extent = extent;
    p.phase = phase;
    return p;
  }

  bool is_constant() const { return kind == Kind::Constant; }
  double operator()(std::span<const double> x) const;
};

enum class ParityRestriction { None, Even, Odd };  // parity of the unknown

// One lower-order term of the pre-symmetrized equation
//   h^mu d_mu phi + sum_j envelope_j(x) A_j phi B_j = f,
// assembled as envelope(x) * L_{beta A} R_B after beta-symmetrization.
struct EquippedTerm {
  Multivector A;
  Multivector B;
  ScalarProfile envelope = ScalarProfile::constant(1.0);
};

struct EquippedSource {
  Multivector f;
  ScalarProfile envelope = ScalarProfile::constant(1.0);
};

struct EquippedSystemSpec {
  Tetrad tetrad;
  std::vector<EquippedTerm> terms;
  std::optional<EquippedSource> source;
  ParityRestriction restriction = ParityRestriction::None;
};

// beta-symmetrized system: H_mu = L_{beta h^mu} (Hermitian for proper
// orthochronous tetrads, H_1 positive definite), M = sum of the assembled
// term operators, source = coefficients of beta f. With a parity
// restriction the state is the 2^{n-1} coefficients of that parity and
// every term must preserve it: (A even, B odd) or (A odd, B even), source
// of the parity opposite to the unknown. Throws when the grading is broken
// or H_1 fails positivity.
FirstOrderSystem assemble_equipped(const EquippedSystemSpec& spec);

// gauge component A_mu(x) = envelope(x) * value, value constant in L(t)
struct GaugeComponent {
  int mu = 1;
  Multivector value;
  ScalarProfile envelope = ScalarProfile::constant(1.0);
};

struct DiracModelSpec {
  Tetrad tetrad;
  HermitianIdempotent t;
  double m = 1.0;
  std::vector<GaugeComponent> A;  // empty: free equation
};

// h^mu (d_mu psi + psi A_mu) + i m psi = 0 in the full 2^n state space:
// M(x) = sum_mu L_{beta h^mu} R_{A_mu(x)} + i m L_beta. Every A_mu value
// must lie in L(t) within 1e-10.
FirstOrderSystem assemble_model_dirac(const DiracModelSpec& spec);

struct CovectorComponent {
  int mu = 1;
  ScalarProfile profile;  // real a_mu(x)
};

struct HestenesModelSpec {
  Tetrad tetrad;  // signature (1,3)
  Multivector K;  // grade 2, K^2 = -e, beta K = K beta
  double m = 1.0;
  std::vector<CovectorComponent> a;  // empty: free equation
  Parity psi_parity = Parity::Even;
};

Multivector default_hestenes_K(Signature sig);  // -e^23

// d Psi + A Psi K + m Psi K beta = 0 with A = a_mu(x) h^mu, restricted to
// one parity (D = 8): M = sum_mu a_mu(x) L_{beta h^mu} R_K + m L_beta R_{K beta}.
FirstOrderSystem assemble_dirac_hestenes(const HestenesModelSpec& spec);

// initial data profile(x) * U0 sampled on the grid
struct InitialData {
  Multivector U0;
  ScalarProfile profile;
};

// full-space coefficients by default; pass a parity to sample data for a
// restricted system (U0 must be pure in that parity)
FieldGrid sample_initial(const Grid& grid, const InitialData& init,
                         std::optional<Parity> restrict_to = {});

struct EnergyReport {
  double e0 = 0.0;
  double e_final = 0.0;
  double drift = 0.0;  // max over the series of |e - e0| / e0, 0 when e0 = 0
  double dt = 0.0;
  std::vector<int> steps;
  std::vector<double> series;
};

// solve and log the energy every log_every steps (plus first and last)
EnergyReport energy_run(const FirstOrderSystem& sys, const FieldGrid& psi0,
                        const Grid& grid, int log_every = 1,
                        ExecPolicy policy = ExecPolicy::Serial);

struct TheoremReport {
  double gamma = 0.0;
  std::vector<double> hermiticity_residuals;
  double leakage_max = 0.0;       // max over steps of |Psi t'|_inf / |Psi|_inf
  double zero_leakage = 0.0;      // absolute |Psi t'|_inf, data in I(t)
  double equation_residual = 0.0; // discrete residual of the original equation
  double restricted_agreement = 0.0;  // projected-state run vs equipped run
  double control_residual = 0.0;  // t'-data equipped run vs independent free run
  double energy_drift = 0.0;      // main run
};

// Ideal-preservation harness. Main run: equipped evolution from
// init in I(t); reports leakage, the discrete residual of the original
// (unsymmetrized) equation on phi = Psi t, energy drift, and the distance
// to a run whose state is projected to I(t) coefficients after each step.
// Control: data with a pure t' component must evolve like the separately
// assembled free equation (the gauge term annihilates I(t'), the mass term
// preserves it). Throws when init leaves I(t) by more than 1e-12.
TheoremReport verify_theorem(const DiracModelSpec& spec, const InitialData& init,
                             const Grid& grid);

struct DispersionReport {
  std::vector<double> omega;  // sorted spectrum of H1^{-1}(sum k_i H_i - i M)
  double target = 0.0;        // sqrt(m^2 + |k|^2)
  double max_deviation = 0.0; // spectrum vs +-target
  std::vector<double> time_errors;  // refinement study, when run
  double time_order = 0.0;          // observed order of the phase error
};

// Free-equation plane waves u = u_hat exp(i(k x - w x^1)). k holds the
// spatial covector components (k_2 .. k_n). The optional time-domain part
// evolves one +target mode at two resolutions (k must be a 2 pi q / L box
// mode) and measures the error order, expected ~2 for the default stencil.
// Throws when the spec carries a gauge potential.
DispersionReport dispersion_check(const DiracModelSpec& spec,
                                  std::span<const double> k,
                                  bool time_domain = false);

struct ConvergenceReport {
  std::vector<int> levels;
  std::vector<double> errors;  // L2 at the shared final time
  std::vector<double> orders;  // log2(e_i / e_{i+1})
};

// Free plane-wave refinement study on one active axis: initial data is the
// +omega eigenmode at k = 2 pi q / L, compared against its exact phase
// advance at a fixed final time.
ConvergenceReport plane_wave_convergence(const DiracModelSpec& spec, int q,
                                         std::span<const int> levels,
                                         int stencil_order = 2,
                                         double final_time = 0.25);

}  // namespace cliffsolve
