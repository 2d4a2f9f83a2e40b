#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cliffsolve/error.hpp"
#include "cliffsolve/models.hpp"
#include "json.hpp"

namespace cliffsolve {

// Insertion-ordered so reports serialize with a stable key order.
using Json = nlohmann::ordered_json;

// Bad or contradictory run configuration. Distinguished from Error so the
// CLI can map it to exit code 1 instead of 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Pass/fail thresholds; every field can be overridden from the config file.
struct Tolerances {
  double hermiticity = 1e-10;   // validate: max |H - H^dagger|
  double leakage = 1e-12;       // theorem: relative and zero-data leakage
  double restricted = 1e-11;    // theorem: projected-run agreement
  double control = 1e-11;       // theorem: dual-data control run
  double energy_drift = 1e-6;   // energy/theorem: relative drift
  double dispersion = 1e-10;    // spectrum vs +-sqrt(m^2 + |k|^2)
  double min_order = 1.8;       // refinement studies: observed order floor
};

enum class ModelKind { Equipped, Dirac, Hestenes };

// A parsed and resolved run description. Model specs and initial data are
// constructed eagerly, so everything representable here is well formed;
// conditions that depend on assembly (tetrad orientation, gauge membership,
// K identities) are still checked later and fail the run, not the parse.
struct RunConfig {
  Signature sig = Signature{1, 3};
  ModelKind kind = ModelKind::Dirac;
  std::optional<EquippedSystemSpec> equipped;
  std::optional<DiracModelSpec> dirac;
  std::optional<HestenesModelSpec> hestenes;

  Grid grid;
  std::optional<InitialData> initial;

  ExecPolicy policy = ExecPolicy::Serial;
  int sample_every = 0;
  int energy_log_every = 1;

  std::vector<double> dispersion_k;  // covector components k_2..k_n
  bool dispersion_time_domain = false;
  int convergence_q = 0;             // 0: skip the plane-wave refinement study
  std::vector<int> convergence_levels;

  std::vector<double> boundary_normal;  // length n, default (1, 0, ..., 0)

  Tolerances tol;
  std::uint64_t seed = 0;
};

// Builds a RunConfig from the parsed config file (an empty object yields the
// default free Dirac setup: signature (1,3), identity tetrad, t_2, m = 1,
// one 256-point axis, 500 steps, Gaussian data). Unknown keys, bad types,
// unresolvable names, and invalid constants all throw ConfigError.
RunConfig parse_config(const Json& j,
                       std::optional<std::uint64_t> seed_override = {});

// Assembles the configured model. Throws Error on violated model
// preconditions (exit code 2 territory).
FirstOrderSystem assemble(const RunConfig& cfg);

// Parity of the restricted state space, if the model has one.
std::optional<Parity> state_restriction(const RunConfig& cfg);

// The model's tetrad (every model kind carries one).
const Tetrad& config_tetrad(const RunConfig& cfg);

// Initial data resolved against the model (cfg.initial when set, otherwise
// a model-appropriate default profile and state).
InitialData initial_data(const RunConfig& cfg);

// Serializes with 17-significant-digit floats, 2-space indent, and a
// trailing newline, so identical reports are byte-identical files.
std::string dump_json(const Json& j);

}  // namespace cliffsolve
