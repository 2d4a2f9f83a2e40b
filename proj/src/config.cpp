#include "cliffsolve/config.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <utility>

namespace cliffsolve {

namespace {

using value_t = Json::value_t;

void json_escape(const std::string& s, std::string& out) {
  out += '"';
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(ch));
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

bool is_scalar(const Json& j) {
  return !j.is_object() && !j.is_array();
}

void dump_rec(const Json& j, std::string& out, int depth) {
  const auto pad = [&out](int d) { out.append(2 * static_cast<std::size_t>(d), ' '); };
  switch (j.type()) {
    case value_t::null:
      out += "null";
      break;
    case value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      break;
    case value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      break;
    }
    case value_t::string:
      json_escape(j.get<std::string>(), out);
      break;
    case value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      bool flat = true;
      for (const auto& v : j) flat = flat && is_scalar(v);
      if (flat) {
        out += '[';
        bool first = true;
        for (const auto& v : j) {
          if (!first) out += ", ";
          first = false;
          dump_rec(v, out, depth);
        }
        out += ']';
      } else {
        out += "[\n";
        bool first = true;
        for (const auto& v : j) {
          if (!first) out += ",\n";
          first = false;
          pad(depth + 1);
          dump_rec(v, out, depth + 1);
        }
        out += '\n';
        pad(depth);
        out += ']';
      }
      break;
    }
    case value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (const auto& item : j.items()) {
        if (!first) out += ",\n";
        first = false;
        pad(depth + 1);
        json_escape(item.key(), out);
        out += ": ";
        dump_rec(item.value(), out, depth + 1);
      }
      out += '\n';
      pad(depth);
      out += '}';
      break;
    }
    default:
      out += "null";
      break;
  }
}

const Json* find(const Json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

void expect_object(const Json& j, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected a JSON object");
}

void expect_keys(const Json& j, const std::string& ctx,
                 std::initializer_list<const char*> allowed) {
  expect_object(j, ctx);
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) throw ConfigError(ctx + ": unknown key \"" + item.key() + "\"");
  }
}

double as_num(const Json& v, const std::string& ctx) {
  if (!v.is_number()) throw ConfigError(ctx + ": expected a number");
  return v.get<double>();
}

int as_int(const Json& v, const std::string& ctx) {
  if (!v.is_number_integer()) throw ConfigError(ctx + ": expected an integer");
  return static_cast<int>(v.get<std::int64_t>());
}

bool as_bool(const Json& v, const std::string& ctx) {
  if (!v.is_boolean()) throw ConfigError(ctx + ": expected a boolean");
  return v.get<bool>();
}

std::string as_str(const Json& v, const std::string& ctx) {
  if (!v.is_string()) throw ConfigError(ctx + ": expected a string");
  return v.get<std::string>();
}

double num_or(const Json& j, const char* key, double def, const std::string& ctx) {
  const Json* v = find(j, key);
  return v ? as_num(*v, ctx + "." + key) : def;
}

int int_or(const Json& j, const char* key, int def, const std::string& ctx) {
  const Json* v = find(j, key);
  return v ? as_int(*v, ctx + "." + key) : def;
}

// Failures while interpreting config-supplied constants (multivector
// literals, idempotent values, tetrad matrices) are configuration errors;
// conditions that need the assembled model stay ordinary Errors.
template <typename F>
auto config_scope(const std::string& ctx, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(ctx + ": " + e.what());
  }
}

Multivector parse_mv(const Json& v, Signature sig, const std::string& ctx) {
  const std::string text = as_str(v, ctx);
  return config_scope(ctx, [&] { return parse_multivector(text, sig); });
}

ScalarProfile parse_profile(const Json& j, const std::string& ctx) {
  expect_object(j, ctx);
  const Json* kv = find(j, "kind");
  const std::string kind = kv ? as_str(*kv, ctx + ".kind") : "constant";
  if (kind == "constant") {
    expect_keys(j, ctx, {"kind", "amplitude"});
    return ScalarProfile::constant(num_or(j, "amplitude", 1.0, ctx));
  }
  if (kind == "gaussian") {
    expect_keys(j, ctx, {"kind", "amplitude", "axis", "center", "width"});
    ScalarProfile p = ScalarProfile::gaussian(
        num_or(j, "center", 0.5, ctx), num_or(j, "width", 0.1, ctx),
        num_or(j, "amplitude", 1.0, ctx), int_or(j, "axis", 0, ctx));
    if (p.width <= 0.0) throw ConfigError(ctx + ".width: must be positive");
    return p;
  }
  if (kind == "fourier") {
    expect_keys(j, ctx, {"kind", "amplitude", "axis", "mode", "extent", "phase"});
    ScalarProfile p = ScalarProfile::fourier_mode(
        int_or(j, "mode", 1, ctx), num_or(j, "extent", 1.0, ctx),
        num_or(j, "amplitude", 1.0, ctx), num_or(j, "phase", 0.0, ctx),
        int_or(j, "axis", 0, ctx));
    if (p.extent <= 0.0) throw ConfigError(ctx + ".extent: must be positive");
    return p;
  }
  throw ConfigError(ctx + ".kind: unknown profile kind \"" + kind + "\"");
}

ScalarProfile profile_or_unit(const Json& j, const char* key, const std::string& ctx) {
  const Json* v = find(j, key);
  return v ? parse_profile(*v, ctx + "." + key) : ScalarProfile::constant(1.0);
}

Tetrad parse_tetrad(const Json* j, Signature sig) {
  const std::string ctx = "tetrad";
  if (!j) return Tetrad::identity(sig);
  expect_object(*j, ctx);
  const Json* kv = find(*j, "kind");
  const std::string kind = kv ? as_str(*kv, ctx + ".kind") : "identity";
  if (kind == "identity") {
    expect_keys(*j, ctx, {"kind"});
    return Tetrad::identity(sig);
  }
  if (kind == "boost") {
    expect_keys(*j, ctx, {"kind", "chi"});
    if (sig.n() != 2 || sig.r != 1)
      throw ConfigError(ctx + ": the boost family is defined in signature (1,1)");
    return Tetrad::boost(num_or(*j, "chi", 0.0, ctx));
  }
  if (kind == "matrix") {
    expect_keys(*j, ctx, {"kind", "rows"});
    const Json* rows = find(*j, "rows");
    if (!rows || !rows->is_array() || rows->size() != static_cast<std::size_t>(sig.n()))
      throw ConfigError(ctx + ".rows: expected " + std::to_string(sig.n()) + " rows");
    Eigen::MatrixXd y(sig.n(), sig.n());
    for (int mu = 0; mu < sig.n(); ++mu) {
      const Json& row = (*rows)[static_cast<std::size_t>(mu)];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(sig.n()))
        throw ConfigError(ctx + ".rows: row " + std::to_string(mu) + " needs " +
                          std::to_string(sig.n()) + " entries");
      for (int a = 0; a < sig.n(); ++a)
        y(mu, a) = as_num(row[static_cast<std::size_t>(a)], ctx + ".rows");
    }
    return config_scope(ctx, [&] { return Tetrad(sig, y); });
  }
  throw ConfigError(ctx + ".kind: unknown tetrad kind \"" + kind + "\"");
}

HermitianIdempotent parse_idempotent(const Json* v, Signature sig) {
  const std::string ctx = "model.idempotent";
  std::string name = "t2";
  if (v) name = as_str(*v, ctx);
  if (name.size() == 2 && name[0] == 't' && name[1] >= '0' && name[1] <= '4') {
    if (!(sig.r == 1 && sig.s == 3))
      throw ConfigError(ctx + ": canonical name \"" + name +
                        "\" resolves only in signature (1,3); give an explicit value");
    return canonical_idempotent(name[1] - '0');
  }
  const Multivector t = config_scope(ctx, [&] { return parse_multivector(name, sig); });
  return config_scope(ctx, [&] { return HermitianIdempotent(t); });
}

ParityRestriction parse_restriction(const Json* v, const std::string& ctx) {
  if (!v) return ParityRestriction::None;
  const std::string s = as_str(*v, ctx);
  if (s == "none") return ParityRestriction::None;
  if (s == "even") return ParityRestriction::Even;
  if (s == "odd") return ParityRestriction::Odd;
  throw ConfigError(ctx + ": expected \"none\", \"even\", or \"odd\"");
}

void parse_model(const Json* j, RunConfig& cfg, Tetrad tetrad) {
  const std::string ctx = "model";
  const Json empty = Json::object();
  const Json& m = j ? *j : empty;
  expect_object(m, ctx);
  const Json* kv = find(m, "kind");
  const std::string kind = kv ? as_str(*kv, ctx + ".kind") : "dirac";

  if (kind == "dirac") {
    expect_keys(m, ctx, {"kind", "idempotent", "mass", "potential"});
    cfg.kind = ModelKind::Dirac;
    DiracModelSpec spec{std::move(tetrad), parse_idempotent(find(m, "idempotent"), cfg.sig)};
    spec.m = num_or(m, "mass", 1.0, ctx);
    if (const Json* pot = find(m, "potential")) {
      if (!pot->is_array()) throw ConfigError(ctx + ".potential: expected an array");
      for (std::size_t i = 0; i < pot->size(); ++i) {
        const std::string pctx = ctx + ".potential[" + std::to_string(i) + "]";
        const Json& entry = (*pot)[i];
        expect_keys(entry, pctx, {"mu", "value", "envelope"});
        const Json* val = find(entry, "value");
        if (!val) throw ConfigError(pctx + ": missing \"value\"");
        GaugeComponent g{int_or(entry, "mu", 1, pctx),
                         parse_mv(*val, cfg.sig, pctx + ".value"),
                         profile_or_unit(entry, "envelope", pctx)};
        if (g.mu < 1 || g.mu > cfg.sig.n())
          throw ConfigError(pctx + ".mu: out of range 1.." + std::to_string(cfg.sig.n()));
        spec.A.push_back(std::move(g));
      }
    }
    cfg.dirac = std::move(spec);
    return;
  }

  if (kind == "hestenes") {
    expect_keys(m, ctx, {"kind", "K", "mass", "covector", "parity"});
    if (!(cfg.sig.r == 1 && cfg.sig.s == 3))
      throw ConfigError(ctx + ": the Hestenes form is defined in signature (1,3)");
    cfg.kind = ModelKind::Hestenes;
    Multivector k = default_hestenes_K(cfg.sig);
    if (const Json* kval = find(m, "K")) k = parse_mv(*kval, cfg.sig, ctx + ".K");
    HestenesModelSpec spec{std::move(tetrad), std::move(k)};
    spec.m = num_or(m, "mass", 1.0, ctx);
    if (const Json* cov = find(m, "covector")) {
      if (!cov->is_array()) throw ConfigError(ctx + ".covector: expected an array");
      for (std::size_t i = 0; i < cov->size(); ++i) {
        const std::string pctx = ctx + ".covector[" + std::to_string(i) + "]";
        const Json& entry = (*cov)[i];
        expect_keys(entry, pctx, {"mu", "profile"});
        CovectorComponent c{int_or(entry, "mu", 1, pctx),
                            profile_or_unit(entry, "profile", pctx)};
        if (c.mu < 1 || c.mu > cfg.sig.n())
          throw ConfigError(pctx + ".mu: out of range 1.." + std::to_string(cfg.sig.n()));
        spec.a.push_back(std::move(c));
      }
    }
    const ParityRestriction p = parse_restriction(find(m, "parity"), ctx + ".parity");
    if (p == ParityRestriction::Odd) spec.psi_parity = Parity::Odd;
    cfg.hestenes = std::move(spec);
    return;
  }

  if (kind == "equipped") {
    expect_keys(m, ctx, {"kind", "terms", "source", "restriction"});
    cfg.kind = ModelKind::Equipped;
    EquippedSystemSpec spec{std::move(tetrad)};
    if (const Json* terms = find(m, "terms")) {
      if (!terms->is_array()) throw ConfigError(ctx + ".terms: expected an array");
      for (std::size_t i = 0; i < terms->size(); ++i) {
        const std::string pctx = ctx + ".terms[" + std::to_string(i) + "]";
        const Json& entry = (*terms)[i];
        expect_keys(entry, pctx, {"A", "B", "envelope"});
        const Json* a = find(entry, "A");
        const Json* b = find(entry, "B");
        if (!a || !b) throw ConfigError(pctx + ": needs both \"A\" and \"B\"");
        spec.terms.push_back({parse_mv(*a, cfg.sig, pctx + ".A"),
                              parse_mv(*b, cfg.sig, pctx + ".B"),
                              profile_or_unit(entry, "envelope", pctx)});
      }
    }
    if (const Json* src = find(m, "source")) {
      const std::string pctx = ctx + ".source";
      expect_keys(*src, pctx, {"f", "envelope"});
      const Json* f = find(*src, "f");
      if (!f) throw ConfigError(pctx + ": missing \"f\"");
      spec.source = EquippedSource{parse_mv(*f, cfg.sig, pctx + ".f"),
                                   profile_or_unit(*src, "envelope", pctx)};
    }
    spec.restriction = parse_restriction(find(m, "restriction"), ctx + ".restriction");
    cfg.equipped = std::move(spec);
    return;
  }

  throw ConfigError(ctx + ".kind: unknown model kind \"" + kind + "\"");
}

Grid parse_grid(const Json* j, Signature sig) {
  const std::string ctx = "grid";
  Grid g;
  g.axes = {AxisSpec{2, 1.0, 256}};
  g.steps = 500;
  if (j) {
    expect_keys(*j, ctx, {"axes", "steps", "cfl", "dt", "stencil_order"});
    if (const Json* axes = find(*j, "axes")) {
      if (!axes->is_array() || axes->empty())
        throw ConfigError(ctx + ".axes: expected a non-empty array");
      g.axes.clear();
      for (std::size_t i = 0; i < axes->size(); ++i) {
        const std::string actx = ctx + ".axes[" + std::to_string(i) + "]";
        const Json& entry = (*axes)[i];
        expect_keys(entry, actx, {"axis", "extent", "points"});
        g.axes.push_back(AxisSpec{int_or(entry, "axis", 2, actx),
                                  num_or(entry, "extent", 1.0, actx),
                                  int_or(entry, "points", 256, actx)});
      }
    }
    g.steps = int_or(*j, "steps", g.steps, ctx);
    g.cfl = num_or(*j, "cfl", g.cfl, ctx);
    g.dt = num_or(*j, "dt", g.dt, ctx);
    g.stencil_order = int_or(*j, "stencil_order", g.stencil_order, ctx);
  }
  int prev = 1;
  for (const AxisSpec& a : g.axes) {
    if (a.axis <= prev || a.axis > sig.n())
      throw ConfigError(ctx + ".axes: axis indices must be strictly increasing in 2.." +
                        std::to_string(sig.n()));
    if (a.extent <= 0.0) throw ConfigError(ctx + ".axes: extent must be positive");
    if (a.points < 1) throw ConfigError(ctx + ".axes: points must be at least 1");
    prev = a.axis;
  }
  if (g.steps < 0) throw ConfigError(ctx + ".steps: must be nonnegative");
  if (g.cfl <= 0.0) throw ConfigError(ctx + ".cfl: must be positive");
  if (g.dt < 0.0) throw ConfigError(ctx + ".dt: must be nonnegative");
  if (g.stencil_order != 2 && g.stencil_order != 4)
    throw ConfigError(ctx + ".stencil_order: must be 2 or 4");
  return g;
}

Multivector random_state(Signature sig, std::uint64_t seed,
                         std::optional<Parity> restrict_to) {
  std::mt19937_64 rng(seed);
  // Uniform in [-1, 1), built from raw ticks so the stream is identical
  // across standard library implementations.
  const auto unit = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1p-52 - 1.0;
  };
  Multivector u(sig);
  for (BladeMask m = 0; m < sig.dim(); ++m) u[m] = Complex{unit(), unit()};
  if (restrict_to) u = parity_project(u, *restrict_to);
  return u;
}

InitialData resolve_initial(const Json* j, const RunConfig& cfg) {
  const std::string ctx = "initial";
  std::string state;
  ScalarProfile profile = ScalarProfile::gaussian(0.5, 0.1);
  if (j) {
    expect_keys(*j, ctx, {"state", "profile"});
    if (const Json* s = find(*j, "state")) state = as_str(*s, ctx + ".state");
    if (const Json* p = find(*j, "profile")) profile = parse_profile(*p, ctx + ".profile");
  }
  if (state.empty()) {
    switch (cfg.kind) {
      case ModelKind::Dirac: state = "t"; break;
      case ModelKind::Hestenes:
        state = cfg.hestenes->psi_parity == Parity::Odd ? "e^1" : "e";
        break;
      case ModelKind::Equipped:
        state = cfg.equipped->restriction == ParityRestriction::Odd ? "e^1" : "e";
        break;
    }
  }
  Multivector u0(cfg.sig);
  if (state == "t" || state == "t_dual") {
    if (cfg.kind != ModelKind::Dirac)
      throw ConfigError(ctx + ".state: \"" + state + "\" refers to the dirac model idempotent");
    u0 = state == "t" ? cfg.dirac->t.value() : cfg.dirac->t.dual_value();
  } else if (state == "e" || state == "identity") {
    u0 = Multivector::identity(cfg.sig);
  } else if (state == "random") {
    u0 = random_state(cfg.sig, cfg.seed, state_restriction(cfg));
  } else {
    u0 = parse_mv(Json(state), cfg.sig, ctx + ".state");
  }
  return InitialData{std::move(u0), profile};
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump_rec(j, out, 0);
  out += '\n';
  return out;
}

RunConfig parse_config(const Json& j, std::optional<std::uint64_t> seed_override) {
  expect_keys(j, "config",
              {"signature", "tetrad", "model", "grid", "initial", "solve", "energy",
               "dispersion", "boundary_normal", "tolerances", "seed"});
  RunConfig cfg;

  if (const Json* sj = find(j, "signature")) {
    expect_keys(*sj, "signature", {"r", "s"});
    const int r = int_or(*sj, "r", 1, "signature");
    const int s = int_or(*sj, "s", 3, "signature");
    cfg.sig = config_scope("signature", [&] { return make_signature(r, s); });
  }

  if (const Json* sv = find(j, "seed")) {
    if (!sv->is_number_unsigned() && !(sv->is_number_integer() && sv->get<std::int64_t>() >= 0))
      throw ConfigError("seed: expected a nonnegative integer");
    cfg.seed = sv->get<std::uint64_t>();
  }
  if (seed_override) cfg.seed = *seed_override;

  Tetrad tetrad = parse_tetrad(find(j, "tetrad"), cfg.sig);
  parse_model(find(j, "model"), cfg, std::move(tetrad));
  cfg.grid = parse_grid(find(j, "grid"), cfg.sig);

  if (const Json* so = find(j, "solve")) {
    expect_keys(*so, "solve", {"policy", "sample_every"});
    if (const Json* pv = find(*so, "policy")) {
      const std::string p = as_str(*pv, "solve.policy");
      if (p == "serial")
        cfg.policy = ExecPolicy::Serial;
      else if (p == "openmp")
        cfg.policy = ExecPolicy::OpenMP;
      else if (p == "reference")
        cfg.policy = ExecPolicy::Reference;
      else
        throw ConfigError("solve.policy: expected \"serial\", \"openmp\", or \"reference\"");
    }
    cfg.sample_every = int_or(*so, "sample_every", 0, "solve");
    if (cfg.sample_every < 0) throw ConfigError("solve.sample_every: must be nonnegative");
  }

  if (const Json* ej = find(j, "energy")) {
    expect_keys(*ej, "energy", {"log_every"});
    cfg.energy_log_every = int_or(*ej, "log_every", 1, "energy");
    if (cfg.energy_log_every < 1) throw ConfigError("energy.log_every: must be at least 1");
  }

  cfg.dispersion_k.assign(static_cast<std::size_t>(cfg.sig.n() - 1), 0.0);
  if (!cfg.dispersion_k.empty()) cfg.dispersion_k[0] = 2.0 * M_PI;
  if (const Json* dj = find(j, "dispersion")) {
    expect_keys(*dj, "dispersion", {"k", "time_domain", "convergence"});
    if (const Json* kv = find(*dj, "k")) {
      if (!kv->is_array() || kv->size() != cfg.dispersion_k.size())
        throw ConfigError("dispersion.k: expected " +
                          std::to_string(cfg.dispersion_k.size()) +
                          " covector components (axes 2.." + std::to_string(cfg.sig.n()) + ")");
      for (std::size_t i = 0; i < kv->size(); ++i)
        cfg.dispersion_k[i] = as_num((*kv)[i], "dispersion.k");
    }
    if (const Json* tv = find(*dj, "time_domain"))
      cfg.dispersion_time_domain = as_bool(*tv, "dispersion.time_domain");
    if (const Json* cv = find(*dj, "convergence")) {
      expect_keys(*cv, "dispersion.convergence", {"q", "levels"});
      cfg.convergence_q = int_or(*cv, "q", 1, "dispersion.convergence");
      if (cfg.convergence_q < 1)
        throw ConfigError("dispersion.convergence.q: must be at least 1");
      cfg.convergence_levels = {128, 256, 512};
      if (const Json* lv = find(*cv, "levels")) {
        if (!lv->is_array() || lv->size() < 2)
          throw ConfigError("dispersion.convergence.levels: expected at least two levels");
        cfg.convergence_levels.clear();
        for (const Json& e : *lv) {
          const int p = as_int(e, "dispersion.convergence.levels");
          if (p < 4) throw ConfigError("dispersion.convergence.levels: levels must be >= 4");
          cfg.convergence_levels.push_back(p);
        }
      }
    }
  }

  cfg.boundary_normal.assign(static_cast<std::size_t>(cfg.sig.n()), 0.0);
  cfg.boundary_normal[0] = 1.0;
  if (const Json* bn = find(j, "boundary_normal")) {
    if (!bn->is_array() || bn->size() != cfg.boundary_normal.size())
      throw ConfigError("boundary_normal: expected " + std::to_string(cfg.sig.n()) +
                        " components");
    for (std::size_t i = 0; i < bn->size(); ++i)
      cfg.boundary_normal[i] = as_num((*bn)[i], "boundary_normal");
  }

  if (const Json* tj = find(j, "tolerances")) {
    expect_keys(*tj, "tolerances",
                {"hermiticity", "leakage", "restricted", "control", "energy_drift",
                 "dispersion", "min_order"});
    Tolerances& t = cfg.tol;
    t.hermiticity = num_or(*tj, "hermiticity", t.hermiticity, "tolerances");
    t.leakage = num_or(*tj, "leakage", t.leakage, "tolerances");
    t.restricted = num_or(*tj, "restricted", t.restricted, "tolerances");
    t.control = num_or(*tj, "control", t.control, "tolerances");
    t.energy_drift = num_or(*tj, "energy_drift", t.energy_drift, "tolerances");
    t.dispersion = num_or(*tj, "dispersion", t.dispersion, "tolerances");
    t.min_order = num_or(*tj, "min_order", t.min_order, "tolerances");
    for (double v : {t.hermiticity, t.leakage, t.restricted, t.control, t.energy_drift,
                     t.dispersion, t.min_order})
      if (!(v > 0.0)) throw ConfigError("tolerances: every threshold must be positive");
  }

  cfg.initial = resolve_initial(find(j, "initial"), cfg);
  return cfg;
}

FirstOrderSystem assemble(const RunConfig& cfg) {
  switch (cfg.kind) {
    case ModelKind::Equipped: return assemble_equipped(*cfg.equipped);
    case ModelKind::Dirac: return assemble_model_dirac(*cfg.dirac);
    case ModelKind::Hestenes: return assemble_dirac_hestenes(*cfg.hestenes);
  }
  throw Error("assemble: unreachable model kind");
}

std::optional<Parity> state_restriction(const RunConfig& cfg) {
  switch (cfg.kind) {
    case ModelKind::Dirac: return {};
    case ModelKind::Hestenes: return cfg.hestenes->psi_parity;
    case ModelKind::Equipped:
      switch (cfg.equipped->restriction) {
        case ParityRestriction::None: return {};
        case ParityRestriction::Even: return Parity::Even;
        case ParityRestriction::Odd: return Parity::Odd;
      }
  }
  return {};
}

const Tetrad& config_tetrad(const RunConfig& cfg) {
  switch (cfg.kind) {
    case ModelKind::Equipped: return cfg.equipped->tetrad;
    case ModelKind::Dirac: return cfg.dirac->tetrad;
    case ModelKind::Hestenes: return cfg.hestenes->tetrad;
  }
  throw Error("config_tetrad: unreachable model kind");
}

InitialData initial_data(const RunConfig& cfg) { return *cfg.initial; }

}  // namespace cliffsolve
