#include "nsv/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "nsv/errors.hpp"
#include "nsv/operators.hpp"
#include "nsv/random_fields.hpp"
#include "nsv/snapshot.hpp"

namespace nsv {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

template <class T>
void get(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

FieldSpec parse_field(const json& j, const std::string& where) {
  FieldSpec f;
  check_keys(j, {"type", "amplitude", "wavenumber", "seed", "decay", "v_norm", "path", "factor", "of", "terms"},
             where);
  get(j, "type", f.type);
  get(j, "amplitude", f.amplitude);
  get(j, "wavenumber", f.wavenumber);
  get(j, "seed", f.seed);
  get(j, "decay", f.decay);
  get(j, "v_norm", f.v_norm);
  get(j, "path", f.path);
  get(j, "factor", f.factor);
  if (j.contains("of")) f.terms.push_back(parse_field(j.at("of"), where + ".of"));
  if (j.contains("terms"))
    for (const auto& t : j.at("terms")) f.terms.push_back(parse_field(t, where + ".terms"));
  static const std::set<std::string> types = {"zero", "shear", "random", "snapshot", "stokes", "sum"};
  if (!types.count(f.type)) throw ConfigError(where + ": unknown field type '" + f.type + "'");
  if (f.type == "stokes" && f.terms.size() != 1) throw ConfigError(where + ": stokes needs 'of'");
  return f;
}

json field_json(const FieldSpec& f) {
  json j;
  j["type"] = f.type;
  if (f.type == "shear") {
    j["amplitude"] = f.amplitude;
    j["wavenumber"] = f.wavenumber;
  } else if (f.type == "random") {
    j["seed"] = f.seed;
    j["decay"] = f.decay;
    j["v_norm"] = f.v_norm;
  } else if (f.type == "snapshot") {
    j["path"] = f.path;
  } else if (f.type == "stokes") {
    j["factor"] = f.factor;
    j["of"] = field_json(f.terms.at(0));
  } else if (f.type == "sum") {
    j["terms"] = json::array();
    for (const auto& t : f.terms) j["terms"].push_back(field_json(t));
  }
  return j;
}

Scheme parse_scheme(const std::string& s) {
  if (s == "imex_euler") return Scheme::ImexEuler;
  if (s == "imex_cnab2") return Scheme::ImexCnab2;
  throw ConfigError("unknown scheme '" + s + "'");
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig c;
  check_keys(j, {"grid", "physics", "stepper", "delay", "forcing", "hypotheses", "embedding",
                 "initial", "history", "certificates", "output", "attractor", "measure"},
             "config");
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, {"dim", "n", "box_length"}, "grid");
    get(g, "dim", c.dim);
    get(g, "n", c.n);
    get(g, "box_length", c.box_length);
  }
  if (j.contains("physics")) {
    const json& p = j.at("physics");
    check_keys(p, {"nu", "alpha", "h"}, "physics");
    get(p, "nu", c.nu);
    get(p, "alpha", c.alpha);
    get(p, "h", c.h);
  }
  if (j.contains("stepper")) {
    const json& s = j.at("stepper");
    check_keys(s, {"dt", "scheme", "t_start", "t_end", "convection"}, "stepper");
    get(s, "dt", c.dt);
    std::string scheme = scheme_name(c.scheme);
    get(s, "scheme", scheme);
    c.scheme = parse_scheme(scheme);
    get(s, "t_start", c.t_start);
    get(s, "t_end", c.t_end);
    get(s, "convection", c.convection);
  }
  if (j.contains("delay")) {
    const json& d = j.at("delay");
    check_keys(d, {"kind", "gain", "map", "tau0", "tau1", "omega", "kernel", "kernel_rate", "kernel_samples"},
               "delay");
    get(d, "kind", c.delay.kind);
    get(d, "gain", c.delay.gain);
    get(d, "map", c.delay.map);
    get(d, "tau0", c.delay.tau0);
    get(d, "tau1", c.delay.tau1);
    get(d, "omega", c.delay.omega);
    get(d, "kernel", c.delay.kernel);
    get(d, "kernel_rate", c.delay.kernel_rate);
    get(d, "kernel_samples", c.delay.kernel_samples);
  }
  if (j.contains("forcing")) {
    const json& f = j.at("forcing");
    check_keys(f, {"kind", "amplitude", "c0", "a1", "omega", "delta"}, "forcing");
    get(f, "kind", c.forcing.kind);
    if (f.contains("amplitude")) c.forcing.amplitude = parse_field(f.at("amplitude"), "forcing.amplitude");
    get(f, "c0", c.forcing.c0);
    get(f, "a1", c.forcing.a1);
    get(f, "omega", c.forcing.omega);
    get(f, "delta", c.forcing.delta);
  }
  if (j.contains("hypotheses")) {
    const json& h = j.at("hypotheses");
    check_keys(h, {"sigma", "beta", "cg_override", "override"}, "hypotheses");
    get(h, "sigma", c.sigma);
    get(h, "beta", c.beta);
    if (h.contains("cg_override") && !h.at("cg_override").is_null())
      c.cg_override = h.at("cg_override").get<double>();
    get(h, "override", c.override_hypotheses);
  }
  if (j.contains("embedding")) {
    const json& e = j.at("embedding");
    check_keys(e, {"C1", "C2", "C3", "C4", "C5", "C6", "C7", "C7p"}, "embedding");
    for (auto it = e.begin(); it != e.end(); ++it) c.embedding[it.key()] = it.value().get<double>();
  }
  if (j.contains("initial")) c.initial = parse_field(j.at("initial"), "initial");
  if (j.contains("history")) {
    const json& h = j.at("history");
    if (h.is_string()) {
      c.history = h.get<std::string>();
    } else {
      c.history = "field";
      c.history_field = parse_field(h, "history");
    }
    if (c.history != "constant" && c.history != "zero" && c.history != "field")
      throw ConfigError("history must be 'constant', 'zero' or a field");
  }
  get(j, "certificates", c.certificates);
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, {"dir"}, "output");
    get(o, "dir", c.output_dir);
  }
  if (j.contains("attractor")) {
    const json& a = j.at("attractor");
    check_keys(a, {"t_star", "taus", "family", "xi"}, "attractor");
    get(a, "t_star", c.attractor.t_star);
    get(a, "taus", c.attractor.taus);
    get(a, "xi", c.attractor.xi);
    if (a.contains("family"))
      for (const auto& f : a.at("family")) c.attractor.family.push_back(parse_field(f, "attractor.family"));
  }
  if (j.contains("measure")) {
    const json& m = j.at("measure");
    check_keys(m, {"t", "tau", "depth", "doublings", "stride", "functionals", "rho"}, "measure");
    get(m, "t", c.measure.t);
    get(m, "tau", c.measure.tau);
    get(m, "depth", c.measure.depth);
    get(m, "doublings", c.measure.doublings);
    get(m, "stride", c.measure.stride);
    get(m, "functionals", c.measure.functionals);
    if (m.contains("rho")) c.measure.rho = parse_field(m.at("rho"), "measure.rho");
  }
  if (!(c.dt > 0.0)) throw ConfigError("stepper.dt must be positive");
  if (!(c.h > 0.0)) throw ConfigError("physics.h must be positive");
  if (!(c.nu > 0.0 && c.alpha > 0.0)) throw ConfigError("physics: nu and alpha must be positive");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw MissingArtifactError("cannot open config " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["grid"] = {{"dim", c.dim}, {"n", c.n}, {"box_length", c.box_length}};
  j["physics"] = {{"nu", c.nu}, {"alpha", c.alpha}, {"h", c.h}};
  j["stepper"] = {{"dt", c.dt},           {"scheme", scheme_name(c.scheme)}, {"t_start", c.t_start},
                  {"t_end", c.t_end},     {"convection", c.convection}};
  j["delay"] = {{"kind", c.delay.kind},   {"gain", c.delay.gain},       {"map", c.delay.map},
                {"tau0", c.delay.tau0},   {"tau1", c.delay.tau1},       {"omega", c.delay.omega},
                {"kernel", c.delay.kernel}, {"kernel_rate", c.delay.kernel_rate},
                {"kernel_samples", c.delay.kernel_samples}};
  j["forcing"] = {{"kind", c.forcing.kind}, {"amplitude", field_json(c.forcing.amplitude)},
                  {"c0", c.forcing.c0},     {"a1", c.forcing.a1},
                  {"omega", c.forcing.omega}, {"delta", c.forcing.delta}};
  j["hypotheses"] = {{"sigma", c.sigma}, {"beta", c.beta}, {"override", c.override_hypotheses}};
  j["hypotheses"]["cg_override"] = c.cg_override ? json(*c.cg_override) : json(nullptr);
  j["embedding"] = json::object();
  for (const auto& [k, v] : c.embedding) j["embedding"][k] = v;
  j["initial"] = field_json(c.initial);
  j["history"] = c.history == "field" ? field_json(c.history_field) : json(c.history);
  j["certificates"] = c.certificates;
  j["output"] = {{"dir", c.output_dir}};
  json fam = json::array();
  for (const auto& f : c.attractor.family) fam.push_back(field_json(f));
  j["attractor"] = {{"t_star", c.attractor.t_star}, {"taus", c.attractor.taus}, {"family", fam},
                    {"xi", c.attractor.xi}};
  j["measure"] = {{"t", c.measure.t},         {"tau", c.measure.tau},
                  {"depth", c.measure.depth}, {"doublings", c.measure.doublings},
                  {"stride", c.measure.stride}, {"functionals", c.measure.functionals},
                  {"rho", field_json(c.measure.rho)}};
  return j;
}

SpectralField build_field(const FieldSpec& f, const Grid& g) {
  if (f.type == "zero") return SpectralField(g);
  if (f.type == "shear") return shear_field(g, f.amplitude, f.wavenumber);
  if (f.type == "random") return random_field(g, f.seed, f.decay, f.v_norm);
  if (f.type == "snapshot") {
    Snapshot s = load_snapshot(f.path);
    require_same_grid(s.field.grid(), g, "snapshot field");
    return s.field;
  }
  if (f.type == "stokes") {
    SpectralField a = apply_stokes(build_field(f.terms.at(0), g));
    a *= f.factor;
    return a;
  }
  if (f.type == "sum") {
    SpectralField s(g);
    for (const auto& t : f.terms) s += build_field(t, g);
    return s;
  }
  throw ConfigError("unknown field type '" + f.type + "'");
}

Grid make_grid(const RunConfig& c) { return Grid(c.dim, c.n, c.box_length); }

PhysicalParams make_params(const RunConfig& c, const Grid& g) {
  PhysicalParams p;
  p.nu = c.nu;
  p.alpha = c.alpha;
  p.h = c.h;
  p.lambda1 = g.lambda1();
  p.emb = default_embedding_constants(g, c.alpha);
  for (const auto& [k, v] : c.embedding) {
    if (k == "C1") p.emb.C1 = v;
    else if (k == "C2") p.emb.C2 = v;
    else if (k == "C3") p.emb.C3 = v;
    else if (k == "C4") p.emb.C4 = v;
    else if (k == "C5") p.emb.C5 = v;
    else if (k == "C6") p.emb.C6 = v;
    else if (k == "C7") p.emb.C7 = v;
    else if (k == "C7p") p.emb.C7p = v;
  }
  return p;
}

DelaySpec make_delay(const RunConfig& c) {
  DelaySpec d;
  const DelayConfig& dc = c.delay;
  if (dc.kind == "discrete") d.kind = DelayKind::Discrete;
  else if (dc.kind == "variable") d.kind = DelayKind::Variable;
  else if (dc.kind == "distributed") d.kind = DelayKind::Distributed;
  else throw ConfigError("unknown delay kind '" + dc.kind + "'");
  if (dc.map == "identity") d.map = PointwiseMap::Identity;
  else if (dc.map == "tanh") d.map = PointwiseMap::Tanh;
  else throw ConfigError("unknown delay map '" + dc.map + "'");
  d.gain = dc.gain;
  d.h = c.h;
  d.tau0 = dc.tau0;
  d.tau1 = dc.tau1;
  d.omega = dc.omega;
  if (d.kind == DelayKind::Distributed) {
    const int nh = static_cast<int>(steps_for(c.h, c.dt));
    if (dc.kernel == "point_mass") {
      d.kernel = point_mass_kernel(nh);
    } else if (dc.kernel == "uniform" || dc.kernel == "exponential") {
      std::vector<double> dens(static_cast<std::size_t>(nh) + 1);
      const double r = dc.kernel_rate;
      // densities of unit mass on [-h, 0]
      for (int j = 0; j <= nh; ++j) {
        const double th = -c.h + c.h * j / nh;
        dens[static_cast<std::size_t>(j)] =
            dc.kernel == "uniform" ? 1.0 / c.h : r * std::exp(r * th) / (1.0 - std::exp(-r * c.h));
      }
      d.kernel = kernel_from_samples(c.h, dens);
    } else if (dc.kernel == "samples") {
      if (dc.kernel_samples.size() != static_cast<std::size_t>(nh) + 1)
        throw ConfigError("delay.kernel_samples needs h/dt + 1 values");
      d.kernel = kernel_from_samples(c.h, dc.kernel_samples);
    } else {
      throw ConfigError("unknown delay kernel '" + dc.kernel + "'");
    }
  }
  d.validate(c.dt);
  return d;
}

ForcingSpec make_forcing(const RunConfig& c, const Grid& g) {
  ForcingSpec f;
  const ForcingConfig& fc = c.forcing;
  if (fc.kind == "zero") f.kind = ForcingKind::Zero;
  else if (fc.kind == "constant") f.kind = ForcingKind::Constant;
  else if (fc.kind == "periodic") f.kind = ForcingKind::Periodic;
  else if (fc.kind == "exp_windowed") f.kind = ForcingKind::ExpWindowed;
  else throw ConfigError("unknown forcing kind '" + fc.kind + "'");
  f.c0 = fc.c0;
  f.a1 = fc.a1;
  f.omega = fc.omega;
  f.delta = fc.delta;
  if (f.kind != ForcingKind::Zero) f.amplitude = make_field_ptr(leray_project(build_field(fc.amplitude, g)));
  return f;
}

Problem make_problem(const RunConfig& c, const Grid& g) {
  Problem p;
  p.nu = c.nu;
  p.alpha = c.alpha;
  p.forcing = make_forcing(c, g);
  p.delay = make_delay(c);
  p.convection = c.convection;
  return p;
}

StepperConfig make_stepper(const RunConfig& c) { return StepperConfig{c.dt, c.scheme}; }

ProcessState make_initial_state(const RunConfig& c, const Grid& g) {
  const std::int64_t step = steps_for(c.t_start, c.dt);
  const int nh = static_cast<int>(steps_for(c.h, c.dt));
  FieldPtr u0 = make_field_ptr(leray_project(build_field(c.initial, g)));
  if (c.history == "constant") return make_constant_state(step, c.dt, nh, u0);
  FieldPtr hv = c.history == "zero" ? make_field_ptr(SpectralField(g))
                                    : make_field_ptr(leray_project(build_field(c.history_field, g)));
  return make_state(step, c.dt, u0, HistorySegment::constant(c.dt, nh, hv));
}

HypothesisWindow make_window(const RunConfig& c, const Grid& g) {
  HypothesisInputs in{c.sigma, c.beta, c.cg_override};
  const PhysicalParams p = make_params(c, g);
  const DelaySpec d = make_delay(c);
  if (c.override_hypotheses) return evaluate_hypotheses(p, d, in);
  return check_hypotheses(p, d, in);
}

}  // namespace nsv
