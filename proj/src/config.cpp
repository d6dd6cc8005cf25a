#include "pikl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace pikl {

namespace {

const std::set<std::string> kPrecisionKeys = {"precision", "dtype"};

void require_object(const json& j, const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + " must be a JSON object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError(what + ": unknown key '" + key + "'");
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& what) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(what + ": bad or missing '" + key + "' (" + e.what() + ")");
  }
}

template <typename T>
void get_if(const json& j, const std::string& key, T& out, const std::string& what) {
  if (j.contains(key)) out = get<T>(j, key, what);
}

// Parses "name(arg)" into name and arg; arg is NaN when absent.
std::pair<std::string, real> split_call(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos) return {text, std::nan("")};
  const auto close = text.rfind(')');
  if (close == std::string::npos || close < open)
    throw ConfigError("malformed operator preset '" + text + "'");
  const std::string arg = text.substr(open + 1, close - open - 1);
  std::size_t used = 0;
  real v = 0.0;
  try {
    v = std::stod(arg, &used);
  } catch (const std::exception&) {
    throw ConfigError("operator preset '" + text + "': argument is not a number");
  }
  if (used != arg.size()) throw ConfigError("operator preset '" + text + "': argument is not a number");
  return {text.substr(0, open), v};
}

json number_list(const std::vector<real>& v) {
  json out = json::array();
  for (real x : v) out.push_back(x);
  return out;
}

}  // namespace

void check_precision_value(const std::string& value) {
  static const std::set<std::string> ok = {"float64", "double", "f64", "complex128"};
  if (!ok.count(value))
    throw ConfigError("precision '" + value + "' refused: only 64-bit floating point is supported");
}

void check_precision(const json& doc) {
  if (doc.is_object()) {
    for (const auto& [key, value] : doc.items()) {
      if (kPrecisionKeys.count(key)) {
        if (!value.is_string()) throw ConfigError("'" + key + "' must be a string");
        check_precision_value(value.get<std::string>());
      }
      check_precision(value);
    }
  } else if (doc.is_array()) {
    for (const auto& v : doc) check_precision(v);
  }
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  auto parse_one = [&](const std::string& s) -> std::uint64_t {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad seed list '" + text + "'");
    }
    if (used != s.size() || s.empty() || s[0] == '-') throw ConfigError("bad seed list '" + text + "'");
    return v;
  };
  std::vector<std::uint64_t> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const std::uint64_t lo = parse_one(text.substr(0, dots));
    const std::uint64_t hi = parse_one(text.substr(dots + 2));
    if (hi < lo) throw ConfigError("bad seed range '" + text + "'");
    if (hi - lo >= 1000000) throw ConfigError("seed range '" + text + "' is too long");
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_one(item));
  if (out.empty()) throw ConfigError("empty seed list");
  return out;
}

std::vector<std::uint64_t> seeds_from_json(const json& j) {
  if (j.is_string()) return parse_seed_list(j.get<std::string>());
  if (!j.is_array() || j.empty()) throw ConfigError("seeds must be a non-empty array or a range string");
  std::vector<std::uint64_t> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) throw ConfigError("seeds must be nonnegative integers");
    out.push_back(v.get<std::uint64_t>());
  }
  return out;
}

ParamSchedule schedule_from_json(const json& j) {
  if (j.is_number()) return ParamSchedule::constant(j.get<real>());
  if (!j.is_object() || j.size() != 1)
    throw ConfigError("schedule must be a number or a one-key object, got " + j.dump());
  const std::string key = j.begin().key();
  const json& value = j.begin().value();
  ParamSchedule s;
  if (key == "power") {
    if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number())
      throw ConfigError("schedule 'power' takes [coef, exponent]");
    s = ParamSchedule::power(value[0].get<real>(), value[1].get<real>());
  } else {
    if (!value.is_number()) throw ConfigError("schedule '" + key + "' takes a number");
    const real c = value.get<real>();
    if (key == "constant") s = ParamSchedule::constant(c);
    else if (key == "log_over_n") s = {ParamSchedule::Kind::LogOverN, c, 0.0};
    else if (key == "inv_log") s = {ParamSchedule::Kind::InvLog, c, 0.0};
    else throw ConfigError("unknown schedule '" + key + "'");
  }
  if (!std::isfinite(s.coef) || !std::isfinite(s.exponent))
    throw ConfigError("schedule coefficients must be finite");
  return s;
}

json to_json(const ParamSchedule& s) {
  switch (s.kind) {
    case ParamSchedule::Kind::Constant: return s.coef;
    case ParamSchedule::Kind::Power: return json{{"power", {s.coef, s.exponent}}};
    case ParamSchedule::Kind::LogOverN: return json{{"log_over_n", s.coef}};
    case ParamSchedule::Kind::InvLog: return json{{"inv_log", s.coef}};
  }
  return s.coef;
}

SobolevScaling parse_scaling(const std::string& name) {
  if (name == "per_axis") return SobolevScaling::PerAxis;
  if (name == "volume") return SobolevScaling::Volume;
  throw ConfigError("unknown Sobolev scaling '" + name + "' (per_axis or volume)");
}

std::string to_string(SobolevScaling scaling) {
  return scaling == SobolevScaling::PerAxis ? "per_axis" : "volume";
}

LinearDiffOp operator_from_json(const json& j, int d) {
  if (j.is_string()) {
    const auto [name, arg] = split_call(j.get<std::string>());
    const bool has_arg = !std::isnan(arg);
    auto need_dim = [&](int want) {
      if (d != want)
        throw ConfigError("operator '" + name + "' needs dimension " + std::to_string(want) +
                          ", problem has " + std::to_string(d));
    };
    auto no_arg = [&] {
      if (has_arg) throw ConfigError("operator '" + name + "' takes no argument");
    };
    if (name == "identity") { no_arg(); return LinearDiffOp::identity(d); }
    if (name == "ddx") { no_arg(); need_dim(1); return LinearDiffOp::ddx(); }
    if (name == "harmonic_oscillator") { no_arg(); need_dim(1); return LinearDiffOp::harmonic_oscillator(); }
    if (name == "heat") { no_arg(); need_dim(2); return LinearDiffOp::heat(); }
    if (name == "laplace") { no_arg(); return LinearDiffOp::laplace(d); }
    if (name == "convection") {
      if (!has_arg) throw ConfigError("operator 'convection' needs beta, e.g. convection(40)");
      need_dim(2);
      return LinearDiffOp::convection(arg);
    }
    if (name == "wave") {
      need_dim(2);
      return LinearDiffOp::wave(has_arg ? arg : 4.0);
    }
    throw ConfigError("unknown operator preset '" + name + "'");
  }
  if (!j.is_array()) throw ConfigError("operator must be a preset name or a list of terms");
  std::vector<DiffTerm> terms;
  for (const auto& t : j) {
    require_object(t, "operator term");
    reject_unknown(t, {"alpha", "coeff"}, "operator term");
    terms.push_back(DiffTerm{get<std::vector<int>>(t, "alpha", "operator term"),
                             get<real>(t, "coeff", "operator term")});
  }
  return LinearDiffOp(d, std::move(terms));
}

Domain domain_from_json(const json& j, real half_width) {
  if (!j.is_object() || j.size() != 1) throw ConfigError("domain must be a one-key object, got " + j.dump());
  const std::string key = j.begin().key();
  const json& value = j.begin().value();
  if (key == "cube" || key == "torus") {
    require_object(value, key);
    reject_unknown(value, {"d"}, key);
    const int d = get<int>(value, "d", key);
    return key == "cube" ? Domain::cube(d, half_width) : Domain::torus(d, half_width);
  }
  if (key == "ball2d") {
    if (!value.is_object() || !value.empty()) throw ConfigError("ball2d takes an empty object");
    return Domain::ball2d(half_width);
  }
  if (key == "scaled") {
    require_object(value, key);
    reject_unknown(value, {"factor", "domain"}, key);
    return Domain::scaled(domain_from_json(value.at("domain"), half_width), get<real>(value, "factor", key));
  }
  if (key == "translated") {
    require_object(value, key);
    reject_unknown(value, {"shift", "domain"}, key);
    return Domain::translated(domain_from_json(value.at("domain"), half_width),
                              get<std::vector<real>>(value, "shift", key));
  }
  if (key == "union" || key == "product") {
    if (!value.is_array() || value.empty()) throw ConfigError(key + " takes a non-empty array");
    std::vector<Domain> parts;
    for (const auto& p : value) parts.push_back(domain_from_json(p, half_width));
    if (key == "union") return Domain::disjoint_union(parts);
    Domain acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = Domain::product(acc, parts[i]);
    return acc;
  }
  throw ConfigError("unknown domain '" + key + "'");
}

Scenario scenario_from_json(const json& j) {
  require_object(j, "scenario");
  reject_unknown(j, {"preset", "name", "kind", "ns", "seeds", "m", "s", "half_width", "scaling", "sigma", "beta",
                     "estimators", "baselines", "test_grid", "precision"},
                 "scenario");
  check_precision(j);
  Scenario sc;
  if (j.contains("preset")) {
    sc = Scenario::preset(get<std::string>(j, "preset", "scenario"));
  } else {
    if (!j.contains("kind")) throw ConfigError("scenario needs either 'preset' or 'kind'");
    sc.name = get<std::string>(j, "kind", "scenario");
  }
  const std::string what = "scenario '" + sc.name + "'";
  if (j.contains("kind")) sc.kind = parse_scenario_kind(get<std::string>(j, "kind", what));
  get_if(j, "name", sc.name, what);
  get_if(j, "ns", sc.ns, what);
  if (j.contains("seeds")) sc.seeds = seeds_from_json(j.at("seeds"));
  get_if(j, "m", sc.m, what);
  get_if(j, "s", sc.s, what);
  get_if(j, "half_width", sc.half_width, what);
  if (j.contains("scaling")) sc.scaling = parse_scaling(get<std::string>(j, "scaling", what));
  get_if(j, "sigma", sc.sigma, what);
  get_if(j, "beta", sc.beta, what);
  if (j.contains("estimators")) {
    sc.estimators.clear();
    for (const auto& e : j.at("estimators")) {
      require_object(e, what + " estimator");
      reject_unknown(e, {"name", "lambda", "mu"}, what + " estimator");
      sc.estimators.push_back(EstimatorSpec{get<std::string>(e, "name", what), schedule_from_json(e.at("lambda")),
                                            schedule_from_json(e.at("mu"))});
    }
  }
  get_if(j, "baselines", sc.baselines, what);
  get_if(j, "test_grid", sc.test_grid, what);
  sc.validate();
  return sc;
}

json to_json(const Scenario& sc) {
  json est = json::array();
  for (const auto& e : sc.estimators)
    est.push_back({{"name", e.name}, {"lambda", to_json(e.lambda)}, {"mu", to_json(e.mu)}});
  return json{{"name", sc.name},
              {"kind", to_string(sc.kind)},
              {"ns", sc.ns},
              {"seeds", sc.seeds},
              {"m", sc.m},
              {"s", sc.s},
              {"half_width", sc.half_width},
              {"scaling", to_string(sc.scaling)},
              {"sigma", sc.sigma},
              {"beta", sc.beta},
              {"estimators", est},
              {"baselines", sc.baselines},
              {"test_grid", sc.test_grid},
              {"precision", "float64"}};
}

GramSpec EffDimConfig::spec(int m, real n) const {
  return GramSpec{ModeSet(m, dim, half_width), s, lambda.at(n), mu.at(n), operator_from_json(op, dim),
                  domain_from_json(domain, half_width), scaling};
}

Schedule EffDimConfig::schedule() const {
  const ParamSchedule l = lambda;
  const ParamSchedule u = mu;
  return Schedule{[l](real n) { return l.at(n); }, [u](real n) { return u.at(n); }};
}

void EffDimConfig::validate() const {
  const std::string what = "effdim '" + name + "'";
  if (ms.empty()) throw ConfigError(what + ": empty m list");
  if (ns.empty()) throw ConfigError(what + ": empty n list");
  for (int m : ms)
    if (m < 0) throw ConfigError(what + ": m must be nonnegative");
  for (std::size_t i = 1; i < ms.size(); ++i)
    if (ms[i] <= ms[i - 1]) throw ConfigError(what + ": m list must be increasing");
  for (real n : ns)
    if (!(n > 1.0)) throw ConfigError(what + ": n must exceed 1");
  // Builds the operator, the domain and the mode set once to surface errors early.
  spec(ms.front(), ns.front()).validate();
}

EffDimConfig EffDimConfig::preset(const std::string& name) {
  EffDimConfig c;
  c.name = name;
  c.ns = {1e2, 1e3, 1e4};
  if (name == "ddx") {
    c.dim = 1;
    c.half_width = pi;
    c.s = 1;
    c.op = "ddx";
    c.domain = json{{"cube", {{"d", 1}}}};
    c.ms = {25, 50, 100};
  } else if (name == "harmonic_oscillator") {
    c.dim = 1;
    c.half_width = pi;
    c.s = 2;
    c.op = "harmonic_oscillator";
    c.domain = json{{"cube", {{"d", 1}}}};
    c.ms = {25, 50, 100};
  } else if (name == "heat_disk") {
    c.dim = 2;
    c.half_width = 1.0;
    c.s = 2;
    c.op = "heat";
    c.domain = json{{"ball2d", json::object()}};
    c.ms = {30};
  } else {
    throw ConfigError("unknown effdim preset '" + name + "' (ddx, harmonic_oscillator, heat_disk)");
  }
  return c;
}

EffDimConfig effdim_from_json(const json& j) {
  require_object(j, "effdim");
  reject_unknown(j, {"preset", "name", "dim", "half_width", "s", "scaling", "operator", "domain", "ms", "ns",
                     "lambda", "mu", "precision"},
                 "effdim");
  check_precision(j);
  EffDimConfig c;
  if (j.contains("preset")) {
    c = EffDimConfig::preset(get<std::string>(j, "preset", "effdim"));
  } else {
    for (const char* key : {"dim", "operator", "domain", "ms"})
      if (!j.contains(key)) throw ConfigError(std::string("effdim: missing '") + key + "' (or use 'preset')");
    c.name = "custom";
    c.ns = {1e2, 1e3, 1e4};
  }
  const std::string what = "effdim";
  get_if(j, "name", c.name, what);
  get_if(j, "dim", c.dim, what);
  get_if(j, "half_width", c.half_width, what);
  get_if(j, "s", c.s, what);
  if (j.contains("scaling")) c.scaling = parse_scaling(get<std::string>(j, "scaling", what));
  if (j.contains("operator")) c.op = j.at("operator");
  if (j.contains("domain")) c.domain = j.at("domain");
  get_if(j, "ms", c.ms, what);
  get_if(j, "ns", c.ns, what);
  if (j.contains("lambda")) c.lambda = schedule_from_json(j.at("lambda"));
  if (j.contains("mu")) c.mu = schedule_from_json(j.at("mu"));
  c.validate();
  return c;
}

json to_json(const EffDimConfig& c) {
  return json{{"name", c.name},
              {"dim", c.dim},
              {"half_width", c.half_width},
              {"s", c.s},
              {"scaling", to_string(c.scaling)},
              {"operator", c.op},
              {"domain", c.domain},
              {"ms", c.ms},
              {"ns", number_list(c.ns)},
              {"lambda", to_json(c.lambda)},
              {"mu", to_json(c.mu)},
              {"precision", "float64"}};
}

Scenario WaveConfig::scenario() const {
  Scenario sc = Scenario::wave();
  sc.name = sigma > 0.0 ? "wave_noisy" : "wave";
  sc.ns = {n};
  sc.seeds = seeds;
  sc.sigma = sigma;
  sc.m = m;
  sc.s = s;
  sc.half_width = half_width;
  sc.estimators.clear();
  sc.baselines.clear();
  for (const auto& name : methods) {
    if (name == "pikl") {
      sc.estimators.push_back({"pikl", lambda, mu});
      continue;
    }
    const WaveMethod wm = parse_wave_method(name);
    const std::string canon = wm == WaveMethod::Euler ? "euler" : wm == WaveMethod::RK4 ? "rk4" : "cn";
    if (std::find(sc.baselines.begin(), sc.baselines.end(), canon) != sc.baselines.end())
      throw ConfigError("wave method '" + name + "' listed twice");
    sc.baselines.push_back(canon);
  }
  if (methods.empty()) throw ConfigError("wave: empty method list");
  sc.validate();
  return sc;
}

WaveConfig wave_from_json(const json& j) {
  require_object(j, "wave");
  reject_unknown(j, {"n", "sigma", "seeds", "methods", "m", "s", "half_width", "lambda", "mu", "precision"}, "wave");
  check_precision(j);
  WaveConfig c;
  const std::string what = "wave";
  get_if(j, "n", c.n, what);
  get_if(j, "sigma", c.sigma, what);
  if (j.contains("seeds")) c.seeds = seeds_from_json(j.at("seeds"));
  get_if(j, "methods", c.methods, what);
  get_if(j, "m", c.m, what);
  get_if(j, "s", c.s, what);
  get_if(j, "half_width", c.half_width, what);
  if (j.contains("lambda")) c.lambda = schedule_from_json(j.at("lambda"));
  if (j.contains("mu")) c.mu = schedule_from_json(j.at("mu"));
  c.scenario();
  return c;
}

json to_json(const WaveConfig& c) {
  return json{{"n", c.n},
              {"sigma", c.sigma},
              {"seeds", c.seeds},
              {"methods", c.methods},
              {"m", c.m},
              {"s", c.s},
              {"half_width", c.half_width},
              {"lambda", to_json(c.lambda)},
              {"mu", to_json(c.mu)},
              {"precision", "float64"}};
}

LoadedConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  check_precision(doc);
  if (!doc.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");
  LoadedConfig out;
  if (doc.contains("manifest_version")) {
    if (!doc.contains("config")) throw ConfigError("manifest '" + path + "' has no recorded config");
    out.config = doc.at("config");
    if (doc.contains("threads")) out.threads = get<unsigned>(doc, "threads", "manifest '" + path + "'");
  } else {
    out.config = std::move(doc);
  }
  return out;
}

}  // namespace pikl
