#include "pikl/bench.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "pikl/parallel.hpp"
#include "pikl/rng.hpp"

namespace pikl {

namespace {

// Stream identifiers keep the generators independent for a shared seed.
constexpr std::uint64_t kStreamOscillator = 0x6f7363ULL;
constexpr std::uint64_t kStreamHeat = 0x68656174ULL;
constexpr std::uint64_t kStreamConvection = 0x636f6e76ULL;
constexpr std::uint64_t kStreamWave = 0x77617665ULL;

const real kSqrt3Half = std::sqrt(3.0) / 2.0;

}  // namespace

real oscillator_f1(real x) { return std::exp(-0.5 * x) * std::cos(kSqrt3Half * x); }
real oscillator_f2(real x) { return std::exp(-0.5 * x) * std::sin(kSqrt3Half * x); }

Dataset gen_oscillator(std::size_t n, real sigma, std::uint64_t seed) {
  if (n < 1) throw ConfigError("gen_oscillator: n must be at least 1");
  CounterRng rng(seed, kStreamOscillator);
  Dataset d{MatrixXr(static_cast<Eigen::Index>(n), 1), VectorXr(static_cast<Eigen::Index>(n))};
  for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
    const real x = rng.uniform(-pi, pi);
    d.X(i, 0) = x;
    d.Y(i) = oscillator_f1(x) + (sigma > 0.0 ? sigma * rng.normal() : 0.0);
  }
  return d;
}

OlsFit ols_oscillator(const Dataset& data) {
  data.validate();
  if (data.dim() != 1) throw DimensionError("ols_oscillator: data must be one-dimensional");
  real g11 = 0.0, g12 = 0.0, g22 = 0.0, r1 = 0.0, r2 = 0.0;
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    const real u = oscillator_f1(data.X(i, 0));
    const real v = oscillator_f2(data.X(i, 0));
    g11 += u * u;
    g12 += u * v;
    g22 += v * v;
    r1 += u * data.Y(i);
    r2 += v * data.Y(i);
  }
  const real det = g11 * g22 - g12 * g12;
  if (data.size() < 2 || !(std::abs(det) > 1e-12 * g11 * g22))
    throw NumericError("ols_oscillator: rank-deficient design");
  return OlsFit{(g22 * r1 - g12 * r2) / det, (g11 * r2 - g12 * r1) / det};
}

real heat_truth(real t, real x) { return std::exp(-t) * std::cos(x) + 0.5 * std::sin(2.0 * x); }

Dataset gen_heat_hybrid(std::size_t n, std::uint64_t seed, real sigma) {
  if (n < 1) throw ConfigError("gen_heat_hybrid: n must be at least 1");
  CounterRng rng(seed, kStreamHeat);
  Dataset d{MatrixXr(static_cast<Eigen::Index>(n), 2), VectorXr(static_cast<Eigen::Index>(n))};
  for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
    const real t = rng.uniform(-pi, pi);
    const real x = rng.uniform(-pi, pi);
    d.X(i, 0) = t;
    d.X(i, 1) = x;
    d.Y(i) = heat_truth(t, x) + (sigma > 0.0 ? sigma * rng.normal() : 0.0);
  }
  return d;
}

namespace {

// Composite Gauss-Legendre (5 nodes) over [-pi, pi]^2.
template <class F>
real quad_square(F f) {
  static const real nodes[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                0.9061798459386640};
  static const real weights[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                  0.2369268850561891, 0.2369268850561891};
  const int panels = 64;
  const real h = 2.0 * pi / panels;
  real sum = 0.0;
  for (int pa = 0; pa < panels; ++pa)
    for (int ia = 0; ia < 5; ++ia) {
      const real t = -pi + h * (pa + 0.5 * (1.0 + nodes[ia]));
      for (int pb = 0; pb < panels; ++pb)
        for (int ib = 0; ib < 5; ++ib) {
          const real x = -pi + h * (pb + 0.5 * (1.0 + nodes[ib]));
          sum += weights[ia] * weights[ib] * f(t, x);
        }
    }
  return sum * 0.25 * h * h;
}

}  // namespace

real heat_residual_norm_sq() {
  // d_t f* - d_xx f* = -e^{-t} cos x + e^{-t} cos x + 2 sin 2x
  return quad_square([](real t, real x) {
    const real r = -std::exp(-t) * std::cos(x) - (-std::exp(-t) * std::cos(x) - 2.0 * std::sin(2.0 * x));
    return r * r;
  });
}

real heat_truth_norm_sq() {
  return quad_square([](real t, real x) {
    const real f = heat_truth(t, x);
    return f * f;
  });
}

Dataset gen_convection(std::size_t n, std::uint64_t seed) {
  if (n < 4) throw ConfigError("gen_convection: n must be at least 4");
  CounterRng rng(seed, kStreamConvection);
  Dataset d{MatrixXr(static_cast<Eigen::Index>(n), 2), VectorXr(static_cast<Eigen::Index>(n))};
  for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
    const real u = rng.uniform(0.0, 2.0 * pi);
    d.X(i, 0) = 0.0;
    d.X(i, 1) = u;
    d.Y(i) = std::sin(u);
  }
  return d;
}

real convection_truth(real beta, real t, real x) { return std::sin(x - beta * t); }

Dataset gen_wave(std::size_t n, std::uint64_t seed, real sigma) {
  if (n < 4) throw ConfigError("gen_wave: n must be at least 4");
  CounterRng rng(seed, kStreamWave);
  const std::size_t q = n / 4;
  const real nn = static_cast<real>(n);
  const real c1 = 1.0 - 2.0 * pi * pi / (nn * nn);
  const real c4 = 0.5 - 16.0 * pi * pi / (nn * nn);
  Dataset d{MatrixXr(static_cast<Eigen::Index>(n), 2), VectorXr(static_cast<Eigen::Index>(n))};
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const real u = rng.uniform();
    if (i < q) {
      d.X(r, 0) = 0.0;
      d.X(r, 1) = u;
      d.Y(r) = WaveProblem::default_initial(u);
    } else if (i < 2 * q) {
      d.X(r, 0) = u;
      d.X(r, 1) = 0.0;
      d.Y(r) = 0.0;
    } else if (i < 3 * q) {
      d.X(r, 0) = u;
      d.X(r, 1) = 1.0;
      d.Y(r) = 0.0;
    } else {
      d.X(r, 0) = 1.0 / nn;
      d.X(r, 1) = u;
      d.Y(r) = c1 * std::sin(pi * u) + c4 * std::sin(4.0 * pi * u);
    }
  }
  if (sigma > 0.0)
    for (Eigen::Index r = 0; r < d.Y.size(); ++r) d.Y(r) += sigma * rng.normal();
  return d;
}

real l2_relative_error(const VectorXr& pred, const VectorXr& truth) {
  if (pred.size() != truth.size()) throw DimensionError("l2_relative_error: grid sizes differ");
  const real den = truth.squaredNorm();
  if (den == 0.0) throw NumericError("l2_relative_error: reference is identically zero");
  return std::sqrt((pred - truth).squaredNorm() / den);
}

real mean_squared_error(const VectorXr& pred, const VectorXr& truth) {
  if (pred.size() != truth.size()) throw DimensionError("mean_squared_error: grid sizes differ");
  if (pred.size() == 0) throw DimensionError("mean_squared_error: empty grid");
  return (pred - truth).squaredNorm() / static_cast<real>(pred.size());
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Oscillator: return "oscillator";
    case ScenarioKind::HeatHybrid: return "heat_hybrid";
    case ScenarioKind::Convection: return "convection";
    case ScenarioKind::Wave: return "wave";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(const std::string& name) {
  if (name == "oscillator") return ScenarioKind::Oscillator;
  if (name == "heat_hybrid") return ScenarioKind::HeatHybrid;
  if (name == "convection") return ScenarioKind::Convection;
  if (name == "wave" || name == "wave_noisy") return ScenarioKind::Wave;
  throw ConfigError("unknown scenario '" + name + "'");
}

real ParamSchedule::at(real n) const {
  switch (kind) {
    case Kind::Constant: return coef;
    case Kind::Power: return coef * std::pow(n, exponent);
    case Kind::LogOverN: return coef * std::log(n) / n;
    case Kind::InvLog: return coef / std::log(n);
  }
  return coef;
}

std::string ParamSchedule::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::Constant: os << coef; break;
    case Kind::Power: os << coef << "*n^" << exponent; break;
    case Kind::LogOverN: os << coef << "*log(n)/n"; break;
    case Kind::InvLog: os << coef << "/log(n)"; break;
  }
  return os.str();
}

void Scenario::validate() const {
  if (ns.empty()) throw ConfigError("scenario '" + name + "': empty n list");
  if (seeds.empty()) throw ConfigError("scenario '" + name + "': empty seed list");
  for (long n : ns)
    if (n < 4) throw ConfigError("scenario '" + name + "': n must be at least 4");
  if (m < 0) throw ConfigError("scenario '" + name + "': m must be nonnegative");
  if (s < 1) throw ConfigError("scenario '" + name + "': s must be positive");
  if (!(sigma >= 0.0)) throw ConfigError("scenario '" + name + "': sigma must be >= 0");
  if (test_grid < 2) throw ConfigError("scenario '" + name + "': test grid needs at least 2 points per axis");
  if (kind == ScenarioKind::Wave && !(half_width >= 0.5))
    throw ConfigError("scenario '" + name + "': wave half-width must be at least 0.5");
  for (const auto& e : estimators)
    if (e.name != "pikl" && e.name != "sobolev" && e.name != "pde")
      throw ConfigError("scenario '" + name + "': unknown estimator '" + e.name + "'");
  for (const auto& b : baselines) {
    if (b == "ols") {
      if (kind != ScenarioKind::Oscillator)
        throw ConfigError("scenario '" + name + "': ols baseline needs the oscillator scenario");
    } else if (b == "euler" || b == "rk4" || b == "cn") {
      if (kind != ScenarioKind::Wave)
        throw ConfigError("scenario '" + name + "': classic solvers need the wave scenario");
    } else {
      throw ConfigError("scenario '" + name + "': unknown baseline '" + b + "'");
    }
  }
}

namespace {

std::vector<std::uint64_t> seed_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> v;
  for (std::uint64_t s = lo; s <= hi; ++s) v.push_back(s);
  return v;
}

}  // namespace

Scenario Scenario::oscillator() {
  Scenario sc;
  sc.name = "oscillator";
  sc.kind = ScenarioKind::Oscillator;
  sc.ns = {32, 56, 100, 178, 316, 562, 1000};
  sc.seeds = seed_range(1, 5);
  sc.m = 300;
  sc.s = 2;
  sc.half_width = pi;
  sc.sigma = 0.5;
  sc.estimators = {{"pikl", ParamSchedule::constant(1e-10), ParamSchedule::constant(1.0)}};
  sc.baselines = {"ols"};
  return sc;
}

Scenario Scenario::heat_hybrid() {
  Scenario sc;
  sc.name = "heat_hybrid";
  sc.kind = ScenarioKind::HeatHybrid;
  sc.ns = {32, 100, 316, 1000, 3162};
  sc.seeds = seed_range(1, 5);
  sc.m = 15;
  sc.s = 2;
  sc.half_width = pi;
  sc.sigma = 0.5;
  sc.estimators = {
      {"pikl", ParamSchedule::power(0.1, -2.0 / 3.0), ParamSchedule::power(100.0, -1.0)},
      {"sobolev", ParamSchedule::power(0.1, -2.0 / 3.0), ParamSchedule::constant(0.0)},
      {"pde", ParamSchedule::constant(1e-6), ParamSchedule::constant(1e4)},
  };
  return sc;
}

Scenario Scenario::convection(real beta) {
  Scenario sc;
  sc.name = "convection";
  sc.kind = ScenarioKind::Convection;
  sc.ns = {100};
  sc.seeds = seed_range(1, 10);
  sc.m = 20;
  sc.s = 1;
  sc.half_width = 0.5;
  sc.beta = beta;
  sc.estimators = {{"pikl", ParamSchedule::constant(1e-10), ParamSchedule::constant(1e3)}};
  return sc;
}

Scenario Scenario::wave() {
  Scenario sc;
  sc.name = "wave";
  sc.kind = ScenarioKind::Wave;
  sc.ns = {100000};
  sc.seeds = seed_range(1, 3);
  sc.m = 20;
  sc.s = 2;
  sc.half_width = 0.5;
  sc.estimators = {{"pikl", ParamSchedule::constant(1e-12), ParamSchedule::constant(1e-7)}};
  return sc;
}

Scenario Scenario::wave_noisy() {
  Scenario sc = wave();
  sc.name = "wave_noisy";
  sc.ns = {40000};
  sc.seeds = seed_range(1, 5);
  sc.sigma = 0.1;
  // Noisy boundary values need real smoothing: a larger lambda and a PDE
  // weight that dominates the data term.
  sc.estimators = {{"pikl", ParamSchedule::constant(3e-7), ParamSchedule::constant(1.0)}};
  sc.baselines = {"euler", "rk4", "cn"};
  return sc;
}

Scenario Scenario::preset(const std::string& name) {
  if (name == "oscillator") return oscillator();
  if (name == "heat_hybrid") return heat_hybrid();
  if (name == "convection") return convection(40.0);
  if (name == "wave") return wave();
  if (name == "wave_noisy") return wave_noisy();
  throw ConfigError("unknown scenario preset '" + name + "'");
}

real RunReport::mean(const std::string& estimator, long n) const {
  for (const auto& s : summary)
    if (s.estimator == estimator && s.n == n) return s.mean;
  throw ConfigError("report has no entry for estimator '" + estimator + "' at n = " + std::to_string(n));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Fourier model geometry of a scenario and the map from raw to model coordinates.
struct Geometry {
  GramSpec spec;
  std::string metric;
  MatrixXr test_raw;
  VectorXr truth;
};

GramSpec base_spec(const Scenario& sc) {
  switch (sc.kind) {
    case ScenarioKind::Oscillator:
      return GramSpec{ModeSet(sc.m, 1, sc.half_width), sc.s, 1.0, 1.0,
                      LinearDiffOp::harmonic_oscillator(), Domain::cube(1, sc.half_width), sc.scaling};
    case ScenarioKind::HeatHybrid:
      return GramSpec{ModeSet(sc.m, 2, sc.half_width), sc.s, 1.0, 1.0, LinearDiffOp::heat(),
                      Domain::cube(2, sc.half_width), sc.scaling};
    case ScenarioKind::Convection: {
      // (t, x) in [0,1] x [0, 2 pi] maps to (t - 1/2, (x - pi) / pi) in
      // [-1/2, 1/2] x [-1, 1]; the second axis spans the whole torus.
      const real L = 0.5;
      return GramSpec{ModeSet(sc.m, 2, L), sc.s, 1.0, 1.0, LinearDiffOp::convection(sc.beta / pi),
                      Domain::product(Domain::cube(1, L), Domain::torus(1, L)), sc.scaling};
    }
    case ScenarioKind::Wave: {
      // [0,1]^2 recentred to [-1/2, 1/2]^2.
      const real L = sc.half_width;
      Domain dom = L == 0.5 ? Domain::cube(2, 0.5) : Domain::scaled(Domain::cube(2, L), 0.5 / L);
      return GramSpec{ModeSet(sc.m, 2, L), sc.s, 1.0, 1.0, LinearDiffOp::wave(4.0), dom, sc.scaling};
    }
  }
  throw ConfigError("unknown scenario kind");
}

void to_model_coords(ScenarioKind kind, MatrixXr& X) {
  switch (kind) {
    case ScenarioKind::Oscillator:
    case ScenarioKind::HeatHybrid:
      return;
    case ScenarioKind::Convection:
      X.col(0).array() -= 0.5;
      X.col(1) = ((X.col(1).array() - pi) / pi).matrix();
      return;
    case ScenarioKind::Wave:
      X.array() -= 0.5;
      return;
  }
}

Geometry make_geometry(const Scenario& sc) {
  Geometry g{base_spec(sc), "", MatrixXr(), VectorXr()};
  const int k = sc.test_grid;
  auto grid2 = [&](real t0, real t1, real x0, real x1, auto truth) {
    g.test_raw.resize(static_cast<Eigen::Index>(k) * k, 2);
    g.truth.resize(static_cast<Eigen::Index>(k) * k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        const real t = t0 + (t1 - t0) * a / (k - 1);
        const real x = x0 + (x1 - x0) * b / (k - 1);
        const Eigen::Index r = static_cast<Eigen::Index>(a) * k + b;
        g.test_raw(r, 0) = t;
        g.test_raw(r, 1) = x;
        g.truth(r) = truth(t, x);
      }
  };
  switch (sc.kind) {
    case ScenarioKind::Oscillator: {
      const int pts = 10 * (k - 1) + 1;
      g.metric = "mse";
      g.test_raw.resize(pts, 1);
      g.truth.resize(pts);
      for (int i = 0; i < pts; ++i) {
        const real x = -pi + 2.0 * pi * i / (pts - 1);
        g.test_raw(i, 0) = x;
        g.truth(i) = oscillator_f1(x);
      }
      break;
    }
    case ScenarioKind::HeatHybrid:
      g.metric = "mse";
      grid2(-pi, pi, -pi, pi, heat_truth);
      break;
    case ScenarioKind::Convection: {
      g.metric = "l2_relative";
      const real beta = sc.beta;
      grid2(0.0, 1.0, 0.0, 2.0 * pi, [beta](real t, real x) { return convection_truth(beta, t, x); });
      break;
    }
    case ScenarioKind::Wave:
      g.metric = "l2_relative";
      grid2(0.0, 1.0, 0.0, 1.0, WaveProblem::default_truth);
      break;
  }
  return g;
}

Dataset generate(const Scenario& sc, long n, std::uint64_t seed) {
  const auto nn = static_cast<std::size_t>(n);
  Dataset d;
  switch (sc.kind) {
    case ScenarioKind::Oscillator: d = gen_oscillator(nn, sc.sigma, seed); break;
    case ScenarioKind::HeatHybrid: d = gen_heat_hybrid(nn, seed, sc.sigma); break;
    case ScenarioKind::Convection: d = gen_convection(nn, seed); break;
    case ScenarioKind::Wave: d = gen_wave(nn, seed, sc.sigma); break;
  }
  to_model_coords(sc.kind, d.X);
  return d;
}

real score(const Geometry& g, const VectorXr& pred) {
  return g.metric == "mse" ? mean_squared_error(pred, g.truth) : l2_relative_error(pred, g.truth);
}

// Pieces of M shared by every cell of a scenario.
struct SharedForms {
  VectorXr diagonal;
  HermitianMatrix penalty;
};

SharedForms shared_forms(const GramSpec& spec, unsigned threads) {
  return SharedForms{sobolev_diagonal(spec.modes, spec.s, spec.scaling), assemble_penalty(spec, threads)};
}

struct CellOutput {
  std::vector<RunRow> rows;
};

CellOutput run_kernel_cell(const Scenario& sc, const Geometry& g, const SharedForms& forms,
                           long n, std::uint64_t seed, unsigned threads,
                           std::vector<PiklModel>* models) {
  CellOutput out;
  const Dataset data = generate(sc, n, seed);
  MatrixXr test = g.test_raw;
  to_model_coords(sc.kind, test);

  auto t0 = Clock::now();
  SufficientStats stats(g.spec.modes);
  stats.accumulate_parallel(data, threads);
  const double t_stats = seconds_since(t0);

  for (const auto& est : sc.estimators) {
    RunRow row;
    row.estimator = est.name;
    row.n = n;
    row.seed = seed;
    row.m = sc.m;
    row.lambda = est.lambda.at(static_cast<real>(n));
    row.mu = est.mu.at(static_cast<real>(n));
    row.metric = g.metric;
    GramSpec check = g.spec;
    check.lambda = row.lambda;
    check.mu = row.mu;
    check.validate();

    t0 = Clock::now();
    const HermitianMatrix m = combine_m(forms.diagonal, forms.penalty, row.lambda, row.mu);
    row.seconds_assemble = t_stats + seconds_since(t0);

    t0 = Clock::now();
    FitInfo info;
    PiklModel model = fit(stats, m, &info);
    row.seconds_fit = seconds_since(t0);
    row.used_lu = info.used_lu;

    t0 = Clock::now();
    const VectorXr pred = predict(model, test);
    row.seconds_predict = seconds_since(t0);
    row.error = score(g, pred);
    out.rows.push_back(row);
    if (models) models->push_back(std::move(model));
  }

  for (const auto& b : sc.baselines) {
    RunRow row;
    row.estimator = b;
    row.n = n;
    row.seed = seed;
    row.metric = g.metric;
    t0 = Clock::now();
    if (b == "ols") {
      const Dataset raw = gen_oscillator(static_cast<std::size_t>(n), sc.sigma, seed);
      const OlsFit ols = ols_oscillator(raw);
      row.seconds_fit = seconds_since(t0);
      t0 = Clock::now();
      VectorXr pred(g.test_raw.rows());
      for (Eigen::Index i = 0; i < pred.size(); ++i) pred(i) = ols(g.test_raw(i, 0));
      row.seconds_predict = seconds_since(t0);
      row.error = score(g, pred);
    } else {
      const auto [l1, l2] = wave_grid_split(n);
      WaveOptions o;
      o.l1 = l1;
      o.l2 = l2;
      o.noise = NoisySpec{sc.sigma, seed};
      const WaveResult r = solve_wave(parse_wave_method(b), o);
      row.seconds_fit = seconds_since(t0);
      row.metric = "l2_relative";
      row.error = r.l2_error;
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace

std::vector<RunSummary> summarize(const std::vector<RunRow>& rows) {
  std::vector<RunSummary> out;
  std::map<std::pair<std::string, long>, std::size_t> index;
  std::vector<std::vector<real>> values;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.estimator, r.n);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back(RunSummary{r.estimator, r.n, r.metric, 0.0, 0.0, 0});
      values.emplace_back();
    }
    values[it->second].push_back(r.error);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& v = values[i];
    real mean = 0.0;
    for (real e : v) mean += e;
    mean /= static_cast<real>(v.size());
    real var = 0.0;
    for (real e : v) var += (e - mean) * (e - mean);
    out[i].mean = mean;
    out[i].std = v.size() > 1 ? std::sqrt(var / static_cast<real>(v.size() - 1)) : 0.0;
    out[i].count = v.size();
  }
  return out;
}

RunReport run_scenario(const Scenario& sc) {
  sc.validate();
  const unsigned threads = sc.threads == 0 ? default_threads() : sc.threads;
  const Geometry g = make_geometry(sc);
  const SharedForms forms = shared_forms(g.spec, threads);

  std::vector<std::pair<long, std::uint64_t>> cells;
  for (long n : sc.ns)
    for (auto seed : sc.seeds) cells.emplace_back(n, seed);
  std::vector<CellOutput> outputs(cells.size());
  const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(threads, cells.size()));
  const unsigned inner = std::max(1u, threads / std::max(1u, outer));
  parallel_for(cells.size(), outer, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      try {
        outputs[i] = run_kernel_cell(sc, g, forms, cells[i].first, cells[i].second, inner, nullptr);
      } catch (const FactorizationError& err) {
        throw FactorizationError("scenario '" + sc.name + "', n = " + std::to_string(cells[i].first) +
                                     ", seed = " + std::to_string(cells[i].second) + ": " + err.what(),
                                 err.smallest_pivot());
      } catch (const NumericError& err) {
        throw NumericError("scenario '" + sc.name + "', n = " + std::to_string(cells[i].first) +
                           ", seed = " + std::to_string(cells[i].second) + ": " + err.what());
      }
    }
  });

  RunReport report;
  report.scenario = sc.name;
  for (auto& o : outputs)
    for (auto& r : o.rows) report.rows.push_back(std::move(r));
  report.summary = summarize(report.rows);
  return report;
}

CellResult run_cell(const Scenario& sc, const EstimatorSpec& est, long n, std::uint64_t seed) {
  Scenario one = sc;
  one.estimators = {est};
  one.baselines.clear();
  one.validate();
  const unsigned threads = sc.threads == 0 ? default_threads() : sc.threads;
  const Geometry g = make_geometry(one);
  const SharedForms forms = shared_forms(g.spec, threads);
  std::vector<PiklModel> models;
  CellOutput out = run_kernel_cell(one, g, forms, n, seed, threads, &models);
  return CellResult{std::move(models.front()), std::move(out.rows.front())};
}

}  // namespace pikl
