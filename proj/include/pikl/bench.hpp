#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pikl/estimator.hpp"
#include "pikl/gram.hpp"
#include "pikl/wave_solvers.hpp"

namespace pikl {

// ---- data generators ------------------------------------------------------

/// f1(x) = exp(-x/2) cos(sqrt(3) x / 2) and f2(x) = exp(-x/2) sin(sqrt(3) x / 2)
/// span the solutions of f'' + f' + f = 0.
real oscillator_f1(real x);
real oscillator_f2(real x);

/// X ~ U[-pi, pi], Y = f1(X) + N(0, sigma^2).
Dataset gen_oscillator(std::size_t n, real sigma, std::uint64_t seed);

struct OlsFit {
  real a1;
  real a2;
  real operator()(real x) const { return a1 * oscillator_f1(x) + a2 * oscillator_f2(x); }
};

/// Least squares over span(f1, f2) via the 2x2 normal equations.
OlsFit ols_oscillator(const Dataset& data);

/// f*(t, x) = exp(-t) cos(x) + sin(2x) / 2.
real heat_truth(real t, real x);
/// X ~ U([-pi, pi]^2), Y = f*(X) + N(0, sigma^2).
Dataset gen_heat_hybrid(std::size_t n, std::uint64_t seed, real sigma = 0.5);
/// ||D f*||^2 and ||f*||^2 over [-pi, pi]^2 for D = d_t - d_xx, by
/// tensor Gauss-Legendre quadrature.
real heat_residual_norm_sq();
real heat_truth_norm_sq();

/// Initial-condition data on Omega = [0,1] x [0, 2 pi]: X = (0, U), Y = sin(U),
/// U ~ U[0, 2 pi].
Dataset gen_convection(std::size_t n, std::uint64_t seed);
real convection_truth(real beta, real t, real x);

/// Boundary and initial data for f_tt = 4 f_xx on [0,1]^2 in four blocks of
/// floor(n/4) points (the last block takes the remainder): initial profile,
/// x = 0, x = 1, and the second-order row t = 1/n enforcing f_t(0, x) = 0.
/// Gaussian noise of standard deviation sigma is added to every Y.
Dataset gen_wave(std::size_t n, std::uint64_t seed, real sigma = 0.0);

/// sqrt(sum (pred - truth)^2 / sum truth^2).
real l2_relative_error(const VectorXr& pred, const VectorXr& truth);
/// mean (pred - truth)^2.
real mean_squared_error(const VectorXr& pred, const VectorXr& truth);

// ---- scenarios ------------------------------------------------------------

enum class ScenarioKind { Oscillator, HeatHybrid, Convection, Wave };

std::string to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(const std::string& name);

/// coef * g(n) for g in {1, n^exponent, log(n)/n, 1/log(n)}.
struct ParamSchedule {
  enum class Kind { Constant, Power, LogOverN, InvLog };
  Kind kind = Kind::Constant;
  real coef = 1.0;
  real exponent = 0.0;

  real at(real n) const;
  std::string describe() const;
  static ParamSchedule constant(real v) { return {Kind::Constant, v, 0.0}; }
  static ParamSchedule power(real c, real p) { return {Kind::Power, c, p}; }
};

/// A kernel estimator: "pikl", "sobolev" or "pde" with its (lambda_n, mu_n).
struct EstimatorSpec {
  std::string name;
  ParamSchedule lambda;
  ParamSchedule mu;
};

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::Oscillator;
  std::vector<long> ns;
  std::vector<std::uint64_t> seeds;
  int m = 20;
  int s = 2;
  /// Half-width L of the Fourier box (wave, heat, oscillator); the
  /// convection box is fixed by its periodic axis.
  real half_width = 0.5;
  SobolevScaling scaling = SobolevScaling::PerAxis;
  real sigma = 0.0;
  real beta = 40.0;
  std::vector<EstimatorSpec> estimators;
  /// "ols" (oscillator) or "euler", "rk4", "cn" (wave).
  std::vector<std::string> baselines;
  int test_grid = 101;
  unsigned threads = 0;

  /// Throws ConfigError for inconsistent settings.
  void validate() const;

  static Scenario oscillator();
  static Scenario heat_hybrid();
  static Scenario convection(real beta);
  static Scenario wave();
  /// Wave with noisy boundary data (sigma = 0.1), n = 4e4, PIKL against the
  /// three classic solvers.
  static Scenario wave_noisy();
  /// Looks up a preset by name: oscillator, heat_hybrid, convection, wave, wave_noisy.
  static Scenario preset(const std::string& name);
};

struct RunRow {
  std::string estimator;
  long n = 0;
  std::uint64_t seed = 0;
  int m = 0;
  real lambda = 0.0;
  real mu = 0.0;
  std::string metric;
  real error = 0.0;
  double seconds_assemble = 0.0;
  double seconds_fit = 0.0;
  double seconds_predict = 0.0;
  bool used_lu = false;
};

struct RunSummary {
  std::string estimator;
  long n = 0;
  std::string metric;
  real mean = 0.0;
  real std = 0.0;
  std::size_t count = 0;
};

struct RunReport {
  std::string scenario;
  std::vector<RunRow> rows;
  std::vector<RunSummary> summary;

  /// Mean error of `estimator` at `n`; throws ConfigError if absent.
  real mean(const std::string& estimator, long n) const;
};

RunReport run_scenario(const Scenario& sc);

/// Fits one kernel estimator on the scenario's data for (n, seed).
struct CellResult {
  PiklModel model;
  RunRow row;
};
CellResult run_cell(const Scenario& sc, const EstimatorSpec& est, long n, std::uint64_t seed);

/// Recomputes the mean and sample standard deviation per (estimator, n).
std::vector<RunSummary> summarize(const std::vector<RunRow>& rows);

}  // namespace pikl
