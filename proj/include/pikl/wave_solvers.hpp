#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "pikl/types.hpp"

namespace pikl {

/// Finite-difference baselines for f_tt = c2 f_xx on [0,1]^2 with
/// f(0,x) = g(x), f_t(0,x) = 0 and f(t,0) = f(t,1) = 0.

enum class WaveMethod { Euler, RK4, CrankNicolson };

std::string to_string(WaveMethod method);
/// Accepts "euler", "rk4", "cn" / "crank_nicolson"; throws ConfigError otherwise.
WaveMethod parse_wave_method(const std::string& name);

/// Gaussian perturbation of the sampled initial row and boundary columns.
struct NoisySpec {
  real sigma = 0.0;
  std::uint64_t seed = 0;
};

struct WaveProblem {
  real c2 = 4.0;
  /// Initial profile g; default sin(pi x) + sin(4 pi x) / 2.
  std::function<real(real)> initial;
  /// Reference solution for the error; default is the exact solution of the
  /// default problem. Ignored when empty and `initial` is customised.
  std::function<real(real, real)> truth;

  static real default_initial(real x);
  static real default_truth(real t, real x);
};

/// l1 time steps and l2 space steps on the (l1+1) x (l2+1) grid.
struct WaveGrid {
  int l1 = 0;
  int l2 = 0;
  /// Row a holds t = a / l1, column b holds x = b / l2. Empty unless requested.
  MatrixXr values;
};

struct WaveResult {
  WaveMethod method;
  int l1 = 0;
  int l2 = 0;
  /// sqrt(sum (f_hat - f)^2 / sum f^2) over every grid node; NaN without a reference.
  real l2_error = 0.0;
  std::optional<WaveGrid> grid;
};

struct WaveOptions {
  int l1 = 0;
  int l2 = 0;
  NoisySpec noise;
  WaveProblem problem;
  bool keep_grid = false;
};

/// Time-stepping grid for n = 2 l1 + l2 conditioning points with l1 = 2 l2,
/// i.e. Courant number c dt / dx = 1 at c = 2.
std::pair<int, int> wave_grid_split(long n);

WaveResult solve_wave(WaveMethod method, const WaveOptions& options);

WaveResult solve_euler_explicit(int l1, int l2, NoisySpec noise = {}, bool keep_grid = false);
WaveResult solve_rk4(int l1, int l2, NoisySpec noise = {}, bool keep_grid = false);
WaveResult solve_crank_nicolson(int l1, int l2, NoisySpec noise = {}, bool keep_grid = false);

/// Long-format dump: t,x,value per node.
void write_csv(const WaveGrid& grid, std::ostream& os);

}  // namespace pikl
