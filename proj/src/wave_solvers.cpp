#include "pikl/wave_solvers.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "pikl/rng.hpp"

namespace pikl {

std::string to_string(WaveMethod method) {
  switch (method) {
    case WaveMethod::Euler: return "euler";
    case WaveMethod::RK4: return "rk4";
    case WaveMethod::CrankNicolson: return "cn";
  }
  return "unknown";
}

WaveMethod parse_wave_method(const std::string& name) {
  if (name == "euler" || name == "euler_explicit") return WaveMethod::Euler;
  if (name == "rk4") return WaveMethod::RK4;
  if (name == "cn" || name == "crank_nicolson") return WaveMethod::CrankNicolson;
  throw ConfigError("unknown wave solver method '" + name + "' (expected euler, rk4 or cn)");
}

real WaveProblem::default_initial(real x) { return std::sin(pi * x) + 0.5 * std::sin(4.0 * pi * x); }

real WaveProblem::default_truth(real t, real x) {
  return std::sin(pi * x) * std::cos(2.0 * pi * t) + 0.5 * std::sin(4.0 * pi * x) * std::cos(8.0 * pi * t);
}

std::pair<int, int> wave_grid_split(long n) {
  if (n < 5) throw ConfigError("wave_grid_split: n must be at least 5");
  const int l2 = static_cast<int>(std::lround(static_cast<double>(n) / 5.0));
  return {2 * l2, l2};
}

namespace {

using Row = std::vector<real>;

// Sampled (possibly noisy) initial row and boundary columns.
struct Conditions {
  Row init;
  Row left;
  Row right;
};

Conditions sample_conditions(const WaveOptions& o) {
  Conditions c;
  const auto& g = o.problem.initial ? o.problem.initial : WaveProblem::default_initial;
  c.init.resize(static_cast<std::size_t>(o.l2 + 1));
  for (int b = 1; b < o.l2; ++b) c.init[static_cast<std::size_t>(b)] = g(static_cast<real>(b) / o.l2);
  c.left.assign(static_cast<std::size_t>(o.l1 + 1), 0.0);
  c.right.assign(static_cast<std::size_t>(o.l1 + 1), 0.0);
  if (o.noise.sigma > 0.0) {
    CounterRng rng(o.noise.seed, 0x77617665ULL);
    for (real& v : c.init) v += o.noise.sigma * rng.normal();
    c.left[0] = c.init.front();
    c.right[0] = c.init.back();
    for (int a = 1; a <= o.l1; ++a) {
      c.left[static_cast<std::size_t>(a)] += o.noise.sigma * rng.normal();
      c.right[static_cast<std::size_t>(a)] += o.noise.sigma * rng.normal();
    }
  }
  return c;
}

class ErrorAccumulator {
 public:
  ErrorAccumulator(const WaveOptions& o) : l1_(o.l1), l2_(o.l2) {
    if (o.problem.truth) truth_ = o.problem.truth;
    else if (!o.problem.initial) truth_ = WaveProblem::default_truth;
  }

  void add(int a, const Row& row) {
    if (!truth_) return;
    const real t = static_cast<real>(a) / l1_;
    for (int b = 0; b <= l2_; ++b) {
      const real f = truth_(t, static_cast<real>(b) / l2_);
      const real e = row[static_cast<std::size_t>(b)] - f;
      num_ += e * e;
      den_ += f * f;
    }
  }

  real value() const {
    if (!truth_) return std::numeric_limits<real>::quiet_NaN();
    if (den_ == 0.0) throw NumericError("wave error: reference solution is identically zero");
    return std::sqrt(num_ / den_);
  }

 private:
  int l1_;
  int l2_;
  std::function<real(real, real)> truth_;
  real num_ = 0.0;
  real den_ = 0.0;
};

class Recorder {
 public:
  Recorder(const WaveOptions& o) : acc_(o) {
    if (o.keep_grid) grid_.emplace(WaveGrid{o.l1, o.l2, MatrixXr(o.l1 + 1, o.l2 + 1)});
  }

  void add(int a, const Row& row) {
    if (!std::isfinite(row[row.size() / 2])) diverged_ = true;
    acc_.add(a, row);
    if (grid_)
      for (std::size_t b = 0; b < row.size(); ++b) grid_->values(a, static_cast<Eigen::Index>(b)) = row[b];
  }

  WaveResult finish(WaveMethod method, const WaveOptions& o) {
    WaveResult r{method, o.l1, o.l2, acc_.value(), std::move(grid_)};
    if (diverged_) r.l2_error = std::numeric_limits<real>::infinity();
    return r;
  }

 private:
  ErrorAccumulator acc_;
  std::optional<WaveGrid> grid_;
  bool diverged_ = false;
};

// Second difference (f[b+1] - 2 f[b] + f[b-1]) at interior node b.
inline real d2(const Row& f, std::size_t b) { return f[b + 1] - 2.0 * f[b] + f[b - 1]; }

// First time row from f(dt) = f(0) + dt^2 / 2 * c2 * f_xx(0).
Row taylor_first_step(const WaveOptions& o, const Conditions& c) {
  const real coef = 0.5 * o.problem.c2 * static_cast<real>(o.l2) * o.l2 / (static_cast<real>(o.l1) * o.l1);
  Row f1(c.init.size());
  for (std::size_t b = 1; b + 1 < f1.size(); ++b) f1[b] = c.init[b] + coef * d2(c.init, b);
  f1.front() = c.left[1];
  f1.back() = c.right[1];
  return f1;
}

WaveResult run_euler(const WaveOptions& o, const Conditions& c, Recorder& rec) {
  const real r = o.problem.c2 * static_cast<real>(o.l2) * o.l2 / (static_cast<real>(o.l1) * o.l1);
  Row prev = c.init;
  Row cur = taylor_first_step(o, c);
  Row next(prev.size());
  rec.add(0, prev);
  rec.add(1, cur);
  for (int a = 1; a < o.l1; ++a) {
    for (std::size_t b = 1; b + 1 < next.size(); ++b) next[b] = 2.0 * cur[b] - prev[b] + r * d2(cur, b);
    next.front() = c.left[static_cast<std::size_t>(a + 1)];
    next.back() = c.right[static_cast<std::size_t>(a + 1)];
    std::swap(prev, cur);
    std::swap(cur, next);
    rec.add(a + 1, cur);
  }
  return rec.finish(WaveMethod::Euler, o);
}

WaveResult run_rk4(const WaveOptions& o, const Conditions& c, Recorder& rec) {
  const std::size_t n = c.init.size();
  const real h = 1.0 / o.l1;
  const real k = o.problem.c2 * static_cast<real>(o.l2) * o.l2;
  Row f = c.init;
  Row g(n, 0.0);
  Row fs(n), gs(n);
  Row k1f(n), k1g(n), k2f(n), k2g(n), k3f(n), k3g(n), k4f(n), k4g(n);
  rec.add(0, f);

  auto accel = [&](const Row& u, Row& out) {
    for (std::size_t b = 1; b + 1 < n; ++b) out[b] = k * d2(u, b);
  };

  for (int a = 0; a < o.l1; ++a) {
    const auto ia = static_cast<std::size_t>(a);
    const real l_mid = 0.5 * (c.left[ia] + c.left[ia + 1]);
    const real r_mid = 0.5 * (c.right[ia] + c.right[ia + 1]);

    k1f = g;
    accel(f, k1g);

    for (std::size_t b = 1; b + 1 < n; ++b) {
      fs[b] = f[b] + 0.5 * h * k1f[b];
      gs[b] = g[b] + 0.5 * h * k1g[b];
    }
    fs.front() = l_mid;
    fs.back() = r_mid;
    k2f = gs;
    accel(fs, k2g);

    for (std::size_t b = 1; b + 1 < n; ++b) {
      fs[b] = f[b] + 0.5 * h * k2f[b];
      gs[b] = g[b] + 0.5 * h * k2g[b];
    }
    k3f = gs;
    accel(fs, k3g);

    for (std::size_t b = 1; b + 1 < n; ++b) {
      fs[b] = f[b] + h * k3f[b];
      gs[b] = g[b] + h * k3g[b];
    }
    fs.front() = c.left[ia + 1];
    fs.back() = c.right[ia + 1];
    k4f = gs;
    accel(fs, k4g);

    for (std::size_t b = 1; b + 1 < n; ++b) {
      f[b] += h / 6.0 * (k1f[b] + 2.0 * k2f[b] + 2.0 * k3f[b] + k4f[b]);
      g[b] += h / 6.0 * (k1g[b] + 2.0 * k2g[b] + 2.0 * k3g[b] + k4g[b]);
    }
    f.front() = c.left[ia + 1];
    f.back() = c.right[ia + 1];
    rec.add(a + 1, f);
  }
  return rec.finish(WaveMethod::RK4, o);
}

// (I + 2 r T) u = rhs with T = tridiag(-1, 2, -1), factored once (Thomas).
class TridiagonalSolver {
 public:
  TridiagonalSolver(std::size_t n, real r) : diag_(n), upper_(n), off_(-2.0 * r) {
    const real main = 1.0 + 4.0 * r;
    real denom = main;
    if (!(denom > 0.0)) throw NumericError("tridiagonal solver: singular system");
    diag_[0] = denom;
    upper_[0] = off_ / denom;
    for (std::size_t i = 1; i < n; ++i) {
      denom = main - off_ * upper_[i - 1];
      if (!(std::abs(denom) > 0.0)) throw NumericError("tridiagonal solver: zero pivot");
      diag_[i] = denom;
      upper_[i] = off_ / denom;
    }
  }

  void solve(std::vector<real>& x) const {
    const std::size_t n = x.size();
    x[0] /= diag_[0];
    for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - off_ * x[i - 1]) / diag_[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= upper_[i] * x[i + 1];
  }

 private:
  std::vector<real> diag_;
  std::vector<real> upper_;
  real off_;
};

WaveResult run_cn(const WaveOptions& o, const Conditions& c, Recorder& rec) {
  const std::size_t n = c.init.size();
  const std::size_t inner = n - 2;
  const real r = o.problem.c2 * static_cast<real>(o.l2) * o.l2 / (4.0 * static_cast<real>(o.l1) * o.l1);
  const TridiagonalSolver solver(inner, r);
  Row prev = c.init;
  Row cur = taylor_first_step(o, c);
  Row next(n);
  std::vector<real> u(inner);
  rec.add(0, prev);
  rec.add(1, cur);
  for (int a = 1; a < o.l1; ++a) {
    const auto ia = static_cast<std::size_t>(a);
    const real u_left = c.left[ia + 1] + cur.front();
    const real u_right = c.right[ia + 1] + cur.back();
    for (std::size_t b = 1; b + 1 < n; ++b) u[b - 1] = 3.0 * cur[b] - prev[b];
    u.front() += 2.0 * r * u_left;
    u.back() += 2.0 * r * u_right;
    solver.solve(u);
    for (std::size_t b = 1; b + 1 < n; ++b) next[b] = u[b - 1] - cur[b];
    next.front() = c.left[ia + 1];
    next.back() = c.right[ia + 1];
    std::swap(prev, cur);
    std::swap(cur, next);
    rec.add(a + 1, cur);
  }
  return rec.finish(WaveMethod::CrankNicolson, o);
}

}  // namespace

WaveResult solve_wave(WaveMethod method, const WaveOptions& options) {
  if (options.l1 < 2 || options.l2 < 2) throw ConfigError("wave solver: l1 and l2 must be at least 2");
  if (!(options.noise.sigma >= 0.0)) throw ConfigError("wave solver: noise sigma must be >= 0");
  if (!(options.problem.c2 > 0.0)) throw ConfigError("wave solver: c2 must be positive");
  const Conditions c = sample_conditions(options);
  Recorder rec(options);
  switch (method) {
    case WaveMethod::Euler: return run_euler(options, c, rec);
    case WaveMethod::RK4: return run_rk4(options, c, rec);
    case WaveMethod::CrankNicolson: return run_cn(options, c, rec);
  }
  throw ConfigError("wave solver: unknown method");
}

namespace {

WaveOptions make_options(int l1, int l2, NoisySpec noise, bool keep_grid) {
  WaveOptions o;
  o.l1 = l1;
  o.l2 = l2;
  o.noise = noise;
  o.keep_grid = keep_grid;
  return o;
}

}  // namespace

WaveResult solve_euler_explicit(int l1, int l2, NoisySpec noise, bool keep_grid) {
  return solve_wave(WaveMethod::Euler, make_options(l1, l2, noise, keep_grid));
}

WaveResult solve_rk4(int l1, int l2, NoisySpec noise, bool keep_grid) {
  return solve_wave(WaveMethod::RK4, make_options(l1, l2, noise, keep_grid));
}

WaveResult solve_crank_nicolson(int l1, int l2, NoisySpec noise, bool keep_grid) {
  return solve_wave(WaveMethod::CrankNicolson, make_options(l1, l2, noise, keep_grid));
}

void write_csv(const WaveGrid& grid, std::ostream& os) {
  const auto old = os.precision(17);
  os << "t,x,value\n";
  for (int a = 0; a <= grid.l1; ++a)
    for (int b = 0; b <= grid.l2; ++b)
      os << static_cast<real>(a) / grid.l1 << ',' << static_cast<real>(b) / grid.l2 << ','
         << grid.values(a, b) << '\n';
  os.precision(old);
}

}  // namespace pikl
