#include "pikl/modes.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pikl {

ModeSet::ModeSet(int m, int d, real half_width, std::size_t budget)
    : m_(m), d_(d), half_width_(half_width), size_(1) {
  if (m < 0) throw ConfigError("ModeSet: m must be nonnegative, got " + std::to_string(m));
  if (d < 1) throw ConfigError("ModeSet: dimension must be positive, got " + std::to_string(d));
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ConfigError("ModeSet: half-width L must be positive and finite");
  const std::size_t s = side();
  for (int j = 0; j < d; ++j) {
    if (size_ > budget / s)
      throw CapacityError("ModeSet: (2m+1)^d with m=" + std::to_string(m) + ", d=" +
                          std::to_string(d) + " exceeds the budget of " +
                          std::to_string(budget) + " modes");
    size_ *= s;
  }
}

void ModeSet::mode(std::size_t i, std::span<int> out) const {
  if (out.size() != static_cast<std::size_t>(d_)) throw DimensionError("ModeSet::mode: output size");
  if (i >= size_) throw DimensionError("ModeSet::mode: index out of range");
  const std::size_t s = side();
  for (int j = d_ - 1; j >= 0; --j) {
    out[static_cast<std::size_t>(j)] = static_cast<int>(i % s) - m_;
    i /= s;
  }
}

std::vector<int> ModeSet::mode(std::size_t i) const {
  std::vector<int> k(static_cast<std::size_t>(d_));
  mode(i, k);
  return k;
}

bool ModeSet::contains(std::span<const int> k) const {
  if (k.size() != static_cast<std::size_t>(d_)) return false;
  for (int kj : k)
    if (kj < -m_ || kj > m_) return false;
  return true;
}

std::size_t ModeSet::index_of(std::span<const int> k) const {
  if (k.size() != static_cast<std::size_t>(d_))
    throw DimensionError("ModeSet::index_of: multi-index has dimension " +
                         std::to_string(k.size()) + ", expected " + std::to_string(d_));
  if (!contains(k)) throw DimensionError("ModeSet::index_of: multi-index outside {-m..m}^d");
  std::size_t i = 0;
  for (int kj : k) i = i * side() + static_cast<std::size_t>(kj + m_);
  return i;
}

std::vector<std::vector<int>> enumerate_modes(const ModeSet& modes) {
  std::vector<std::vector<int>> out;
  out.reserve(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) out.push_back(modes.mode(i));
  return out;
}

void axis_phases(const ModeSet& modes, std::span<const real> x, real sign, std::span<cplx> out) {
  const int m = modes.m();
  const std::size_t s = modes.side();
  const real w = modes.frequency_scale();
  for (std::size_t j = 0; j < x.size(); ++j) {
    cplx* row = out.data() + j * s;
    row[m] = 1.0;
    for (int k = 1; k <= m; ++k) {
      const cplx e = std::polar(1.0, sign * w * k * x[j]);
      row[m + k] = e;
      row[m - k] = std::conj(e);
    }
  }
}

namespace {

void check_point(const ModeSet& modes, std::span<const real> x) {
  if (x.size() != static_cast<std::size_t>(modes.dim()))
    throw DimensionError("point has dimension " + std::to_string(x.size()) + ", expected " +
                         std::to_string(modes.dim()));
}

// Contracts the coefficient tensor with per-axis phase rows, last axis first.
cplx contract(const ModeSet& modes, const VectorXc& z, const std::vector<cplx>& phases,
              std::vector<cplx>& work) {
  const std::size_t s = modes.side();
  const int d = modes.dim();
  std::size_t len = modes.size();
  work.assign(z.data(), z.data() + len);
  for (int j = d - 1; j >= 0; --j) {
    const cplx* ph = phases.data() + static_cast<std::size_t>(j) * s;
    const std::size_t outer = len / s;
    for (std::size_t o = 0; o < outer; ++o) {
      cplx acc = 0.0;
      const cplx* src = work.data() + o * s;
      for (std::size_t k = 0; k < s; ++k) acc += src[k] * ph[k];
      work[o] = acc;
    }
    len = outer;
  }
  return work[0];
}

}  // namespace

VectorXc feature_map(const ModeSet& modes, std::span<const real> x) {
  check_point(modes, x);
  const std::size_t s = modes.side();
  const int d = modes.dim();
  std::vector<cplx> phases(s * static_cast<std::size_t>(d));
  axis_phases(modes, x, +1.0, phases);
  const real norm = std::pow(4.0 * modes.half_width(), -0.5 * d);
  VectorXc phi(static_cast<Eigen::Index>(modes.size()));
  std::vector<int> k(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < modes.size(); ++i) {
    modes.mode(i, k);
    cplx v = norm;
    for (int j = 0; j < d; ++j) v *= phases[static_cast<std::size_t>(j) * s + static_cast<std::size_t>(k[j] + modes.m())];
    phi(static_cast<Eigen::Index>(i)) = v;
  }
  return phi;
}

cplx synthesize(const ModeSet& modes, const VectorXc& z, std::span<const real> x) {
  check_point(modes, x);
  if (static_cast<std::size_t>(z.size()) != modes.size())
    throw DimensionError("synthesize: coefficient vector has length " + std::to_string(z.size()) +
                         ", expected " + std::to_string(modes.size()));
  std::vector<cplx> phases(modes.side() * static_cast<std::size_t>(modes.dim()));
  std::vector<cplx> work;
  axis_phases(modes, x, -1.0, phases);
  return std::pow(4.0 * modes.half_width(), -0.5 * modes.dim()) * contract(modes, z, phases, work);
}

std::vector<cplx> synthesize(const ModeSet& modes, const VectorXc& z, const MatrixXr& points) {
  if (points.cols() != modes.dim())
    throw DimensionError("synthesize: points have " + std::to_string(points.cols()) +
                         " columns, expected " + std::to_string(modes.dim()));
  if (static_cast<std::size_t>(z.size()) != modes.size())
    throw DimensionError("synthesize: coefficient vector has length " + std::to_string(z.size()) +
                         ", expected " + std::to_string(modes.size()));
  const real norm = std::pow(4.0 * modes.half_width(), -0.5 * modes.dim());
  std::vector<cplx> out(static_cast<std::size_t>(points.rows()));
  std::vector<cplx> phases(modes.side() * static_cast<std::size_t>(modes.dim()));
  std::vector<cplx> work;
  std::vector<real> x(static_cast<std::size_t>(modes.dim()));
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    for (int j = 0; j < modes.dim(); ++j) x[static_cast<std::size_t>(j)] = points(r, j);
    axis_phases(modes, x, -1.0, phases);
    out[static_cast<std::size_t>(r)] = norm * contract(modes, z, phases, work);
  }
  return out;
}

}  // namespace pikl
