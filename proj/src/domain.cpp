#include "pikl/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <variant>

#include "pikl/rng.hpp"

namespace pikl {

namespace {

struct CubeLeaf {};
struct BallLeaf {};
struct TorusLeaf {};
struct ScaledNode {
  Domain inner;
  real a;
};
struct TranslatedNode {
  Domain inner;
  std::vector<real> shift;
};
struct UnionNode {
  std::vector<Domain> parts;
};
struct ProductNode {
  Domain left;
  Domain right;
};
struct MonteCarloLeaf {
  Domain::Indicator indicator;
  Box box;
  std::size_t samples;
  std::uint64_t seed;
  MatrixXr inside;  // accepted sample points, one per row
};

bool is_integer(real k) { return std::isfinite(k) && k == std::round(k); }

// sin(pi k / 2) / (pi k), exact on the integer lattice and at k = 0.
real sinc_half(real k) {
  if (k == 0.0) return 0.5;
  if (is_integer(k)) {
    const long long r = static_cast<long long>(std::llround(k)) % 4;
    const real s = (r == 1 || r == -3) ? 1.0 : (r == 3 || r == -1) ? -1.0 : 0.0;
    return s / (pi * k);
  }
  const real h = 0.5 * pi * k;
  if (std::abs(h) < 1e-5) return 0.5 * (1.0 - h * h / 6.0);
  return std::sin(h) / (pi * k);
}

// sin(pi k) / (pi k): the full-torus factor.
real sinc_full(real k) {
  if (k == 0.0) return 1.0;
  if (is_integer(k)) return 0.0;
  const real h = pi * k;
  if (std::abs(h) < 1e-5) return 1.0 - h * h / 6.0;
  return std::sin(h) / h;
}

}  // namespace

struct Domain::Node {
  int dim;
  real half_width;
  std::variant<CubeLeaf, BallLeaf, TorusLeaf, ScaledNode, TranslatedNode, UnionNode, ProductNode,
               MonteCarloLeaf>
      kind;
};

real Box::volume() const {
  real v = 1.0;
  for (std::size_t j = 0; j < lo.size(); ++j) v *= hi[j] - lo[j];
  return v;
}

real cube_char_fn(std::span<const real> k) {
  real v = 1.0;
  for (real kj : k) v *= sinc_half(kj);
  return v;
}

real ball2d_char_fn(std::span<const real> k) {
  if (k.size() != 2) throw DimensionError("disk characteristic function needs d = 2");
  const real r = std::hypot(k[0], k[1]);
  if (r == 0.0) return pi / 16.0;
  const real y = 0.5 * pi * r;
  if (y < 1e-4) return pi / 16.0 * (1.0 - y * y / 8.0);
  return bessel_j1(y) / (4.0 * r);
}

namespace {

void check_half_width(real L) {
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("domain half-width L must be positive");
}

}  // namespace

Domain Domain::cube(int d, real half_width) {
  if (d < 1) throw ConfigError("cube: dimension must be positive");
  check_half_width(half_width);
  return Domain(std::make_shared<const Node>(Node{d, half_width, CubeLeaf{}}));
}

Domain Domain::ball2d(real half_width) {
  check_half_width(half_width);
  return Domain(std::make_shared<const Node>(Node{2, half_width, BallLeaf{}}));
}

Domain Domain::torus(int d, real half_width) {
  if (d < 1) throw ConfigError("torus: dimension must be positive");
  check_half_width(half_width);
  return Domain(std::make_shared<const Node>(Node{d, half_width, TorusLeaf{}}));
}

Domain Domain::scaled(const Domain& inner, real a) {
  if (!(std::abs(a) <= 1.0) || a == 0.0)
    throw ConfigError("scaled: factor must satisfy 0 < |a| <= 1");
  return Domain(std::make_shared<const Node>(Node{inner.dim(), inner.half_width(), ScaledNode{inner, a}}));
}

Domain Domain::translated(const Domain& inner, std::vector<real> shift) {
  if (shift.size() != static_cast<std::size_t>(inner.dim()))
    throw DimensionError("translated: shift dimension does not match domain dimension");
  const real L = inner.half_width();
  for (real zj : shift)
    if (!(std::abs(zj) < 0.5 * L)) throw ConfigError("translated: |shift|_inf must be < L/2");
  const Box b = inner.bounding_box();
  for (std::size_t j = 0; j < b.lo.size(); ++j)
    if (b.lo[j] < -0.5 * L - 1e-12 * L || b.hi[j] > 0.5 * L + 1e-12 * L)
      throw ConfigError("translated: inner domain must lie in [-L/2, L/2]^d");
  return Domain(std::make_shared<const Node>(
      Node{inner.dim(), L, TranslatedNode{inner, std::move(shift)}}));
}

Domain Domain::disjoint_union(const std::vector<Domain>& parts) {
  if (parts.empty()) throw ConfigError("disjoint_union: at least one part required");
  for (const auto& p : parts) {
    if (p.dim() != parts.front().dim()) throw DimensionError("disjoint_union: dimension mismatch");
    if (p.half_width() != parts.front().half_width())
      throw ConfigError("disjoint_union: parts must share L");
  }
  return Domain(std::make_shared<const Node>(
      Node{parts.front().dim(), parts.front().half_width(), UnionNode{parts}}));
}

Domain Domain::product(const Domain& left, const Domain& right) {
  if (left.half_width() != right.half_width()) throw ConfigError("product: factors must share L");
  return Domain(std::make_shared<const Node>(
      Node{left.dim() + right.dim(), left.half_width(), ProductNode{left, right}}));
}

Domain Domain::monte_carlo(Indicator indicator, Box box, real half_width, std::size_t samples,
                           std::uint64_t seed) {
  check_half_width(half_width);
  if (!indicator) throw ConfigError("monte_carlo: indicator is empty");
  if (box.lo.empty() || box.lo.size() != box.hi.size())
    throw DimensionError("monte_carlo: bounding box corners disagree in dimension");
  for (std::size_t j = 0; j < box.lo.size(); ++j)
    if (!(box.hi[j] > box.lo[j])) throw ConfigError("monte_carlo: degenerate bounding box");
  if (samples < 10000) throw ConfigError("monte_carlo: at least 1e4 samples required");
  const int d = static_cast<int>(box.lo.size());
  CounterRng rng(seed);
  std::vector<real> accepted;
  std::vector<real> x(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = rng.uniform(box.lo[j], box.hi[j]);
    if (indicator(x)) accepted.insert(accepted.end(), x.begin(), x.end());
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(accepted.size()) / d;
  MatrixXr inside(rows, d);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (int j = 0; j < d; ++j) inside(r, j) = accepted[static_cast<std::size_t>(r * d + j)];
  return Domain(std::make_shared<const Node>(Node{
      d, half_width, MonteCarloLeaf{std::move(indicator), std::move(box), samples, seed, std::move(inside)}}));
}

int Domain::dim() const noexcept { return node_->dim; }
real Domain::half_width() const noexcept { return node_->half_width; }
bool Domain::is_monte_carlo() const noexcept {
  return std::holds_alternative<MonteCarloLeaf>(node_->kind);
}

real Domain::volume() const {
  const std::vector<real> zero(static_cast<std::size_t>(dim()), 0.0);
  return char_fn(std::span<const real>(zero)).real() * std::pow(4.0 * half_width(), dim());
}

Box Domain::bounding_box() const {
  const int d = dim();
  const real L = half_width();
  const auto sd = static_cast<std::size_t>(d);
  return std::visit(
      [&](const auto& n) -> Box {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CubeLeaf> || std::is_same_v<T, BallLeaf>) {
          return Box{std::vector<real>(sd, -L), std::vector<real>(sd, L)};
        } else if constexpr (std::is_same_v<T, TorusLeaf>) {
          return Box{std::vector<real>(sd, -2 * L), std::vector<real>(sd, 2 * L)};
        } else if constexpr (std::is_same_v<T, ScaledNode>) {
          Box b = n.inner.bounding_box();
          for (std::size_t j = 0; j < sd; ++j) {
            const real lo = n.a * b.lo[j];
            const real hi = n.a * b.hi[j];
            b.lo[j] = std::min(lo, hi);
            b.hi[j] = std::max(lo, hi);
          }
          return b;
        } else if constexpr (std::is_same_v<T, TranslatedNode>) {
          Box b = n.inner.bounding_box();
          for (std::size_t j = 0; j < sd; ++j) {
            b.lo[j] += n.shift[j];
            b.hi[j] += n.shift[j];
          }
          return b;
        } else if constexpr (std::is_same_v<T, UnionNode>) {
          Box b = n.parts.front().bounding_box();
          for (const auto& p : n.parts) {
            const Box q = p.bounding_box();
            for (std::size_t j = 0; j < sd; ++j) {
              b.lo[j] = std::min(b.lo[j], q.lo[j]);
              b.hi[j] = std::max(b.hi[j], q.hi[j]);
            }
          }
          return b;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          Box a = n.left.bounding_box();
          const Box c = n.right.bounding_box();
          a.lo.insert(a.lo.end(), c.lo.begin(), c.lo.end());
          a.hi.insert(a.hi.end(), c.hi.begin(), c.hi.end());
          return a;
        } else {
          return n.box;
        }
      },
      node_->kind);
}

bool Domain::contains(std::span<const real> x) const {
  if (x.size() != static_cast<std::size_t>(dim())) throw DimensionError("contains: point dimension");
  const real L = half_width();
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CubeLeaf>) {
          return std::all_of(x.begin(), x.end(), [L](real v) { return std::abs(v) <= L; });
        } else if constexpr (std::is_same_v<T, BallLeaf>) {
          return x[0] * x[0] + x[1] * x[1] <= L * L;
        } else if constexpr (std::is_same_v<T, TorusLeaf>) {
          return std::all_of(x.begin(), x.end(), [L](real v) { return std::abs(v) <= 2 * L; });
        } else if constexpr (std::is_same_v<T, ScaledNode>) {
          std::vector<real> y(x.begin(), x.end());
          for (real& v : y) v /= n.a;
          return n.inner.contains(y);
        } else if constexpr (std::is_same_v<T, TranslatedNode>) {
          std::vector<real> y(x.begin(), x.end());
          for (std::size_t j = 0; j < y.size(); ++j) y[j] -= n.shift[j];
          return n.inner.contains(y);
        } else if constexpr (std::is_same_v<T, UnionNode>) {
          return std::any_of(n.parts.begin(), n.parts.end(),
                             [&](const Domain& p) { return p.contains(x); });
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          const auto d1 = static_cast<std::size_t>(n.left.dim());
          return n.left.contains(x.first(d1)) && n.right.contains(x.subspan(d1));
        } else {
          return n.indicator(x);
        }
      },
      node_->kind);
}

std::string Domain::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CubeLeaf>) {
          os << "cube(d=" << dim() << ", L=" << half_width() << ")";
        } else if constexpr (std::is_same_v<T, BallLeaf>) {
          os << "ball2d(L=" << half_width() << ")";
        } else if constexpr (std::is_same_v<T, TorusLeaf>) {
          os << "torus(d=" << dim() << ", L=" << half_width() << ")";
        } else if constexpr (std::is_same_v<T, ScaledNode>) {
          os << "scaled(" << n.inner.describe() << ", a=" << n.a << ")";
        } else if constexpr (std::is_same_v<T, TranslatedNode>) {
          os << "translated(" << n.inner.describe() << ", z=[";
          for (std::size_t j = 0; j < n.shift.size(); ++j) os << (j ? "," : "") << n.shift[j];
          os << "])";
        } else if constexpr (std::is_same_v<T, UnionNode>) {
          os << "union(";
          for (std::size_t j = 0; j < n.parts.size(); ++j) os << (j ? ", " : "") << n.parts[j].describe();
          os << ")";
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          os << "product(" << n.left.describe() << ", " << n.right.describe() << ")";
        } else {
          os << "monte_carlo(d=" << dim() << ", samples=" << n.samples << ", seed=" << n.seed << ")";
        }
      },
      node_->kind);
  return os.str();
}

cplx Domain::char_fn(std::span<const real> k) const {
  if (k.size() != static_cast<std::size_t>(dim()))
    throw DimensionError("char_fn: frequency has dimension " + std::to_string(k.size()) +
                         ", domain has dimension " + std::to_string(dim()));
  const real L = half_width();
  return std::visit(
      [&](const auto& n) -> cplx {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CubeLeaf>) {
          return cube_char_fn(k);
        } else if constexpr (std::is_same_v<T, BallLeaf>) {
          return ball2d_char_fn(k);
        } else if constexpr (std::is_same_v<T, TorusLeaf>) {
          real v = 1.0;
          for (real kj : k) v *= sinc_full(kj);
          return v;
        } else if constexpr (std::is_same_v<T, ScaledNode>) {
          std::vector<real> ak(k.begin(), k.end());
          for (real& v : ak) v *= n.a;
          return std::pow(std::abs(n.a), dim()) * n.inner.char_fn(std::span<const real>(ak));
        } else if constexpr (std::is_same_v<T, TranslatedNode>) {
          real phase = 0.0;
          for (std::size_t j = 0; j < k.size(); ++j) phase += k[j] * n.shift[j];
          return n.inner.char_fn(k) * std::polar(1.0, pi * phase / (2.0 * L));
        } else if constexpr (std::is_same_v<T, UnionNode>) {
          cplx sum = 0.0;
          for (const auto& p : n.parts) sum += p.char_fn(k);
          return sum;
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          const auto d1 = static_cast<std::size_t>(n.left.dim());
          return n.left.char_fn(k.first(d1)) * n.right.char_fn(k.subspan(d1));
        } else {
          const real w = pi / (2.0 * L);
          cplx sum = 0.0;
          for (Eigen::Index r = 0; r < n.inside.rows(); ++r) {
            real phase = 0.0;
            for (Eigen::Index j = 0; j < n.inside.cols(); ++j) phase += k[static_cast<std::size_t>(j)] * n.inside(r, j);
            sum += std::polar(1.0, w * phase);
          }
          return sum * (n.box.volume() / static_cast<real>(n.samples) / std::pow(4.0 * L, dim()));
        }
      },
      node_->kind);
}

cplx Domain::char_fn(std::span<const int> k) const {
  std::vector<real> kr(k.begin(), k.end());
  return char_fn(std::span<const real>(kr));
}

cplx char_fn(const Domain& dom, std::span<const int> k) { return dom.char_fn(k); }

cplx char_fn_monte_carlo(const Domain& dom, std::span<const int> k) {
  if (!dom.is_monte_carlo()) throw ConfigError("char_fn_monte_carlo: domain is not a Monte-Carlo leaf");
  return dom.char_fn(k);
}

}  // namespace pikl
