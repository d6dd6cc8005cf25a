#include "pikl/diffop.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace pikl {

LinearDiffOp::LinearDiffOp(int d, std::vector<DiffTerm> terms) : d_(d), terms_(std::move(terms)) {
  if (d < 1) throw ConfigError("LinearDiffOp: dimension must be positive");
  if (terms_.empty()) throw ConfigError("LinearDiffOp: at least one term required");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (t.alpha.size() != static_cast<std::size_t>(d))
      throw DimensionError("LinearDiffOp: exponent has dimension " + std::to_string(t.alpha.size()) +
                           ", expected " + std::to_string(d));
    if (std::any_of(t.alpha.begin(), t.alpha.end(), [](int a) { return a < 0; }))
      throw ConfigError("LinearDiffOp: negative exponent");
    if (!std::isfinite(t.coeff)) throw ConfigError("LinearDiffOp: coefficient is not finite");
    for (std::size_t j = 0; j < i; ++j)
      if (terms_[j].alpha == t.alpha) throw ConfigError("LinearDiffOp: duplicate exponent");
    order_ = std::max(order_, std::accumulate(t.alpha.begin(), t.alpha.end(), 0));
  }
}

std::string LinearDiffOp::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << " + ";
    os << terms_[i].coeff << "*d^(";
    for (std::size_t j = 0; j < terms_[i].alpha.size(); ++j) os << (j ? "," : "") << terms_[i].alpha[j];
    os << ")";
  }
  return os.str();
}

LinearDiffOp LinearDiffOp::identity(int d) {
  return LinearDiffOp(d, {{std::vector<int>(static_cast<std::size_t>(d), 0), 1.0}});
}

LinearDiffOp LinearDiffOp::ddx() { return LinearDiffOp(1, {{{1}, 1.0}}); }

LinearDiffOp LinearDiffOp::harmonic_oscillator() {
  return LinearDiffOp(1, {{{2}, 1.0}, {{1}, 1.0}, {{0}, 1.0}});
}

LinearDiffOp LinearDiffOp::heat() { return LinearDiffOp(2, {{{1, 0}, 1.0}, {{0, 2}, -1.0}}); }

LinearDiffOp LinearDiffOp::convection(real beta) {
  return LinearDiffOp(2, {{{1, 0}, 1.0}, {{0, 1}, beta}});
}

LinearDiffOp LinearDiffOp::wave(real c2) { return LinearDiffOp(2, {{{2, 0}, 1.0}, {{0, 2}, -c2}}); }

LinearDiffOp LinearDiffOp::laplace(int d) {
  std::vector<DiffTerm> terms;
  for (int j = 0; j < d; ++j) {
    std::vector<int> a(static_cast<std::size_t>(d), 0);
    a[static_cast<std::size_t>(j)] = 2;
    terms.push_back({a, 1.0});
  }
  return LinearDiffOp(d, std::move(terms));
}

LinearDiffOp linear_combination(real a, const LinearDiffOp& p, real b, const LinearDiffOp& q) {
  if (p.dim() != q.dim()) throw DimensionError("linear_combination: dimension mismatch");
  std::map<std::vector<int>, real> acc;
  for (const auto& t : p.terms()) acc[t.alpha] += a * t.coeff;
  for (const auto& t : q.terms()) acc[t.alpha] += b * t.coeff;
  std::vector<DiffTerm> terms;
  for (auto& [alpha, c] : acc) terms.push_back({alpha, c});
  return LinearDiffOp(p.dim(), std::move(terms));
}

namespace {

// (-i)^n
cplx minus_i_pow(int n) {
  switch (n % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

}  // namespace

cplx symbol(const LinearDiffOp& op, std::span<const int> k, real half_width) {
  if (k.size() != static_cast<std::size_t>(op.dim()))
    throw DimensionError("symbol: multi-index has dimension " + std::to_string(k.size()) +
                         ", operator has dimension " + std::to_string(op.dim()));
  const real w = pi / (2.0 * half_width);
  cplx p = 0.0;
  for (const auto& t : op.terms()) {
    int order = 0;
    real mono = 1.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      order += t.alpha[j];
      for (int e = 0; e < t.alpha[j]; ++e) mono *= k[j];
    }
    p += t.coeff * std::pow(w, order) * mono * minus_i_pow(order);
  }
  return p;
}

VectorXc apply_in_hm(const LinearDiffOp& op, const VectorXc& z, const ModeSet& modes) {
  if (op.dim() != modes.dim()) throw DimensionError("apply_in_hm: operator/mode dimension mismatch");
  if (static_cast<std::size_t>(z.size()) != modes.size())
    throw DimensionError("apply_in_hm: coefficient vector has length " + std::to_string(z.size()) +
                         ", expected " + std::to_string(modes.size()));
  VectorXc out(z.size());
  std::vector<int> k(static_cast<std::size_t>(modes.dim()));
  for (std::size_t i = 0; i < modes.size(); ++i) {
    modes.mode(i, k);
    const auto ii = static_cast<Eigen::Index>(i);
    out(ii) = symbol(op, k, modes.half_width()) * z(ii);
  }
  return out;
}

}  // namespace pikl
