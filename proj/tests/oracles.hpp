#pragma once

// Independent reference computations used by the tests. Nothing here calls
// the library's feature maps, symbols or characteristic functions.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "pikl/diffop.hpp"
#include "pikl/domain.hpp"
#include "pikl/modes.hpp"
#include "pikl/rng.hpp"

namespace oracle {

using pikl::cplx;
using pikl::real;

/// Random coefficients of a real-valued f: z_{-k} = conj(z_k).
inline pikl::VectorXc real_function_coeffs(const pikl::ModeSet& modes, pikl::CounterRng& rng, real decay = 0.0) {
  const auto n = static_cast<Eigen::Index>(modes.size());
  pikl::VectorXc z(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = modes.mode(static_cast<std::size_t>(i));
    real norm2 = 0.0;
    for (int v : k) norm2 += v * v;
    const real scale = 1.0 / (1.0 + decay * norm2);
    z(i) = scale * cplx(rng.normal(), rng.normal());
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = n - 1 - i;
    if (j < i) z(i) = std::conj(z(j));
  }
  z((n - 1) / 2) = z((n - 1) / 2).real();
  return z;
}

/// Arbitrary complex coefficients.
inline pikl::VectorXc complex_coeffs(std::size_t n, pikl::CounterRng& rng) {
  pikl::VectorXc z(static_cast<Eigen::Index>(n));
  for (auto& v : z) v = cplx(rng.normal(), rng.normal());
  return z;
}

/// f(x) = sum_k z_k (4L)^{-d/2} exp(-i pi <k,x> / (2L)), term by term.
/// `alpha` differentiates: d/dx_l exp(-i w k_l x_l) = -i w k_l exp(...).
inline cplx eval(const pikl::ModeSet& modes, const pikl::VectorXc& z, const std::vector<real>& x,
                 const std::vector<pikl::DiffTerm>& terms = {}) {
  const int d = modes.dim();
  const real L = modes.half_width();
  const real w = M_PI / (2.0 * L);
  const real norm = std::pow(4.0 * L, -0.5 * d);
  cplx total = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto k = modes.mode(i);
    real phase = 0.0;
    for (int l = 0; l < d; ++l) phase += w * k[static_cast<std::size_t>(l)] * x[static_cast<std::size_t>(l)];
    cplx factor = 1.0;
    if (!terms.empty()) {
      factor = 0.0;
      for (const auto& t : terms) {
        cplx m = t.coeff;
        for (int l = 0; l < d; ++l)
          for (int p = 0; p < t.alpha[static_cast<std::size_t>(l)]; ++p)
            m *= cplx(0.0, -w * k[static_cast<std::size_t>(l)]);
        factor += m;
      }
    }
    total += z(static_cast<Eigen::Index>(i)) * factor * norm * std::exp(cplx(0.0, -phase));
  }
  return total;
}

struct McEstimate {
  real mean;
  real stderr_;
};

/// Monte-Carlo integral of g over the domain: uniform samples in `box`,
/// indicator from `inside`.
inline std::vector<McEstimate> mc_integrals(const pikl::Box& box, const std::function<bool(const std::vector<real>&)>& inside,
                                            std::size_t samples, std::uint64_t seed,
                                            const std::vector<std::function<real(const std::vector<real>&)>>& gs) {
  const std::size_t d = box.lo.size();
  real vol = 1.0;
  for (std::size_t l = 0; l < d; ++l) vol *= box.hi[l] - box.lo[l];
  pikl::CounterRng rng(seed, 0x6d63);
  std::vector<real> sum(gs.size(), 0.0), sum2(gs.size(), 0.0);
  std::vector<real> x(d);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t l = 0; l < d; ++l) x[l] = rng.uniform(box.lo[l], box.hi[l]);
    if (!inside(x)) continue;
    for (std::size_t g = 0; g < gs.size(); ++g) {
      const real v = vol * gs[g](x);
      sum[g] += v;
      sum2[g] += v * v;
    }
  }
  std::vector<McEstimate> out;
  const real n = static_cast<real>(samples);
  for (std::size_t g = 0; g < gs.size(); ++g) {
    const real mean = sum[g] / n;
    const real var = std::max(0.0, sum2[g] / n - mean * mean);
    out.push_back({mean, std::sqrt(var / n)});
  }
  return out;
}

/// sum_k (1 + (|k|^2 / (2L)^2)^s) |z_k|^2.
inline real sobolev_norm_sq(const pikl::ModeSet& modes, int s, const pikl::VectorXc& z) {
  const real L = modes.half_width();
  real total = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto k = modes.mode(i);
    real k2 = 0.0;
    for (int v : k) k2 += v * v;
    total += (1.0 + std::pow(k2 / (4.0 * L * L), s)) * std::norm(z(static_cast<Eigen::Index>(i)));
  }
  return total;
}

/// J1 from its power series, truncated at `terms` terms.
inline real bessel_j1_series(real x, int terms = 50) {
  real sum = 0.0;
  for (int k = 0; k < terms; ++k) {
    sum += std::pow(-1.0, k) * std::pow(x / 2.0, 2 * k + 1) / (std::tgamma(k + 1.0) * std::tgamma(k + 2.0));
  }
  return sum;
}

}  // namespace oracle
