#include <cmath>

#include "pikl/domain.hpp"

namespace pikl {

namespace {

// sum_k (-1)^k (x/2)^{2k+1} / (k! (k+1)!)
real j1_series(real x) {
  const real h = 0.5 * x;
  const real h2 = h * h;
  real term = h;
  real sum = h;
  for (int k = 1; k < 60; ++k) {
    term *= -h2 / (static_cast<real>(k) * static_cast<real>(k + 1));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Miller's backward recurrence normalized by J0 + 2 sum J_{2k} = 1.
real j1_miller(real x) {
  int n = static_cast<int>(x + 20.0 + 8.0 * std::sqrt(x));
  if (n % 2) ++n;
  real jp1 = 0.0;
  real j = 1e-30;
  real norm = 0.0;
  real j1 = 0.0;
  for (int k = n; k > 0; --k) {
    const real jm1 = 2.0 * k / x * j - jp1;
    jp1 = j;
    j = jm1;  // now J_{k-1}
    if (k - 1 == 1) j1 = j;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      j1 *= 1e-250;
    }
  }
  norm += j;  // J_0
  return j1 / norm;
}

// Hankel asymptotic expansion with nu = 1, summed until terms stop shrinking.
real j1_asymptotic(real x) {
  constexpr real mu = 4.0;
  const real w = 8.0 * x;
  real p = 1.0;
  real q = 0.0;
  real term = 1.0;
  real prev = 1e300;
  for (int k = 1; k < 200; ++k) {
    const real odd = static_cast<real>(2 * k - 1);
    term *= (mu - odd * odd) / (static_cast<real>(k) * w);
    if (std::abs(term) >= prev) break;
    prev = std::abs(term);
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (prev < 1e-18) break;
  }
  // cos(x - 3pi/4) and sin(x - 3pi/4) without reducing x - 3pi/4 directly.
  const real c = std::cos(x);
  const real s = std::sin(x);
  const real inv_sqrt2 = 0.70710678118654752440;
  const real cos_chi = (s - c) * inv_sqrt2;
  const real sin_chi = -(s + c) * inv_sqrt2;
  return std::sqrt(2.0 / (pi * x)) * (p * cos_chi - q * sin_chi);
}

}  // namespace

real bessel_j1(real x) {
  if (x < 0.0) return -bessel_j1(-x);
  if (x == 0.0) return 0.0;
  if (x <= 8.0) return j1_series(x);
  if (x <= 30.0) return j1_miller(x);
  return j1_asymptotic(x);
}

}  // namespace pikl
