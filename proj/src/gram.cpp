#include "pikl/gram.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "pikl/parallel.hpp"

namespace pikl {

real sobolev_weight(std::span<const int> k, int s, real half_width, SobolevScaling scaling) {
  real norm2 = 0.0;
  for (int kj : k) norm2 += static_cast<real>(kj) * kj;
  const real denom = scaling == SobolevScaling::PerAxis
                         ? 4.0 * half_width * half_width
                         : std::pow(2.0 * half_width, static_cast<real>(k.size()));
  return std::pow(norm2 / denom, s);
}

void GramSpec::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("GramSpec: lambda must be > 0");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("GramSpec: mu must be >= 0");
  if (s < 1) throw ConfigError("GramSpec: smoothness s must be a positive integer");
  if (op.order() > s)
    throw ConfigError("GramSpec: operator order " + std::to_string(op.order()) +
                      " exceeds smoothness s = " + std::to_string(s));
  if (op.dim() != modes.dim() || dom.dim() != modes.dim())
    throw DimensionError("GramSpec: operator, domain and mode set dimensions differ");
  if (std::abs(dom.half_width() - modes.half_width()) > 1e-12 * modes.half_width())
    throw ConfigError("GramSpec: domain and mode set use different L");
}

real HermitianMatrix::asymmetry() const {
  const real scale = entries.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff() / scale;
}

namespace {

// Linear offset of k in the (4m+1)^d difference grid, without the centre.
std::vector<std::ptrdiff_t> difference_offsets(const ModeSet& modes) {
  const auto wide = static_cast<std::ptrdiff_t>(4 * modes.m() + 1);
  std::vector<std::ptrdiff_t> off(modes.size());
  std::vector<int> k(static_cast<std::size_t>(modes.dim()));
  for (std::size_t i = 0; i < modes.size(); ++i) {
    modes.mode(i, k);
    std::ptrdiff_t o = 0;
    for (int kj : k) o = o * wide + kj;
    off[i] = o;
  }
  return off;
}

std::ptrdiff_t difference_centre(const ModeSet& modes) {
  const auto wide = static_cast<std::ptrdiff_t>(4 * modes.m() + 1);
  std::ptrdiff_t c = 0;
  for (int j = 0; j < modes.dim(); ++j) c = c * wide + 2 * modes.m();
  return c;
}

void symmetrize(MatrixXc& a) {
  MatrixXc adj = a.adjoint();
  a = 0.5 * (a + adj);
}

// out_ab = conj(p_a) p_b F(a - b)
HermitianMatrix assemble_weighted(const GramSpec& spec, const VectorXc& p, unsigned threads) {
  const ModeSet& modes = spec.modes;
  const std::vector<cplx> table = char_fn_table(spec.dom, modes, threads);
  const auto off = difference_offsets(modes);
  const std::ptrdiff_t centre = difference_centre(modes);
  const auto n = static_cast<Eigen::Index>(modes.size());
  MatrixXc out(n, n);
  // Column-major storage: fill by columns.
  parallel_for(modes.size(), threads, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      const auto bi = static_cast<Eigen::Index>(b);
      for (Eigen::Index a = 0; a < n; ++a) {
        const auto idx = static_cast<std::size_t>(centre + off[static_cast<std::size_t>(a)] - off[b]);
        out(a, bi) = std::conj(p(a)) * p(bi) * table[idx];
      }
    }
  });
  symmetrize(out);
  return HermitianMatrix{modes, std::move(out)};
}

}  // namespace

std::vector<cplx> char_fn_table(const Domain& dom, const ModeSet& modes, unsigned threads) {
  if (dom.dim() != modes.dim()) throw DimensionError("char_fn_table: dimension mismatch");
  const ModeSet wide(2 * modes.m(), modes.dim(), modes.half_width(), static_cast<std::size_t>(-1));
  std::vector<cplx> table(wide.size());
  parallel_for(wide.size(), threads, [&](std::size_t b, std::size_t e) {
    std::vector<int> k(static_cast<std::size_t>(modes.dim()));
    for (std::size_t i = b; i < e; ++i) {
      wide.mode(i, k);
      table[i] = dom.char_fn(std::span<const int>(k));
    }
  });
  return table;
}

VectorXr sobolev_diagonal(const ModeSet& modes, int s, SobolevScaling scaling) {
  VectorXr diag(static_cast<Eigen::Index>(modes.size()));
  std::vector<int> k(static_cast<std::size_t>(modes.dim()));
  for (std::size_t i = 0; i < modes.size(); ++i) {
    modes.mode(i, k);
    diag(static_cast<Eigen::Index>(i)) = 1.0 + sobolev_weight(k, s, modes.half_width(), scaling);
  }
  return diag;
}

HermitianMatrix assemble_penalty(const GramSpec& spec, unsigned threads) {
  spec.validate();
  VectorXc p(static_cast<Eigen::Index>(spec.modes.size()));
  std::vector<int> k(static_cast<std::size_t>(spec.modes.dim()));
  for (std::size_t i = 0; i < spec.modes.size(); ++i) {
    spec.modes.mode(i, k);
    p(static_cast<Eigen::Index>(i)) = symbol(spec.op, k, spec.modes.half_width());
  }
  return assemble_weighted(spec, p, threads);
}

HermitianMatrix combine_m(const VectorXr& diagonal, const HermitianMatrix& penalty, real lambda,
                          real mu) {
  if (diagonal.size() != penalty.size()) throw DimensionError("combine_m: size mismatch");
  HermitianMatrix m{penalty.modes, mu * penalty.entries};
  m.entries.diagonal() += (lambda * diagonal).cast<cplx>();
  return m;
}

HermitianMatrix assemble_m(const GramSpec& spec, unsigned threads) {
  spec.validate();
  const VectorXr diag = sobolev_diagonal(spec.modes, spec.s, spec.scaling);
  if (spec.mu == 0.0) {
    const auto n = static_cast<Eigen::Index>(spec.modes.size());
    HermitianMatrix m{spec.modes, MatrixXc::Zero(n, n)};
    m.entries.diagonal() = (spec.lambda * diag).cast<cplx>();
    return m;
  }
  return combine_m(diag, assemble_penalty(spec, threads), spec.lambda, spec.mu);
}

HermitianMatrix assemble_c(const GramSpec& spec, unsigned threads) {
  spec.validate();
  const VectorXc ones = VectorXc::Ones(static_cast<Eigen::Index>(spec.modes.size()));
  return assemble_weighted(spec, ones, threads);
}

real penalty_form(const HermitianMatrix& m, const VectorXc& z) {
  if (z.size() != m.size())
    throw DimensionError("penalty_form: coefficient vector has length " + std::to_string(z.size()) +
                         ", expected " + std::to_string(m.size()));
  const cplx v = z.dot(m.entries * z);  // Eigen's dot conjugates its first argument
  if (std::abs(v.imag()) > 1e-10 * std::max(std::abs(v.real()), std::abs(v.imag())) &&
      std::abs(v.imag()) > 1e-300)
  {
    std::ostringstream msg;
    msg << "penalty_form: imaginary residue " << v.imag() << " for real part " << v.real();
    throw NumericError(msg.str());
  }
  return v.real();
}

real penalty_form(const GramSpec& spec, const VectorXc& z) { return penalty_form(assemble_m(spec), z); }

real sobolev_norm_sq(const ModeSet& modes, int s, SobolevScaling scaling, const VectorXc& z) {
  if (static_cast<std::size_t>(z.size()) != modes.size())
    throw DimensionError("sobolev_norm_sq: size mismatch");
  return (sobolev_diagonal(modes, s, scaling).array() * z.array().abs2()).sum();
}

void write_csv(const HermitianMatrix& a, std::ostream& os) {
  const auto old = os.precision(17);
  os << "# m=" << a.modes.m() << " d=" << a.modes.dim() << " L=" << a.modes.half_width()
     << " order=lexicographic\n";
  for (Eigen::Index r = 0; r < a.size(); ++r) {
    for (Eigen::Index c = 0; c < a.size(); ++c) {
      if (c) os << ',';
      os << a.entries(r, c).real() << ',' << a.entries(r, c).imag();
    }
    os << '\n';
  }
  os.precision(old);
}

namespace {

constexpr char kMatrixMagic[8] = {'P', 'I', 'K', 'L', 'H', 'M', '0', '1'};

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw ConfigError("truncated binary dump");
  return v;
}

}  // namespace

void write_binary(const HermitianMatrix& a, std::ostream& os) {
  os.write(kMatrixMagic, sizeof kMatrixMagic);
  put<std::int32_t>(os, a.modes.m());
  put<std::int32_t>(os, a.modes.dim());
  put<double>(os, a.modes.half_width());
  put<std::uint64_t>(os, static_cast<std::uint64_t>(a.size()));
  for (Eigen::Index r = 0; r < a.size(); ++r)
    for (Eigen::Index c = 0; c < a.size(); ++c) {
      put<double>(os, a.entries(r, c).real());
      put<double>(os, a.entries(r, c).imag());
    }
}

HermitianMatrix read_binary_matrix(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMatrixMagic, sizeof magic) != 0)
    throw ConfigError("not a pikl matrix dump");
  const auto m = get<std::int32_t>(is);
  const auto d = get<std::int32_t>(is);
  const auto L = get<double>(is);
  const auto n = get<std::uint64_t>(is);
  ModeSet modes(m, d, L, static_cast<std::size_t>(-1));
  if (modes.size() != n) throw ConfigError("matrix dump size does not match its mode header");
  const auto side = static_cast<Eigen::Index>(n);
  MatrixXc e(side, side);
  for (Eigen::Index r = 0; r < side; ++r)
    for (Eigen::Index c = 0; c < side; ++c) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      e(r, c) = cplx(re, im);
    }
  return HermitianMatrix{modes, std::move(e)};
}

}  // namespace pikl
