#include "pikl/estimator.hpp"
#include "pikl/real_basis.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "pikl/parallel.hpp"

namespace pikl {

void Dataset::validate() const {
  if (X.rows() != Y.size())
    throw DimensionError("Dataset: X has " + std::to_string(X.rows()) + " rows but Y has " +
                         std::to_string(Y.size()) + " entries");
  if (!X.allFinite() || !Y.allFinite()) throw ConfigError("Dataset: non-finite entry");
}

Dataset Dataset::slice(std::size_t begin, std::size_t end) const {
  const auto b = static_cast<Eigen::Index>(begin);
  const auto n = static_cast<Eigen::Index>(end - begin);
  return Dataset{X.middleRows(b, n), Y.segment(b, n)};
}

Dataset concatenate(const Dataset& a, const Dataset& b) {
  if (a.size() == 0) return b;
  if (b.size() == 0) return a;
  if (a.dim() != b.dim()) throw DimensionError("concatenate: dimension mismatch");
  Dataset out{MatrixXr(a.X.rows() + b.X.rows(), a.X.cols()), VectorXr(a.Y.size() + b.Y.size())};
  out.X << a.X, b.X;
  out.Y << a.Y, b.Y;
  return out;
}

SufficientStats::SufficientStats(const ModeSet& modes)
    : modes_(modes),
      moments_(VectorXc::Zero(static_cast<Eigen::Index>(
          ModeSet(2 * modes.m(), modes.dim(), modes.half_width(), static_cast<std::size_t>(-1)).size()))),
      b_(VectorXc::Zero(static_cast<Eigen::Index>(modes.size()))) {}

void SufficientStats::accumulate(const Dataset& batch) {
  if (batch.size() == 0) return;
  batch.validate();
  if (batch.dim() != modes_.dim())
    throw DimensionError("accumulate: points have dimension " + std::to_string(batch.dim()) +
                         ", expected " + std::to_string(modes_.dim()));
  const int d = modes_.dim();
  const int m = modes_.m();
  const ModeSet wide(2 * m, d, modes_.half_width(), static_cast<std::size_t>(-1));
  const std::size_t ws = wide.side();
  const std::size_t ns = modes_.side();
  const real norm = std::pow(4.0 * modes_.half_width(), -0.5 * d);

  std::vector<cplx> phases(ws * static_cast<std::size_t>(d));
  std::vector<real> x(static_cast<std::size_t>(d));
  // Outer products over all axes but the last, for the wide and narrow grids.
  std::vector<cplx> head_w(wide.size() / ws);
  std::vector<cplx> head_n(modes_.size() / ns);
  cplx* G = moments_.data();
  cplx* B = b_.data();

  for (Eigen::Index r = 0; r < batch.X.rows(); ++r) {
    for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = batch.X(r, j);
    axis_phases(wide, x, +1.0, phases);

    head_w[0] = 1.0;
    std::size_t len = 1;
    for (int j = 0; j + 1 < d; ++j) {
      const cplx* ph = phases.data() + static_cast<std::size_t>(j) * ws;
      for (std::size_t o = len; o-- > 0;) {
        const cplx v = head_w[o];
        for (std::size_t k = 0; k < ws; ++k) head_w[o * ws + k] = v * ph[k];
      }
      len *= ws;
    }
    const cplx* last = phases.data() + static_cast<std::size_t>(d - 1) * ws;
    for (std::size_t o = 0; o < len; ++o) {
      const cplx v = head_w[o];
      cplx* g = G + o * ws;
      for (std::size_t k = 0; k < ws; ++k) g[k] += v * last[k];
    }

    // Narrow grid: the central {-m..m} slice of each axis row.
    const real y = norm * batch.Y(r);
    head_n[0] = y;
    len = 1;
    for (int j = 0; j + 1 < d; ++j) {
      const cplx* ph = phases.data() + static_cast<std::size_t>(j) * ws + static_cast<std::size_t>(m);
      for (std::size_t o = len; o-- > 0;) {
        const cplx v = head_n[o];
        for (std::size_t k = 0; k < ns; ++k) head_n[o * ns + k] = v * ph[k];
      }
      len *= ns;
    }
    const cplx* lastn = last + m;
    for (std::size_t o = 0; o < len; ++o) {
      const cplx v = head_n[o];
      cplx* bb = B + o * ns;
      for (std::size_t k = 0; k < ns; ++k) bb[k] += v * lastn[k];
    }
  }
  n_ += batch.size();
}

void SufficientStats::accumulate_parallel(const Dataset& batch, unsigned threads) {
  if (threads == 0) threads = default_threads();
  if (threads <= 1 || batch.size() < 2 * static_cast<std::size_t>(threads)) {
    accumulate(batch);
    return;
  }
  std::vector<SufficientStats> shards(threads, SufficientStats(modes_));
  const std::size_t n = batch.size();
  const std::size_t chunk = (n + threads - 1) / threads;
  parallel_for(threads, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t t = b; t < e; ++t) {
      const std::size_t lo = std::min(n, t * chunk);
      const std::size_t hi = std::min(n, lo + chunk);
      shards[t].accumulate(batch.slice(lo, hi));
    }
  });
  for (const auto& s : shards) merge(s);
}

void SufficientStats::merge(const SufficientStats& other) {
  if (!(other.modes_ == modes_)) throw DimensionError("merge: mode sets differ");
  moments_ += other.moments_;
  b_ += other.b_;
  n_ += other.n_;
}

MatrixXc SufficientStats::gram() const {
  const int d = modes_.dim();
  const auto wide = static_cast<std::ptrdiff_t>(4 * modes_.m() + 1);
  std::vector<std::ptrdiff_t> off(modes_.size());
  std::vector<int> k(static_cast<std::size_t>(d));
  std::ptrdiff_t centre = 0;
  for (int j = 0; j < d; ++j) centre = centre * wide + 2 * modes_.m();
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    modes_.mode(i, k);
    std::ptrdiff_t o = 0;
    for (int kj : k) o = o * wide + kj;
    off[i] = o;
  }
  const real scale = std::pow(4.0 * modes_.half_width(), -static_cast<real>(d));
  const auto n = static_cast<Eigen::Index>(modes_.size());
  MatrixXc a(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r)
      a(r, c) = scale * moments_(centre + off[static_cast<std::size_t>(r)] - off[static_cast<std::size_t>(c)]);
  return a;
}

SufficientStats accumulate(SufficientStats stats, const Dataset& batch) {
  stats.accumulate(batch);
  return stats;
}

namespace {

real relative_residual(const MatrixXc& h, const VectorXc& z, const VectorXc& b) {
  const real nb = b.norm();
  return (h * z - b).norm() / (nb > 0.0 ? nb : 1.0);
}

constexpr real kResidualTolerance = 1e-8;


// Solves h w = rhs after symmetric diagonal equilibration D h D with
// D = diag(h)^{-1/2}; the residual is checked on the original complex system.
template <class Matrix, class Vector, class ToComplex>
VectorXc solve_system(const Matrix& h_raw, const Vector& rhs_raw, const MatrixXc& hc,
                      const VectorXc& b, ToComplex to_complex, FitInfo& out) {
  const VectorXr dscale = h_raw.diagonal().real().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  const Matrix h = dscale.asDiagonal() * h_raw * dscale.asDiagonal();
  const Vector rhs = dscale.asDiagonal() * rhs_raw;
  auto unscale = [&](const Vector& v) { return to_complex(Vector(dscale.asDiagonal() * v)); };

  Eigen::LLT<Matrix> llt(h);
  if (llt.info() == Eigen::Success) {
    VectorXc z = unscale(Vector(llt.solve(rhs)));
    out.relative_residual = relative_residual(hc, z, b);
    if (out.relative_residual <= kResidualTolerance) return z;
  }
  out.used_lu = true;
  Eigen::PartialPivLU<Matrix> lu(h);
  Vector w = lu.solve(rhs);
  VectorXc z = unscale(w);
  for (int step = 0; step < 3; ++step) {
    out.relative_residual = relative_residual(hc, z, b);
    if (out.relative_residual <= kResidualTolerance) return z;
    w += lu.solve(Vector(rhs - h * w));
    z = unscale(w);
  }
  out.relative_residual = relative_residual(hc, z, b);
  if (out.relative_residual <= kResidualTolerance) return z;

  const real pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  std::ostringstream msg;
  msg << "fit: (A + nM) z = b not solved to 1e-8 (relative residual " << out.relative_residual
      << ", smallest LU pivot " << pivot << "); lambda is too small for this conditioning";
  throw FactorizationError(msg.str(), pivot);
}

}  // namespace

PiklModel fit(const SufficientStats& stats, const HermitianMatrix& m, FitInfo* info) {
  if (!(m.modes == stats.modes())) throw DimensionError("fit: mode sets of statistics and M differ");
  if (stats.count() == 0) throw ConfigError("fit: no observations accumulated");
  const VectorXc& b = stats.rhs();
  FitInfo local;
  FitInfo& out = info ? *info : local;
  out = FitInfo{};
  if (b.isZero(0.0)) return PiklModel{stats.modes(), VectorXc::Zero(b.size())};

  MatrixXc h = stats.gram();
  h += static_cast<real>(stats.count()) * m.entries;

  if (conjugate_symmetric(b) && conjugate_invariant(h)) {
    out.real_basis = true;
    const MatrixXr hr = to_real_basis(h);
    const VectorXr br = to_real_basis(b);
    return PiklModel{stats.modes(), solve_system(hr, br, h, b, from_real_basis, out)};
  }
  auto identity = [](const VectorXc& z) { return z; };
  return PiklModel{stats.modes(), solve_system(h, b, h, b, identity, out)};
}

namespace {

real checked_real(cplx v) {
  if (std::abs(v.imag()) > 1e-8 * (1.0 + std::abs(v.real())))
  {
    std::ostringstream msg;
    msg << "predict: imaginary residue " << v.imag() << " exceeds 1e-8 (1 + |" << v.real()
        << "|); coefficients are not conjugate-symmetric";
    throw NumericError(msg.str());
  }
  return v.real();
}

}  // namespace

real predict(const PiklModel& model, std::span<const real> x) {
  return checked_real(synthesize(model.modes, model.z, x));
}

VectorXr predict(const PiklModel& model, const MatrixXr& points) {
  const std::vector<cplx> v = synthesize(model.modes, model.z, points);
  VectorXr out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = checked_real(v[i]);
  return out;
}

KernelEvaluator::KernelEvaluator(const HermitianMatrix& m)
    : modes_(m.modes), llt_(std::make_shared<const Eigen::LLT<MatrixXc>>(m.entries)) {
  if (llt_->info() != Eigen::Success)
    throw FactorizationError("kernel: Cholesky factorization of M failed",
                             m.entries.diagonal().real().minCoeff());
}

MatrixXc KernelEvaluator::whitened(const MatrixXr& points) const {
  if (points.cols() != modes_.dim()) throw DimensionError("kernel: point dimension mismatch");
  MatrixXc phi(static_cast<Eigen::Index>(modes_.size()), points.rows());
  std::vector<real> x(static_cast<std::size_t>(modes_.dim()));
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    for (int j = 0; j < modes_.dim(); ++j) x[static_cast<std::size_t>(j)] = points(r, j);
    phi.col(r) = feature_map(modes_, x);
  }
  llt_->matrixL().solveInPlace(phi);
  return phi;
}

cplx KernelEvaluator::operator()(std::span<const real> x, std::span<const real> y) const {
  MatrixXr px(1, static_cast<Eigen::Index>(x.size()));
  MatrixXr py(1, static_cast<Eigen::Index>(y.size()));
  for (std::size_t j = 0; j < x.size(); ++j) px(0, static_cast<Eigen::Index>(j)) = x[j];
  for (std::size_t j = 0; j < y.size(); ++j) py(0, static_cast<Eigen::Index>(j)) = y[j];
  return cross(px, py)(0, 0);
}

MatrixXc KernelEvaluator::gram(const MatrixXr& X) const {
  const MatrixXc w = whitened(X);
  return w.adjoint() * w;
}

MatrixXc KernelEvaluator::cross(const MatrixXr& x, const MatrixXr& y) const {
  return whitened(x).adjoint() * whitened(y);
}

cplx kernel_eval(const HermitianMatrix& m, std::span<const real> x, std::span<const real> y) {
  return KernelEvaluator(m)(x, y);
}

VectorXr predict_dual(const HermitianMatrix& m, const Dataset& data, const MatrixXr& queries) {
  data.validate();
  const KernelEvaluator k(m);
  MatrixXc kk = k.gram(data.X);
  kk.diagonal().array() += static_cast<real>(data.size());
  const VectorXc alpha = kk.partialPivLu().solve(data.Y.cast<cplx>());
  const VectorXc pred = k.cross(queries, data.X) * alpha;
  return pred.real();
}

void write_csv(const PiklModel& model, std::ostream& os) {
  const auto old = os.precision(17);
  os << "# pikl model m=" << model.modes.m() << " d=" << model.modes.dim()
     << " L=" << model.modes.half_width() << " order=lexicographic\n";
  std::vector<int> k(static_cast<std::size_t>(model.modes.dim()));
  for (std::size_t i = 0; i < model.modes.size(); ++i) {
    model.modes.mode(i, k);
    for (int kj : k) os << kj << ',';
    const cplx v = model.z(static_cast<Eigen::Index>(i));
    os << v.real() << ',' << v.imag() << '\n';
  }
  os.precision(old);
}

PiklModel read_csv_model(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# pikl model", 0) != 0)
    throw ConfigError("not a pikl model file");
  int m = -1;
  int d = -1;
  real L = 0.0;
  {
    std::istringstream hs(line.substr(12));
    std::string tok;
    while (hs >> tok) {
      if (tok.rfind("m=", 0) == 0) m = std::stoi(tok.substr(2));
      else if (tok.rfind("d=", 0) == 0) d = std::stoi(tok.substr(2));
      else if (tok.rfind("L=", 0) == 0) L = std::stod(tok.substr(2));
    }
  }
  ModeSet modes(m, d, L, static_cast<std::size_t>(-1));
  VectorXc z(static_cast<Eigen::Index>(modes.size()));
  std::vector<int> k(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (!std::getline(is, line)) throw ConfigError("model file truncated");
    std::istringstream ls(line);
    std::string field;
    for (int j = 0; j < d; ++j) {
      std::getline(ls, field, ',');
      k[static_cast<std::size_t>(j)] = std::stoi(field);
    }
    if (modes.index_of(k) != i) throw ConfigError("model file modes are not in lexicographic order");
    std::getline(ls, field, ',');
    const real re = std::stod(field);
    std::getline(ls, field, ',');
    const real im = std::stod(field);
    z(static_cast<Eigen::Index>(i)) = cplx(re, im);
  }
  return PiklModel{modes, std::move(z)};
}

namespace {

constexpr char kModelMagic[8] = {'P', 'I', 'K', 'L', 'M', 'D', '0', '1'};

}  // namespace

void write_binary(const PiklModel& model, std::ostream& os) {
  os.write(kModelMagic, sizeof kModelMagic);
  const std::int32_t m = model.modes.m();
  const std::int32_t d = model.modes.dim();
  const double L = model.modes.half_width();
  const std::uint64_t n = model.modes.size();
  os.write(reinterpret_cast<const char*>(&m), sizeof m);
  os.write(reinterpret_cast<const char*>(&d), sizeof d);
  os.write(reinterpret_cast<const char*>(&L), sizeof L);
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  os.write(reinterpret_cast<const char*>(model.z.data()),
           static_cast<std::streamsize>(sizeof(cplx) * model.modes.size()));
}

PiklModel read_binary_model(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kModelMagic, sizeof magic) != 0)
    throw ConfigError("not a pikl binary model");
  std::int32_t m = 0;
  std::int32_t d = 0;
  double L = 0.0;
  std::uint64_t n = 0;
  is.read(reinterpret_cast<char*>(&m), sizeof m);
  is.read(reinterpret_cast<char*>(&d), sizeof d);
  is.read(reinterpret_cast<char*>(&L), sizeof L);
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!is) throw ConfigError("binary model header truncated");
  ModeSet modes(m, d, L, static_cast<std::size_t>(-1));
  if (modes.size() != n) throw ConfigError("binary model size does not match its header");
  VectorXc z(static_cast<Eigen::Index>(n));
  if (!is.read(reinterpret_cast<char*>(z.data()), static_cast<std::streamsize>(sizeof(cplx) * n)))
    throw ConfigError("binary model truncated");
  return PiklModel{modes, std::move(z)};
}

}  // namespace pikl
