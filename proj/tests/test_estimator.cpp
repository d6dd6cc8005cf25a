#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "oracles.hpp"
#include "pikl/bench.hpp"
#include "pikl/estimator.hpp"

using namespace pikl;

namespace {

Dataset sample_data(std::size_t n, int d, real L, std::uint64_t seed) {
  CounterRng rng(seed);
  Dataset data{MatrixXr(static_cast<Eigen::Index>(n), d), VectorXr(static_cast<Eigen::Index>(n))};
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    for (int j = 0; j < d; ++j) data.X(i, j) = rng.uniform(-L, L);
    data.Y(i) = std::sin(data.X(i, 0)) + 0.1 * rng.normal();
  }
  return data;
}

GramSpec oscillator_spec(int m, real lambda, real mu) {
  return {ModeSet(m, 1, M_PI), 2, lambda, mu, LinearDiffOp::harmonic_oscillator(), Domain::cube(1, M_PI)};
}

// Empirical risk plus penalty, evaluated term by term.
real objective(const ModeSet& modes, const HermitianMatrix& m, const Dataset& data, const VectorXc& z) {
  real risk = 0.0;
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    std::vector<real> x(static_cast<std::size_t>(data.dim()));
    for (int j = 0; j < data.dim(); ++j) x[static_cast<std::size_t>(j)] = data.X(i, j);
    risk += std::norm(data.Y(i) - oracle::eval(modes, z, x));
  }
  return risk / static_cast<real>(data.size()) + z.dot(m.entries * z).real();
}

}  // namespace

TEST_SUITE("estimator") {
  TEST_CASE("sufficient statistics match direct sums over the points") {
    const ModeSet modes(3, 2, 0.9);
    const auto data = sample_data(40, 2, 0.9, 1);
    SufficientStats stats(modes);
    stats.accumulate(data);
    const auto n = static_cast<Eigen::Index>(modes.size());
    MatrixXc a = MatrixXc::Zero(n, n);
    VectorXc b = VectorXc::Zero(n);
    const real w = M_PI / 1.8;
    for (Eigen::Index r = 0; r < data.X.rows(); ++r) {
      VectorXc phi(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = modes.mode(static_cast<std::size_t>(i));
        phi(i) = std::exp(cplx(0.0, w * (k[0] * data.X(r, 0) + k[1] * data.X(r, 1)))) / 3.6;
      }
      a += phi * phi.adjoint();
      b += phi * data.Y(r);
    }
    CHECK((stats.gram() - a).cwiseAbs().maxCoeff() < 1e-12 * a.cwiseAbs().maxCoeff());
    CHECK((stats.rhs() - b).cwiseAbs().maxCoeff() < 1e-12 * b.cwiseAbs().maxCoeff());
    CHECK(stats.count() == 40);
  }

  TEST_CASE("batches: empty, sequential and concatenated, parallel") {
    const ModeSet modes(4, 1, M_PI);
    const auto data = sample_data(101, 1, M_PI, 2);
    SufficientStats whole(modes);
    whole.accumulate(data);
    SufficientStats pieces(modes);
    pieces.accumulate(data.slice(0, 0));
    CHECK(pieces.count() == 0);
    CHECK(pieces.moments().isZero(0.0));
    pieces.accumulate(data.slice(0, 30));
    pieces.accumulate(data.slice(30, 101));
    CHECK(pieces.moments() == whole.moments());
    CHECK(pieces.rhs() == whole.rhs());
    const auto functional = accumulate(accumulate(SufficientStats(modes), data.slice(0, 50)), data.slice(50, 101));
    CHECK(functional.moments() == whole.moments());

    SufficientStats par(modes);
    par.accumulate_parallel(data, 4);
    CHECK(par.count() == whole.count());
    CHECK((par.moments() - whole.moments()).cwiseAbs().maxCoeff() < 1e-12 * 101);
    SufficientStats par_again(modes);
    par_again.accumulate_parallel(data, 4);
    CHECK(par_again.moments() == par.moments());

    SufficientStats other(ModeSet(3, 1, M_PI));
    CHECK_THROWS_AS(whole.merge(other), DimensionError);
    CHECK_THROWS_AS(whole.accumulate(sample_data(3, 2, 1.0, 1)), DimensionError);
  }

  TEST_CASE("m = 0 gives the scalar ridge solution") {
    const ModeSet modes(0, 1, 1.0);
    const auto data = sample_data(25, 1, 1.0, 3);
    SufficientStats stats(modes);
    stats.accumulate(data);
    const GramSpec spec{modes, 1, 0.2, 0.0, LinearDiffOp::ddx(), Domain::cube(1, 1.0)};
    const auto model = fit(stats, assemble_m(spec));
    // phi = 1/2: z = (sum Y / 2) / (n / 4 + n lambda).
    const real want = 0.5 * data.Y.sum() / (25.0 / 4.0 + 25.0 * 0.2);
    CHECK(std::abs(model.z(0) - cplx(want, 0.0)) < 1e-14);
  }

  TEST_CASE("zero observations give the zero model; no observations is an error") {
    const auto spec = oscillator_spec(5, 1e-3, 1.0);
    const auto m = assemble_m(spec);
    auto data = sample_data(20, 1, M_PI, 4);
    data.Y.setZero();
    SufficientStats stats(spec.modes);
    stats.accumulate(data);
    CHECK(fit(stats, m).z.isZero(0.0));
    CHECK_THROWS_AS(fit(SufficientStats(spec.modes), m), ConfigError);
    CHECK_THROWS_AS(fit(stats, assemble_m(oscillator_spec(4, 1e-3, 1.0))), DimensionError);
  }

  TEST_CASE("primal and dual predictions agree") {
    const auto spec = oscillator_spec(6, 1e-2, 0.5);
    const auto m = assemble_m(spec);
    const auto data = gen_oscillator(15, 0.5, 9);
    SufficientStats stats(spec.modes);
    stats.accumulate(data);
    const auto model = fit(stats, m);
    MatrixXr q(7, 1);
    for (Eigen::Index i = 0; i < 7; ++i) q(i, 0) = -3.0 + i;
    const VectorXr primal = predict(model, q);
    const VectorXr dual = predict_dual(m, data, q);
    CHECK((primal - dual).cwiseAbs().maxCoeff() < 1e-8 * (1.0 + primal.cwiseAbs().maxCoeff()));
  }

  TEST_CASE("the fit is a stationary point of the objective") {
    const auto spec = oscillator_spec(5, 0.05, 0.3);
    const auto m = assemble_m(spec);
    const auto data = sample_data(30, 1, M_PI, 5);
    SufficientStats stats(spec.modes);
    stats.accumulate(data);
    FitInfo info;
    const auto model = fit(stats, m, &info);
    CHECK(info.real_basis);
    CHECK(info.relative_residual <= 1e-8);
    const real j0 = objective(spec.modes, m, data, model.z);
    CounterRng rng(6);
    const real eps = 1e-4;
    for (int t = 0; t < 4; ++t) {
      const VectorXc v = oracle::real_function_coeffs(spec.modes, rng);
      const real jp = objective(spec.modes, m, data, model.z + eps * v);
      const real jm = objective(spec.modes, m, data, model.z - eps * v);
      // Directional derivative is zero; the second difference is positive.
      CHECK(std::abs(jp - jm) / (2.0 * eps) < 1e-7 * (1.0 + j0));
      CHECK(jp + jm - 2.0 * j0 > 0.0);
    }
  }

  TEST_CASE("tiny regularization interpolates a few points") {
    const ModeSet modes(10, 1, 1.0);
    const GramSpec spec{modes, 1, 1e-9, 0.0, LinearDiffOp::ddx(), Domain::cube(1, 1.0)};
    const auto data = sample_data(6, 1, 1.0, 7);
    SufficientStats stats(modes);
    stats.accumulate(data);
    const auto model = fit(stats, assemble_m(spec));
    CHECK((predict(model, data.X) - data.Y).cwiseAbs().maxCoeff() < 1e-4);
  }

  TEST_CASE("larger lambda shrinks the coefficients") {
    const auto data = sample_data(50, 1, M_PI, 8);
    real previous = INFINITY;
    for (real lambda : {1e-4, 1e-2, 1.0, 100.0}) {
      const auto spec = oscillator_spec(6, lambda, 0.0);
      SufficientStats stats(spec.modes);
      stats.accumulate(data);
      const real norm = fit(stats, assemble_m(spec)).z.norm();
      CHECK(norm < previous);
      previous = norm;
    }
  }

  TEST_CASE("predictions of real data are real; a complex model is rejected") {
    const auto spec = oscillator_spec(4, 1e-3, 1.0);
    SufficientStats stats(spec.modes);
    stats.accumulate(sample_data(30, 1, M_PI, 10));
    const auto model = fit(stats, assemble_m(spec));
    const std::vector<real> x{0.4};
    CHECK(std::isfinite(predict(model, x)));
    PiklModel bad = model;
    bad.z.setZero();
    bad.z(5) = cplx(0.0, 1.0);
    CHECK_THROWS_AS(predict(bad, x), NumericError);
  }

  TEST_CASE("kernel is Hermitian positive semidefinite and peaks on the diagonal") {
    const auto spec = GramSpec{ModeSet(4, 2, 1.0), 2, 1e-2, 1.0, LinearDiffOp::heat(), Domain::ball2d(1.0)};
    const KernelEvaluator k(assemble_m(spec));
    const auto pts = sample_data(12, 2, 1.0, 11).X;
    const MatrixXc g = k.gram(pts);
    CHECK((g - g.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * g.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(g, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > -1e-10 * es.eigenvalues().maxCoeff());
    for (Eigen::Index i = 0; i < g.rows(); ++i)
      for (Eigen::Index j = 0; j < g.cols(); ++j)
        CHECK(std::abs(g(i, j)) <= std::sqrt(g(i, i).real() * g(j, j).real()) * (1.0 + 1e-12));
    const std::vector<real> x{0.1, 0.2}, y{-0.3, 0.5};
    CHECK(std::abs(k(x, y) - kernel_eval(assemble_m(spec), x, y)) < 1e-12 * std::abs(k(x, x)));
    CHECK_THROWS_AS(k.gram(MatrixXr::Zero(2, 3)), DimensionError);
  }

  TEST_CASE("a singular system raises FactorizationError") {
    const auto spec = oscillator_spec(3, 1.0, 0.0);
    SufficientStats stats(spec.modes);
    stats.accumulate(sample_data(10, 1, M_PI, 12));
    HermitianMatrix m{spec.modes, -stats.gram() / 10.0};
    CHECK_THROWS_AS(fit(stats, m), FactorizationError);
  }

  TEST_CASE("model files round-trip exactly") {
    const auto spec = GramSpec{ModeSet(3, 2, 0.5), 2, 1e-3, 1.0, LinearDiffOp::heat(), Domain::cube(2, 0.5)};
    SufficientStats stats(spec.modes);
    stats.accumulate(sample_data(30, 2, 0.5, 13));
    const auto model = fit(stats, assemble_m(spec));
    std::stringstream csv;
    write_csv(model, csv);
    const auto from_csv = read_csv_model(csv);
    CHECK(from_csv.modes == model.modes);
    CHECK(from_csv.z == model.z);
    std::stringstream bin;
    write_binary(model, bin);
    const auto from_bin = read_binary_model(bin);
    CHECK(from_bin.modes == model.modes);
    CHECK(from_bin.z == model.z);
    std::stringstream junk("hello");
    CHECK_THROWS_AS(read_csv_model(junk), ConfigError);
    std::stringstream junk2("hello");
    CHECK_THROWS_AS(read_binary_model(junk2), ConfigError);
  }

  TEST_CASE("datasets validate their shape and entries") {
    Dataset d{MatrixXr::Zero(3, 1), VectorXr::Zero(2)};
    CHECK_THROWS_AS(d.validate(), DimensionError);
    Dataset e{MatrixXr::Zero(2, 1), VectorXr::Zero(2)};
    e.Y(1) = std::nan("");
    CHECK_THROWS_AS(e.validate(), ConfigError);
    const auto a = sample_data(4, 1, 1.0, 1);
    const auto b = sample_data(3, 1, 1.0, 2);
    const auto c = concatenate(a, b);
    CHECK(c.size() == 7);
    CHECK(c.X(5, 0) == b.X(1, 0));
    CHECK_THROWS_AS(concatenate(a, sample_data(3, 2, 1.0, 2)), DimensionError);
  }
}
