#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "tvgsr/temporal.hpp"

using namespace tvgsr;

namespace {

Graph single_edge() {
  Matrix w(2, 2);
  w << 0, 1, 1, 0;
  return Graph::from_adjacency(w);
}

}  // namespace

TEST(DifferenceOperator, StepOne) {
  Matrix expected(3, 2);
  expected << -1, 0, 1, -1, 0, 1;
  EXPECT_EQ(difference_operator(3, 1).matrix(), expected);
}

TEST(DifferenceOperator, StepTwo) {
  Matrix expected(3, 1);
  expected << -1, 0, 1;
  EXPECT_EQ(difference_operator(3, 2).matrix(), expected);
}

TEST(DifferenceOperator, ColumnStructure) {
  for (int s = 1; s <= 3; ++s) {
    for (Eigen::Index m = s + 1; m < 12; ++m) {
      const Matrix d = difference_operator(m, s).matrix();
      ASSERT_EQ(d.rows(), m);
      ASSERT_EQ(d.cols(), m - s);
      EXPECT_EQ(d.colwise().sum().cwiseAbs().maxCoeff(), 0.0);
      EXPECT_EQ(d, oracle::difference_matrix(m, s));
      for (Eigen::Index c = 0; c < d.cols(); ++c) EXPECT_EQ((d.col(c).array() != 0.0).count(), 2);
    }
  }
}

TEST(DifferenceOperator, RejectsBadArguments) {
  EXPECT_THROW(difference_operator(1, 1), ParameterError);
  EXPECT_THROW(difference_operator(3, 3), ParameterError);
  EXPECT_THROW(difference_operator(5, 0), ParameterError);
}

TEST(TemporalOperator, ActionsMatchExplicitMatrix) {
  oracle::Gen gen(1);
  for (int s = 1; s <= 3; ++s) {
    const Eigen::Index m = 7;
    const TemporalOperator d(m, s);
    const Matrix dm = oracle::difference_matrix(m, s);
    const Matrix x = gen.matrix(5, m);
    const Matrix v = gen.matrix(5, m - s);
    EXPECT_LT((d.apply(x) - x * dm).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((d.apply_transpose(v) - v * dm.transpose()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((d.apply_gram(x) - x * dm * dm.transpose()).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_EQ(d.gram(), dm * dm.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(dm * dm.transpose());
    EXPECT_NEAR(d.gram_lambda_max(), es.eigenvalues().maxCoeff(), 1e-12);
  }
}

TEST(TemporalOperator, ShapeMismatch) {
  const TemporalOperator d(4, 1);
  EXPECT_THROW(d.apply(Matrix::Zero(3, 5)), InputError);
  EXPECT_THROW(d.apply_transpose(Matrix::Zero(3, 4)), InputError);
}

TEST(TemporalDifference, Examples) {
  Matrix same(3, 4);
  same.colwise() = Vector::LinSpaced(3, 1.0, 3.0);
  EXPECT_EQ(temporal_difference(same, difference_operator(4)).cwiseAbs().maxCoeff(), 0.0);

  Matrix x(2, 2);
  x << 0, 1, 0, 2;
  Matrix expected(2, 1);
  expected << 1, 2;
  EXPECT_EQ(temporal_difference(x, difference_operator(2)), expected);

  Vector v(3);
  v << 0.5, -1.0, 2.0;
  Matrix ramp(3, 6);
  for (Eigen::Index t = 0; t < 6; ++t) ramp.col(t) = static_cast<double>(t + 1) * v;
  const Matrix xd = temporal_difference(ramp, difference_operator(6));
  for (Eigen::Index c = 0; c < xd.cols(); ++c) EXPECT_LT((xd.col(c) - v).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(TimeVaryingSignal, RejectsNonFinite) {
  Matrix x = Matrix::Zero(2, 3);
  x(1, 2) = std::nan("");
  EXPECT_THROW(TimeVaryingSignal{x}, InputError);
}

TEST(LocalVariation, Examples) {
  const Graph g = single_edge();
  Vector x(2);
  x << 1, 0;
  EXPECT_DOUBLE_EQ(local_variation(x, g, 0), 1.0);
  EXPECT_DOUBLE_EQ(local_variation(x, g, 1), 1.0);
  EXPECT_DOUBLE_EQ(local_variation(Vector::Constant(2, 4.0), g, 0), 0.0);

  Matrix w = Matrix::Zero(3, 3);
  w(0, 1) = w(1, 0) = 1.0;
  Vector y(3);
  y << 1, 2, 7;
  EXPECT_DOUBLE_EQ(local_variation(y, Graph::from_adjacency(w), 2), 0.0);
  EXPECT_THROW(local_variation(x, g, 2), ParameterError);
  EXPECT_THROW(local_variation(x, g, -1), ParameterError);
}

TEST(DirichletForm, Examples) {
  const Graph g = single_edge();
  Vector x(2);
  x << 1, 0;
  EXPECT_DOUBLE_EQ(dirichlet_form(x, g, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(dirichlet_form(x, g, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(dirichlet_form(Vector::Constant(2, 3.0), g, 1.5), 0.0);
  EXPECT_THROW(dirichlet_form(x, g, 0.0), ParameterError);
  EXPECT_THROW(dirichlet_form(x, g, -2.0), ParameterError);
}

TEST(DirichletForm, PTwoEqualsQuadraticForm) {
  oracle::Gen gen(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = gen.integer(2, 20);
    const Matrix w = oracle::random_adjacency(gen, n);
    const Graph g = Graph::from_adjacency(w);
    const Vector x = gen.vector(n);
    const double q = laplacian_quadratic(x, laplacian(g));
    EXPECT_NEAR(dirichlet_form(x, g, 2.0), q, 1e-10 * std::max(1.0, q));
  }
}

TEST(LaplacianQuadratic, Examples) {
  oracle::Gen gen(3);
  const Matrix w = oracle::random_adjacency(gen, 8);
  const Matrix l = oracle::combinatorial_laplacian(w);
  EXPECT_NEAR(laplacian_quadratic(Vector::Constant(8, -2.5), l), 0.0, 1e-12);
  Vector x(2);
  x << 1, 0;
  EXPECT_DOUBLE_EQ(laplacian_quadratic(x, laplacian(single_edge())), 1.0);
  EXPECT_THROW(laplacian_quadratic(Vector::Zero(3), l), InputError);
}

TEST(LaplacianQuadratic, EqualsEdgeSum) {
  oracle::Gen gen(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = gen.integer(2, 30);
    const Matrix w = oracle::random_adjacency(gen, n);
    const Graph g = Graph::from_adjacency(w);
    const Vector x = gen.vector(n);
    const double e = oracle::edge_sum_quadratic(x, w);
    EXPECT_NEAR(laplacian_quadratic(x, sparse_laplacian(g)), e, 1e-10 * std::max(1.0, e));
    EXPECT_NEAR(laplacian_quadratic(x, laplacian(g)), e, 1e-10 * std::max(1.0, e));
    EXPECT_GE(e, 0.0);
  }
}

TEST(LaplacianQuadratic, ZeroOnlyForConstants) {
  oracle::Gen gen(5);
  const Matrix l = oracle::combinatorial_laplacian(oracle::random_adjacency(gen, 10));
  for (int trial = 0; trial < 10; ++trial) {
    Vector x = gen.vector(10);
    x.array() -= x.mean();
    if (x.norm() < 1e-3) continue;
    EXPECT_GT(laplacian_quadratic(x, l), 1e-8);
  }
}

TEST(S2TimeVarying, TraceEqualsColumnSum) {
  oracle::Gen gen(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = gen.integer(2, 15), m = gen.integer(1, 8);
    const Matrix l = oracle::combinatorial_laplacian(oracle::random_adjacency(gen, n));
    const Matrix x = gen.matrix(n, m);
    double cols = 0.0;
    for (Eigen::Index t = 0; t < m; ++t) cols += laplacian_quadratic(x.col(t), l);
    EXPECT_NEAR(s2_time_varying(x, l), cols, 1e-10 * std::max(1.0, cols));
    EXPECT_NEAR(s2_time_varying(x, l), (x.transpose() * l * x).trace(), 1e-10 * std::max(1.0, cols));
  }
  const Matrix l = oracle::combinatorial_laplacian(oracle::random_adjacency(gen, 5));
  Matrix consts(5, 3);
  consts << Vector::Constant(5, 1.0), Vector::Constant(5, -3.0), Vector::Constant(5, 0.25);
  EXPECT_NEAR(s2_time_varying(consts, l), 0.0, 1e-12);
  const Vector one = gen.vector(5);
  EXPECT_DOUBLE_EQ(s2_time_varying(Matrix(one), l), laplacian_quadratic(one, l));
}

TEST(SobolevNorm, Examples) {
  oracle::Gen gen(7);
  const Matrix w = oracle::random_adjacency(gen, 7);
  const Matrix l = oracle::combinatorial_laplacian(w);
  const Vector x = gen.vector(7);
  EXPECT_NEAR(sobolev_norm_squared(x, l, 0.0, 1.0), laplacian_quadratic(x, l), 1e-12);
  for (double beta : {1.0, 2.0, 0.5, 3.0}) {
    const double eps = 0.3;
    EXPECT_NEAR(sobolev_norm_squared(Vector::Ones(7), l, eps, beta), 7.0 * std::pow(eps, beta), 1e-10) << beta;
  }
  Vector e(2);
  e << 1, 0;
  EXPECT_DOUBLE_EQ(sobolev_norm_squared(e, laplacian(single_edge()), 0.5, 1.0), 1.5);
  EXPECT_THROW(sobolev_norm_squared(x, l, -1.0, 1.0), ParameterError);
  EXPECT_THROW(sobolev_norm_squared(x, l, 0.0, 0.0), ParameterError);
}

TEST(SobolevNorm, ScalingAndMonotonicity) {
  oracle::Gen gen(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = gen.integer(2, 12);
    const Matrix l = oracle::combinatorial_laplacian(oracle::random_adjacency(gen, n));
    const Vector x = gen.vector(n);
    const double eps = gen.uniform(0.0, 2.0), beta = gen.uniform(0.5, 3.0), c = gen.uniform(-4.0, 4.0);
    const double base = sobolev_norm_squared(x, l, eps, beta);
    EXPECT_NEAR(sobolev_norm_squared(c * x, l, eps, beta), c * c * base, 1e-10 * std::max(1.0, c * c * base));
    EXPECT_GE(base, -1e-10);
    double prev = -1.0;
    for (double e : {0.0, 0.01, 0.1, 1.0, 10.0}) {
      const double v = sobolev_norm_squared(x, l, e, 1.0);
      EXPECT_GE(v, prev);
      EXPECT_NEAR(v, laplacian_quadratic(x, l) + e * x.squaredNorm(), 1e-10 * std::max(1.0, v));
      prev = v;
    }
  }
}

TEST(SobolevSmoothness, Examples) {
  oracle::Gen gen(9);
  const Matrix w = oracle::random_adjacency(gen, 6);
  const Matrix l = oracle::combinatorial_laplacian(w);
  const TemporalOperator d(5, 1);
  Matrix still(6, 5);
  still.colwise() = gen.vector(6);
  EXPECT_NEAR(sobolev_smoothness(still, d, l, 0.7, 2.0), 0.0, 1e-12);

  const Matrix x = gen.matrix(6, 5);
  const Matrix xd = x * oracle::difference_matrix(5, 1);
  EXPECT_NEAR(sobolev_smoothness(x, d, l, 0.0, 1.0), (xd.transpose() * l * xd).trace(), 1e-10);
}

TEST(SobolevSmoothness, TraceEqualsColumnNormsAndOperatorForm) {
  oracle::Gen gen(10);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = gen.integer(2, 10), m = gen.integer(4, 8);
    const int s = static_cast<int>(gen.integer(1, 3));
    const Matrix w = oracle::random_adjacency(gen, n);
    const Matrix l = oracle::combinatorial_laplacian(w);
    const Matrix x = gen.matrix(n, m);
    const double eps = gen.uniform(0.0, 1.5);
    const double beta = trial % 3 == 0 ? gen.uniform(0.5, 2.5) : static_cast<double>(gen.integer(1, 3));
    const TemporalOperator d(m, s);
    const Matrix xd = x * oracle::difference_matrix(m, s);
    double cols = 0.0;
    for (Eigen::Index c = 0; c < xd.cols(); ++c) cols += sobolev_norm_squared(xd.col(c), l, eps, beta);
    const double tr = sobolev_smoothness(x, d, l, eps, beta);
    EXPECT_NEAR(tr, cols, 1e-10 * std::max(1.0, cols));
    const SobolevOperator k(sparse_laplacian(Graph::from_adjacency(w)), eps, beta);
    EXPECT_NEAR(sobolev_smoothness(x, d, k), cols, 1e-10 * std::max(1.0, cols));
    EXPECT_GE(tr, -1e-10);
  }
}

TEST(SobolevSmoothness, SpectralPenalizationIdentity) {
  oracle::Gen gen(11);
  for (double beta : {1.0, 2.0, 1.5}) {
    const Matrix l = oracle::combinatorial_laplacian(oracle::random_adjacency(gen, 9));
    const Spectrum s = spectrum(l);
    const Matrix x = gen.matrix(9, 4);
    double spectral_sum = 0.0;
    for (Eigen::Index t = 0; t < 4; ++t) {
      const Vector xh = gft(x.col(t), s);
      for (Eigen::Index i = 0; i < 9; ++i) spectral_sum += xh(i) * xh(i) * std::pow(std::max(s.eigenvalues(i), 0.0), beta);
    }
    const double direct = (x.transpose() * sobolev_power(l, 0.0, beta) * x).trace();
    EXPECT_NEAR(direct, spectral_sum, 1e-8 * std::max(1.0, spectral_sum)) << beta;
  }
}

TEST(AlphaSmoothness, Examples) {
  oracle::Gen gen(12);
  const Matrix l = oracle::combinatorial_laplacian(oracle::random_adjacency(gen, 5));
  Matrix still(5, 4);
  still.colwise() = gen.vector(5);
  EXPECT_NEAR(alpha_smoothness_level(still, TemporalOperator(4, 1), l), 0.0, 1e-12);

  Matrix two(5, 2);
  two.col(0) = gen.vector(5);
  two.col(1) = gen.vector(5);
  const Vector d = two.col(1) - two.col(0);
  EXPECT_NEAR(alpha_smoothness_level(two, TemporalOperator(2, 1), l), d.dot(l * d), 1e-12);

  const Matrix x = gen.matrix(5, 6);
  const Matrix xd = x * oracle::difference_matrix(6, 1);
  EXPECT_NEAR(alpha_smoothness_level(x, TemporalOperator(6, 1), l), (xd.transpose() * l * xd).trace() / 5.0,
              1e-10);
}

TEST(TemporalFunctionals, SingleSnapshotRejected) {
  const Matrix l = Matrix::Identity(3, 3);
  const Matrix x = Matrix::Ones(3, 1);
  EXPECT_THROW(alpha_smoothness_level(x, TemporalOperator(2, 1), l), ParameterError);
  EXPECT_THROW(TemporalOperator(1, 1), ParameterError);
}

TEST(TemporalFunctionals, DimensionMismatch) {
  const Matrix l = Matrix::Identity(3, 3);
  EXPECT_THROW(s2_time_varying(Matrix::Ones(4, 2), l), InputError);
  EXPECT_THROW(sobolev_smoothness(Matrix::Ones(4, 3), TemporalOperator(3, 1), l, 0.0, 1.0), InputError);
  EXPECT_THROW(sobolev_smoothness(Matrix::Ones(3, 4), TemporalOperator(3, 1), l, 0.0, 1.0), InputError);
}
