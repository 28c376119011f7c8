#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <string>

#include "tvgsr/error.hpp"
#include "tvgsr/graph.hpp"

namespace tvgsr {

/// N x M real matrix, one column per snapshot.
class TimeVaryingSignal {
 public:
  TimeVaryingSignal() = default;
  explicit TimeVaryingSignal(Matrix values) : values_(std::move(values)) {
    detail::require_input(values_.allFinite(), "time-varying signal has non-finite entries");
  }

  const Matrix& values() const { return values_; }
  Eigen::Index n_nodes() const { return values_.rows(); }
  Eigen::Index n_snapshots() const { return values_.cols(); }
  auto snapshot(Eigen::Index t) const { return values_.col(t); }

 private:
  Matrix values_;
};

/// s-step temporal difference operator D in R^{M x (M-s)}.
///
/// Column j holds -1 at row j and +1 at row j+s, so (X D)_j = x_{j+s} - x_j.
/// For s = 1 this is the usual consecutive-difference operator D_h.
class TemporalOperator {
 public:
  TemporalOperator(Eigen::Index n_snapshots, int step) : m_(n_snapshots), step_(step) {
    detail::require_param(step >= 1, "temporal step must be >= 1, got " + std::to_string(step));
    detail::require_param(n_snapshots > step, "temporal operator needs M > s (M=" +
                                                  std::to_string(n_snapshots) +
                                                  ", s=" + std::to_string(step) + ")");
  }

  Eigen::Index n_snapshots() const { return m_; }
  Eigen::Index n_differences() const { return m_ - step_; }
  int step() const { return step_; }

  Matrix matrix() const {
    Matrix d = Matrix::Zero(m_, n_differences());
    for (Eigen::Index j = 0; j < n_differences(); ++j) {
      d(j, j) = -1.0;
      d(j + step_, j) = 1.0;
    }
    return d;
  }

  /// D D^T (M x M).
  Matrix gram() const {
    const Matrix d = matrix();
    return d * d.transpose();
  }

  double gram_lambda_max() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram(), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(m_ - 1);
  }

  /// X D.
  Matrix apply(const Matrix& x) const {
    check_cols(x.cols(), m_, "X D");
    const Eigen::Index k = n_differences();
    return x.rightCols(k) - x.leftCols(k);
  }

  /// V D^T for V with M-s columns.
  Matrix apply_transpose(const Matrix& v) const {
    check_cols(v.cols(), n_differences(), "V D^T");
    const Eigen::Index k = n_differences();
    Matrix out = Matrix::Zero(v.rows(), m_);
    out.rightCols(k) += v;
    out.leftCols(k) -= v;
    return out;
  }

  /// X D D^T.
  Matrix apply_gram(const Matrix& x) const { return apply_transpose(apply(x)); }

 private:
  static void check_cols(Eigen::Index got, Eigen::Index want, const char* what) {
    detail::require_input(got == want, std::string(what) + ": expected " + std::to_string(want) +
                                           " columns, got " + std::to_string(got));
  }

  Eigen::Index m_;
  int step_;
};

inline TemporalOperator difference_operator(Eigen::Index n_snapshots, int step = 1) {
  return TemporalOperator(n_snapshots, step);
}

inline Matrix temporal_difference(const Matrix& x, const TemporalOperator& d) { return d.apply(x); }

/// sqrt(sum_{j in N(i)} W(i,j) (x(j) - x(i))^2).
inline double local_variation(const Vector& x, const Graph& g, Eigen::Index node) {
  detail::require_input(x.size() == g.n_nodes(), "local_variation: signal length mismatch");
  detail::require_param(node >= 0 && node < g.n_nodes(),
                        "node index " + std::to_string(node) + " out of range");
  double acc = 0.0;
  for (SparseMatrix::InnerIterator it(g.adjacency(), node); it; ++it) {
    const double diff = x(it.row()) - x(node);
    acc += it.value() * diff * diff;
  }
  return std::sqrt(acc);
}

/// Discrete p-Dirichlet form (1/p) sum_i ||grad_i x||^p.
inline double dirichlet_form(const Vector& x, const Graph& g, double p) {
  detail::require_param(std::isfinite(p) && p > 0.0, "p must be > 0, got " + std::to_string(p));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < g.n_nodes(); ++i) acc += std::pow(local_variation(x, g, i), p);
  return acc / p;
}

namespace detail {

template <class Mat>
void require_square_match(const Mat& l, Eigen::Index n, const char* what) {
  require_input(l.rows() == l.cols() && l.rows() == n,
                std::string(what) + ": operator is " + shape_str(l.rows(), l.cols()) +
                    " but signal has " + std::to_string(n) + " nodes");
}

/// tr(A^T B) without forming the product.
inline double frobenius_inner(const Matrix& a, const Matrix& b) {
  return (a.array() * b.array()).sum();
}

}  // namespace detail

/// x^T L x. Works with dense or sparse L.
template <class Mat>
double laplacian_quadratic(const Vector& x, const Mat& l) {
  detail::require_square_match(l, x.size(), "laplacian_quadratic");
  return x.dot(l * x);
}

/// tr(X^T L X).
template <class Mat>
double s2_time_varying(const Matrix& x, const Mat& l) {
  detail::require_square_match(l, x.rows(), "s2_time_varying");
  return detail::frobenius_inner(x, l * x);
}

/// ||x||^2_{beta,eps} = x^T (L + eps I)^beta x.
inline double sobolev_norm_squared(const Vector& x, const Matrix& l, double epsilon, double beta) {
  check_sobolev_params(epsilon, beta);
  detail::require_square_match(l, x.size(), "sobolev_norm_squared");
  if (beta == 1.0) return x.dot(l * x) + epsilon * x.squaredNorm();
  return x.dot(sobolev_power(l, epsilon, beta) * x);
}

/// tr((X D)^T K (X D)) with K = (L + eps I)^beta supplied as an operator.
inline double sobolev_smoothness(const Matrix& x, const TemporalOperator& d, const SobolevOperator& k) {
  detail::require_input(x.rows() == k.size(), "sobolev_smoothness: signal has " +
                                                  std::to_string(x.rows()) + " nodes, operator " +
                                                  std::to_string(k.size()));
  const Matrix xd = d.apply(x);
  return detail::frobenius_inner(xd, k.apply(xd));
}

inline double sobolev_smoothness(const Matrix& x, const TemporalOperator& d, const Matrix& l,
                                 double epsilon, double beta) {
  check_sobolev_params(epsilon, beta);
  detail::require_square_match(l, x.rows(), "sobolev_smoothness");
  const Matrix xd = d.apply(x);
  if (beta == 1.0) return detail::frobenius_inner(xd, l * xd) + epsilon * xd.squaredNorm();
  return detail::frobenius_inner(xd, sobolev_power(l, epsilon, beta) * xd);
}

/// tr((X D)^T L (X D)) / (M - 1). X belongs to B_alpha(G) iff the value is <= alpha.
template <class Mat>
double alpha_smoothness_level(const Matrix& x, const TemporalOperator& d, const Mat& l) {
  detail::require_param(x.cols() >= 2, "alpha_smoothness_level needs M >= 2");
  detail::require_square_match(l, x.rows(), "alpha_smoothness_level");
  const Matrix xd = d.apply(x);
  return detail::frobenius_inner(xd, l * xd) / static_cast<double>(x.cols() - 1);
}

}  // namespace tvgsr
