#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tvgsr/error.hpp"
#include "tvgsr/graph.hpp"
#include "tvgsr/sampling.hpp"
#include "tvgsr/solvers.hpp"
#include "tvgsr/temporal.hpp"

namespace tvgsr {

/// Hessian of the vectorized reconstruction objective, split into its two blocks.
struct HessianSpec {
  Vector q_diagonal;  // vec(J)
  Matrix smoothness;  // upsilon (D D^T) kron (L + eps I)^beta
  double upsilon = 0.0;
  double epsilon = 0.0;
  double beta = 1.0;

  Matrix full() const {
    Matrix h = smoothness;
    h.diagonal() += q_diagonal;
    return h;
  }
};

/// Dense Hessian Q + upsilon (D D^T) kron (L + eps I)^beta. TGSR is eps = 0, beta = 1.
inline HessianSpec hessian(const SamplingMask& j, const Graph& g, const TemporalOperator& d, double upsilon,
                           double epsilon, double beta) {
  detail::require_input(j.rows() == g.n_nodes() && j.cols() == d.n_snapshots(),
                        "hessian: mask is " + detail::shape_str(j.rows(), j.cols()) + ", expected " +
                            detail::shape_str(g.n_nodes(), d.n_snapshots()));
  detail::require_param(std::isfinite(upsilon) && upsilon >= 0.0, "upsilon must be >= 0");
  require_dense_size(j.rows(), j.cols(), "hessian");
  HessianSpec h;
  h.upsilon = upsilon;
  h.epsilon = epsilon;
  h.beta = beta;
  const Matrix k = sobolev_power(laplacian(g), epsilon, beta);
  h.smoothness = upsilon * Matrix(Eigen::kroneckerProduct(d.gram(), k));
  h.q_diagonal = Eigen::Map<const Vector>(j.matrix().data(), j.rows() * j.cols());
  return h;
}

struct ConditionNumber {
  double value = 0.0;  // +inf when `infinite`
  bool infinite = false;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// lambda_max / lambda_min of a symmetric matrix; flagged infinite when
/// lambda_min < 1e-12 lambda_max.
inline ConditionNumber condition_number(const Matrix& h) {
  detail::require_symmetric(h, "matrix passed to condition_number()");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigenvalue solve failed", 0);
  ConditionNumber c;
  c.lambda_min = es.eigenvalues()(0);
  c.lambda_max = es.eigenvalues()(h.rows() - 1);
  if (c.lambda_max <= 0.0 || c.lambda_min < 1e-12 * c.lambda_max) {
    c.infinite = true;
    c.value = std::numeric_limits<double>::infinity();
  } else {
    c.value = c.lambda_max / c.lambda_min;
  }
  return c;
}

struct Bracket {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool pass = false;
};

/// Weyl brackets for one Hessian, on the unscaled form (1/upsilon) Q + (D D^T) kron K.
struct HessianBounds {
  double smooth_lambda_max = 0.0;  // lambda_max(K) * lambda_max(D D^T)
  bool premise = false;            // lambda_max(K) >= 1 and lambda_max(D D^T) >= 1
  Bracket lambda_max;              // [s, s + 1/upsilon]
  Bracket lambda_min_data;         // [0, 1/upsilon]
  Bracket lambda_min_smooth;       // [0, s]

  bool all_pass() const { return lambda_max.pass && lambda_min_data.pass && lambda_min_smooth.pass; }
};

struct WeylReport {
  double lambda_n = 0.0;   // largest Laplacian eigenvalue
  double lambda_dn = 0.0;  // largest eigenvalue of D D^T
  double upsilon = 0.0, epsilon = 0.0, beta = 1.0;
  HessianBounds laplacian;
  HessianBounds sobolev;

  bool all_pass() const { return laplacian.all_pass() && sobolev.all_pass(); }
};

namespace detail {

inline Bracket bracket(double value, double lower, double upper, double tol) {
  return {value, lower, upper, value >= lower - tol && value <= upper + tol};
}

inline HessianBounds check_hessian_bounds(const Matrix& unscaled, double k_max, double d_max, double upsilon) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(unscaled, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  const double lmax = es.eigenvalues()(unscaled.rows() - 1);
  HessianBounds b;
  b.smooth_lambda_max = k_max * d_max;
  b.premise = k_max >= 1.0 && d_max >= 1.0;
  const double tol = 1e-8 * std::max({1.0, std::abs(lmax), b.smooth_lambda_max + 1.0 / upsilon});
  b.lambda_max = bracket(lmax, b.smooth_lambda_max, b.smooth_lambda_max + 1.0 / upsilon, tol);
  b.lambda_min_data = bracket(lmin, 0.0, 1.0 / upsilon, tol);
  b.lambda_min_smooth = bracket(lmin, 0.0, b.smooth_lambda_max, tol);
  return b;
}

}  // namespace detail

/// Computes the extreme eigenvalues of both Hessians and checks them against
/// their Weyl brackets. Premise status accompanies each result; failures are
/// reported, never hidden.
inline WeylReport weyl_bounds(const Graph& g, const TemporalOperator& d, double upsilon, double epsilon,
                              double beta, const SamplingMask& j) {
  detail::require_input(!j.empty(), "weyl_bounds requires a nonzero sampling mask");
  detail::require_param(std::isfinite(upsilon) && upsilon > 0.0, "weyl_bounds requires upsilon > 0");
  require_dense_size(j.rows(), j.cols(), "weyl_bounds");
  const Matrix l = laplacian(g);
  WeylReport r;
  r.upsilon = upsilon;
  r.epsilon = epsilon;
  r.beta = beta;
  r.lambda_n = spectrum(l).lambda_max();
  r.lambda_dn = d.gram_lambda_max();

  // Unscaled forms: H / upsilon = (1/upsilon) Q + (D D^T) kron K.
  const HessianSpec hl = hessian(j, g, d, 1.0, 0.0, 1.0);
  Matrix al = hl.smoothness;
  al.diagonal() += hl.q_diagonal / upsilon;
  r.laplacian = detail::check_hessian_bounds(al, r.lambda_n, r.lambda_dn, upsilon);

  const HessianSpec hs = hessian(j, g, d, 1.0, epsilon, beta);
  Matrix as = hs.smoothness;
  as.diagonal() += hs.q_diagonal / upsilon;
  r.sobolev = detail::check_hessian_bounds(as, std::pow(std::max(r.lambda_n, 0.0) + epsilon, beta),
                                           r.lambda_dn, upsilon);
  return r;
}

struct SweepRow {
  double epsilon = 0.0;
  ConditionNumber sobolev;
  ConditionNumber laplacian;
};

/// Condition numbers of the Sobolev Hessian over an epsilon grid; the Laplacian
/// Hessian does not depend on epsilon and is solved once.
inline std::vector<SweepRow> condition_sweep(const Graph& g, const TemporalOperator& d, double upsilon,
                                             double beta, const std::vector<double>& epsilon_grid,
                                             const SamplingMask& j) {
  detail::require_param(!epsilon_grid.empty(), "condition_sweep needs a nonempty epsilon grid");
  require_dense_size(j.rows(), j.cols(), "condition_sweep");
  const ConditionNumber kl = condition_number(hessian(j, g, d, upsilon, 0.0, 1.0).full());
  std::vector<SweepRow> rows;
  rows.reserve(epsilon_grid.size());
  for (double eps : epsilon_grid) {
    SweepRow row;
    row.epsilon = eps;
    row.laplacian = kl;
    row.sobolev = condition_number(hessian(j, g, d, upsilon, eps, beta).full());
    rows.push_back(row);
  }
  return rows;
}

/// Normalized spectral penalties (lambda_i / lambda_N)^beta: one row per
/// eigenvalue, one column per beta.
inline Matrix eigenvalue_penalization(const Spectrum& s, const std::vector<double>& betas) {
  const double top = s.lambda_max();
  detail::require_input(top > 0.0, "eigenvalue_penalization: largest eigenvalue is zero (edgeless graph)");
  Matrix out(s.size(), static_cast<Eigen::Index>(betas.size()));
  for (std::size_t c = 0; c < betas.size(); ++c) {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const double ratio = std::clamp(s.eigenvalues(i) / top, 0.0, 1.0);
      out(i, static_cast<Eigen::Index>(c)) = betas[c] == 0.0 ? 1.0 : std::pow(ratio, betas[c]);
    }
  }
  return out;
}

}  // namespace tvgsr
