#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tvgsr/error.hpp"
#include "tvgsr/graph.hpp"
#include "tvgsr/io.hpp"
#include "tvgsr/random.hpp"
#include "tvgsr/temporal.hpp"

namespace tvgsr {

struct Dataset {
  CoordinateSet coords;
  TimeVaryingSignal signal;
  std::string name;
  std::string units;
  std::vector<std::string> node_ids;
  std::vector<io::NonFiniteCell> imputed;  // cells replaced by zero at load time

  Eigen::Index n_nodes() const { return coords.size(); }
  Eigen::Index n_snapshots() const { return signal.n_snapshots(); }
};

struct SyntheticGraph {
  CoordinateSet coords;
  Graph graph;
};

/// n nodes uniform in [0, side]^2, joined by a Gaussian k-NN graph.
inline SyntheticGraph synth_graph(Eigen::Index n = 100, double side = 100.0, int k = 5, std::uint64_t seed = 0,
                                  LaplacianKind kind = LaplacianKind::combinatorial) {
  detail::require_param(n >= 2, "synthetic graph needs at least 2 nodes");
  detail::require_param(std::isfinite(side) && side > 0.0, "square side must be positive");
  Rng rng(hash_combine(seed, 0x67726170ULL));
  CoordinateSet::Storage m(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, 0) = rng.uniform(0.0, side);
    m(i, 1) = rng.uniform(0.0, side);
  }
  CoordinateSet coords(std::move(m));
  Graph g = build_knn_graph(coords, k, kind);
  return {std::move(coords), std::move(g)};
}

/// Number of low graph frequencies (after the constant mode) spanned by x_1.
inline constexpr Eigen::Index kLowFrequencyBand = 10;

/// Smoothly evolving synthetic signal x_t = x_{t-1} + L^{-1/2} f_t.
///
/// x_1 is a random combination of the kLowFrequencyBand lowest nonzero
/// frequencies with ||x_1||^2 = energy. Each f_t is white Gaussian rescaled
/// to ||f_t|| = alpha. L^{-1/2} = U diag(0, lambda_2^{-1/2}, ...) U^T, so the
/// constant mode is annihilated and every temporal difference d satisfies
/// d^T L d = ||P f_t||^2 <= alpha^2. When `innovations` is non-null it
/// receives f_2, ..., f_M as its M-1 columns.
inline TimeVaryingSignal synth_signal(const Spectrum& s, Eigen::Index m, double alpha, double energy,
                                      std::uint64_t seed, Matrix* innovations = nullptr) {
  detail::require_param(m >= 2, "synthetic signal needs M >= 2");
  detail::require_param(std::isfinite(alpha) && alpha >= 0.0, "alpha must be >= 0");
  detail::require_param(std::isfinite(energy) && energy > 0.0, "energy must be positive");
  const Eigen::Index n = s.size();
  detail::require_input(n >= 2 && s.eigenvalues(1) > 1e-10 * std::max(1.0, s.lambda_max()),
                        "synthetic signal needs a connected graph (lambda_2 is zero)");

  Rng rng(hash_combine(seed, 0x7369676eULL));
  const Eigen::Index band = std::min<Eigen::Index>(kLowFrequencyBand, n - 1);
  Vector coeff = Vector::Zero(n);
  for (Eigen::Index i = 1; i <= band; ++i) coeff(i) = rng.normal();
  Vector x = s.eigenvectors * coeff;
  x *= std::sqrt(energy) / x.norm();

  Vector inv_sqrt(n);
  inv_sqrt(0) = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) inv_sqrt(i) = 1.0 / std::sqrt(s.eigenvalues(i));
  const Matrix l_inv_sqrt = s.eigenvectors * inv_sqrt.asDiagonal() * s.eigenvectors.transpose();

  Matrix out(n, m);
  out.col(0) = x;
  if (innovations) innovations->resize(n, m - 1);
  for (Eigen::Index t = 1; t < m; ++t) {
    Vector f(n);
    for (Eigen::Index i = 0; i < n; ++i) f(i) = rng.normal();
    const double nf = f.norm();
    f *= nf > 0.0 ? alpha / nf : 0.0;
    if (innovations) innovations->col(t - 1) = f;
    out.col(t) = out.col(t - 1) + l_inv_sqrt * f;
  }
  return TimeVaryingSignal(std::move(out));
}

inline TimeVaryingSignal synth_signal(const Graph& g, Eigen::Index m, double alpha, double energy = 1e4,
                                      std::uint64_t seed = 0) {
  return synth_signal(spectrum(laplacian(g)), m, alpha, energy, seed);
}

/// Loads a coordinate file and an N x M signal file; node order follows the coordinate file.
inline Dataset load_dataset(const std::string& coords_path, const std::string& signal_path,
                            io::NonFinitePolicy policy = io::NonFinitePolicy::reject) {
  auto cf = io::read_coordinates(coords_path);
  auto mf = io::read_matrix(signal_path, policy);
  if (mf.values.rows() != cf.coords.size())
    throw InputError("row-count mismatch: " + coords_path + " has " + std::to_string(cf.coords.size()) +
                     " nodes but " + signal_path + " has " + std::to_string(mf.values.rows()) + " rows");
  Dataset d{std::move(cf.coords), TimeVaryingSignal(std::move(mf.values)), "", "", std::move(cf.node_ids),
            std::move(mf.imputed)};
  return d;
}

inline void save_dataset(const Dataset& d, const std::string& coords_path, const std::string& signal_path) {
  io::write_coordinates(coords_path, d.coords, d.node_ids);
  io::write_matrix(signal_path, d.signal.values());
}

/// Daily increments x_{t+1} - x_t of a cumulative series (N x (M-1)).
inline TimeVaryingSignal cumulative_to_daily(const Matrix& cumulative) {
  detail::require_param(cumulative.cols() >= 2, "cumulative_to_daily needs M >= 2");
  return TimeVaryingSignal(temporal_difference(cumulative, TemporalOperator(cumulative.cols(), 1)));
}

}  // namespace tvgsr
