#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "tvgsr/error.hpp"

namespace tvgsr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Node positions, one (latitude, longitude) row per node. Treated as planar.
class CoordinateSet {
 public:
  using Storage = Eigen::Matrix<double, Eigen::Dynamic, 2>;

  explicit CoordinateSet(Storage coords) : coords_(std::move(coords)) {
    detail::require_input(coords_.rows() >= 2, "coordinate set needs at least 2 nodes, got " +
                                                    std::to_string(coords_.rows()));
    for (Eigen::Index i = 0; i < coords_.rows(); ++i) {
      if (!coords_.row(i).allFinite())
        throw InputError("non-finite coordinate at node " + std::to_string(i));
    }
  }

  Eigen::Index size() const { return coords_.rows(); }
  const Storage& matrix() const { return coords_; }
  auto row(Eigen::Index i) const { return coords_.row(i); }

 private:
  Storage coords_;
};

enum class LaplacianKind { combinatorial, normalized };

inline const char* to_string(LaplacianKind kind) {
  return kind == LaplacianKind::combinatorial ? "combinatorial" : "normalized";
}

inline LaplacianKind parse_laplacian_kind(const std::string& s) {
  if (s == "combinatorial") return LaplacianKind::combinatorial;
  if (s == "normalized") return LaplacianKind::normalized;
  throw ParameterError("unknown laplacian kind '" + s + "' (expected combinatorial|normalized)");
}

/// Undirected weighted graph. Immutable once built.
class Graph {
 public:
  /// Validates W: square, finite, nonnegative, symmetric, zero diagonal.
  static Graph from_adjacency(const Matrix& w, LaplacianKind kind = LaplacianKind::combinatorial) {
    detail::require_input(w.rows() == w.cols() && w.rows() >= 1,
                          "adjacency must be square and non-empty, got " +
                              detail::shape_str(w.rows(), w.cols()));
    detail::require_input(w.allFinite(), "adjacency contains non-finite entries");
    detail::require_input((w.array() >= 0.0).all(), "adjacency has negative weights");
    const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
    detail::require_input((w - w.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
                          "adjacency is not symmetric");
    detail::require_input(w.diagonal().cwiseAbs().maxCoeff() == 0.0,
                          "adjacency has nonzero diagonal (self-loops)");
    const Matrix sym = 0.5 * (w + w.transpose());
    return Graph(sym.sparseView(), kind);
  }

  static Graph from_sparse(const SparseMatrix& w, LaplacianKind kind = LaplacianKind::combinatorial) {
    return from_adjacency(Matrix(w), kind);
  }

  Eigen::Index n_nodes() const { return adjacency_.rows(); }
  const SparseMatrix& adjacency() const { return adjacency_; }
  Matrix dense_adjacency() const { return Matrix(adjacency_); }
  const Vector& degree() const { return degree_; }
  LaplacianKind laplacian_kind() const { return kind_; }
  bool connected() const { return connected_; }
  /// Number of undirected edges (pairs with positive weight).
  Eigen::Index n_edges() const { return adjacency_.nonZeros() / 2; }

  /// Gaussian-kernel width used by the k-NN builder, when the graph came from it.
  std::optional<double> kernel_sigma() const { return sigma_; }

  Graph with_kind(LaplacianKind kind) const {
    Graph g = *this;
    g.kind_ = kind;
    return g;
  }

  double weight(Eigen::Index i, Eigen::Index j) const { return adjacency_.coeff(i, j); }

 private:
  Graph(SparseMatrix w, LaplacianKind kind, std::optional<double> sigma = std::nullopt)
      : adjacency_(std::move(w)), kind_(kind), sigma_(sigma) {
    adjacency_.prune(0.0);
    adjacency_.makeCompressed();
    degree_ = adjacency_ * Vector::Ones(adjacency_.cols());
    connected_ = check_connected();
  }

  bool check_connected() const {
    const Eigen::Index n = n_nodes();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::queue<Eigen::Index> frontier;
    frontier.push(0);
    seen[0] = 1;
    Eigen::Index count = 1;
    while (!frontier.empty()) {
      const auto u = frontier.front();
      frontier.pop();
      for (SparseMatrix::InnerIterator it(adjacency_, u); it; ++it) {
        const auto v = it.row();
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          ++count;
          frontier.push(v);
        }
      }
    }
    return count == n;
  }

  friend Graph build_knn_graph(const CoordinateSet&, int, LaplacianKind);

  SparseMatrix adjacency_;
  Vector degree_;
  LaplacianKind kind_ = LaplacianKind::combinatorial;
  std::optional<double> sigma_;
  bool connected_ = false;
};

/// k-NN graph with Gaussian weights exp(-d^2 / sigma^2).
///
/// Each node selects its k nearest neighbours (Euclidean, ties broken by the
/// lower node index); the edge set is the symmetrized union of the selections.
/// sigma is the mean edge length over that undirected edge set. Connectivity is
/// reported through Graph::connected(), never enforced.
inline Graph build_knn_graph(const CoordinateSet& coords, int k,
                             LaplacianKind kind = LaplacianKind::combinatorial) {
  const Eigen::Index n = coords.size();
  detail::require_param(k > 0 && k < n, "k must satisfy 0 < k < N (k=" + std::to_string(k) +
                                            ", N=" + std::to_string(n) + ")");
  const auto& m = coords.matrix();

  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges;
  edges.reserve(static_cast<std::size_t>(n * k));
  std::vector<std::pair<double, Eigen::Index>> cand(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) cand[c++] = {(m.row(i) - m.row(j)).squaredNorm(), j};
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    for (int r = 0; r < k; ++r) {
      const auto j = cand[static_cast<std::size_t>(r)].second;
      edges.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  double sigma = 0.0;
  for (const auto& [i, j] : edges) sigma += (m.row(i) - m.row(j)).norm();
  sigma /= static_cast<double>(edges.size());

  std::vector<Triplet> trips;
  trips.reserve(2 * edges.size());
  for (const auto& [i, j] : edges) {
    const double d2 = (m.row(i) - m.row(j)).squaredNorm();
    // sigma == 0 only when every edge has zero length; the kernel is then 1.
    const double w = sigma > 0.0 ? std::exp(-d2 / (sigma * sigma)) : 1.0;
    trips.emplace_back(i, j, w);
    trips.emplace_back(j, i, w);
  }
  SparseMatrix w(n, n);
  w.setFromTriplets(trips.begin(), trips.end());
  return Graph(std::move(w), kind, sigma);
}

/// Sparse Laplacian of the graph's kind.
///
/// combinatorial: L = D - W.
/// normalized:    D^{-1/2} L D^{-1/2}; zero-degree nodes get zero rows and columns.
inline SparseMatrix sparse_laplacian(const Graph& g) {
  const Eigen::Index n = g.n_nodes();
  const auto& w = g.adjacency();
  const auto& d = g.degree();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(w.nonZeros() + n));
  if (g.laplacian_kind() == LaplacianKind::combinatorial) {
    for (Eigen::Index i = 0; i < n; ++i) trips.emplace_back(i, i, d(i));
    for (Eigen::Index col = 0; col < w.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(w, col); it; ++it)
        trips.emplace_back(it.row(), it.col(), -it.value());
  } else {
    Vector inv_sqrt(n);
    for (Eigen::Index i = 0; i < n; ++i) inv_sqrt(i) = d(i) > 0.0 ? 1.0 / std::sqrt(d(i)) : 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (d(i) > 0.0) trips.emplace_back(i, i, 1.0);
    for (Eigen::Index col = 0; col < w.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(w, col); it; ++it)
        trips.emplace_back(it.row(), it.col(), -it.value() * inv_sqrt(it.row()) * inv_sqrt(it.col()));
  }
  SparseMatrix l(n, n);
  l.setFromTriplets(trips.begin(), trips.end());
  l.makeCompressed();
  return l;
}

inline Matrix laplacian(const Graph& g) { return Matrix(sparse_laplacian(g)); }

namespace detail {

inline void require_symmetric(const Matrix& a, const char* what) {
  require_input(a.rows() == a.cols(), std::string(what) + " must be square, got " +
                                          shape_str(a.rows(), a.cols()));
  require_input(a.allFinite(), std::string(what) + " has non-finite entries");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  require_input((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale,
                std::string(what) + " is not symmetric");
}

inline bool is_integer(double x) { return std::floor(x) == x; }

}  // namespace detail

/// Eigendecomposition L = U diag(lambda) U^T, eigenvalues ascending.
struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;

  Eigen::Index size() const { return eigenvalues.size(); }
  double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }
};

inline Spectrum spectrum(const Matrix& laplacian_matrix) {
  detail::require_symmetric(laplacian_matrix, "matrix passed to spectrum()");
  Eigen::SelfAdjointEigenSolver<Matrix> es(laplacian_matrix);
  if (es.info() != Eigen::Success) throw NumericError("eigendecomposition did not converge", 0);
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Graph Fourier transform x_hat = U^T x.
inline Vector gft(const Vector& x, const Spectrum& s) {
  detail::require_input(x.size() == s.size(), "gft: signal length " + std::to_string(x.size()) +
                                                   " != spectrum size " + std::to_string(s.size()));
  return s.eigenvectors.transpose() * x;
}

inline Vector inverse_gft(const Vector& x_hat, const Spectrum& s) {
  detail::require_input(x_hat.size() == s.size(), "inverse_gft: coefficient length " +
                                                       std::to_string(x_hat.size()) +
                                                       " != spectrum size " + std::to_string(s.size()));
  return s.eigenvectors * x_hat;
}

inline void check_sobolev_params(double epsilon, double beta) {
  detail::require_param(std::isfinite(epsilon) && epsilon >= 0.0,
                        "epsilon must be >= 0, got " + std::to_string(epsilon));
  detail::require_param(std::isfinite(beta) && beta > 0.0, "beta must be > 0, got " + std::to_string(beta));
}

/// U diag(f(lambda_i)) U^T.
template <class F>
Matrix spectral_function(const Spectrum& s, F&& f) {
  Vector fv = s.eigenvalues.unaryExpr(std::forward<F>(f));
  return s.eigenvectors * fv.asDiagonal() * s.eigenvectors.transpose();
}

/// Explicit (L + eps I)^beta.
///
/// Integer beta <= 4 is formed by repeated multiplication; everything else
/// spectrally, with eigenvalues clamped at zero before the power.
inline Matrix sobolev_power(const Matrix& laplacian_matrix, double epsilon, double beta) {
  check_sobolev_params(epsilon, beta);
  detail::require_symmetric(laplacian_matrix, "laplacian");
  const Eigen::Index n = laplacian_matrix.rows();
  const Matrix shifted = laplacian_matrix + epsilon * Matrix::Identity(n, n);
  Matrix out;
  if (detail::is_integer(beta) && beta <= 4.0) {
    out = shifted;
    for (int p = 1; p < static_cast<int>(beta); ++p) out = out * shifted;
  } else {
    const Spectrum s = spectrum(laplacian_matrix);
    out = spectral_function(s, [&](double l) { return std::pow(std::max(l, 0.0) + epsilon, beta); });
  }
  return 0.5 * (out + out.transpose());
}

/// Largest eigenvalue of a symmetric PSD sparse matrix.
///
/// Dense solve up to 1500 nodes; above that, power iteration inflated by 2%
/// so callers using 1/lambda as a step size stay on the safe side.
inline double largest_eigenvalue(const SparseMatrix& a) {
  const Eigen::Index n = a.rows();
  if (n <= 1500) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(n - 1);
  }
  Vector v = Vector::LinSpaced(n, 1.0, 2.0);
  v.normalize();
  double rq = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vector av = a * v;
    const double next = v.dot(av);
    const double nrm = av.norm();
    if (nrm == 0.0) return 0.0;
    v = av / nrm;
    if (it > 10 && std::abs(next - rq) <= 1e-10 * std::abs(next)) {
      rq = next;
      break;
    }
    rq = next;
  }
  return 1.02 * rq;
}

/// Action of (L + eps I)^beta on N x m blocks.
///
/// beta == 1 uses the sparse L plus an eps shift; other integer beta <= 4
/// chain that action; any other beta uses a cached dense spectral power.
class SobolevOperator {
 public:
  SobolevOperator(SparseMatrix laplacian_matrix, double epsilon, double beta)
      : l_(std::move(laplacian_matrix)), epsilon_(epsilon), beta_(beta) {
    check_sobolev_params(epsilon, beta);
    if (detail::is_integer(beta) && beta <= 4.0) {
      repeats_ = static_cast<int>(beta);
    } else {
      dense_ = sobolev_power(Matrix(l_), epsilon, beta);
    }
  }

  Eigen::Index size() const { return l_.rows(); }
  double epsilon() const { return epsilon_; }
  double beta() const { return beta_; }
  const SparseMatrix& laplacian() const { return l_; }

  Matrix apply(const Matrix& x) const {
    if (repeats_ == 0) return dense_ * x;
    Matrix y = x;
    for (int p = 0; p < repeats_; ++p) {
      Matrix next = l_ * y;
      if (epsilon_ != 0.0) next += epsilon_ * y;
      y = std::move(next);
    }
    return y;
  }

  Matrix matrix() const {
    if (repeats_ == 0) return dense_;
    return sobolev_power(Matrix(l_), epsilon_, beta_);
  }

  /// (lambda_N + eps)^beta.
  double lambda_max() const { return std::pow(largest_eigenvalue(l_) + epsilon_, beta_); }

 private:
  SparseMatrix l_;
  double epsilon_;
  double beta_;
  int repeats_ = 0;
  Matrix dense_;
};

}  // namespace tvgsr
