#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tvgsr/error.hpp"
#include "tvgsr/graph.hpp"
#include "tvgsr/sampling.hpp"
#include "tvgsr/temporal.hpp"

namespace tvgsr {

enum class Objective { tgsr, sobolev, gr_static };

inline const char* to_string(Objective o) {
  switch (o) {
    case Objective::tgsr: return "tgsr";
    case Objective::sobolev: return "sobolev";
    case Objective::gr_static: return "gr_static";
  }
  return "?";
}

inline Objective parse_objective(const std::string& s) {
  if (s == "tgsr") return Objective::tgsr;
  if (s == "sobolev" || s == "graphtrss") return Objective::sobolev;
  if (s == "gr_static" || s == "gr") return Objective::gr_static;
  throw ParameterError("unknown objective '" + s + "' (expected tgsr|sobolev|gr_static)");
}

struct SolverConfig {
  double upsilon = 1.0;
  double epsilon = 0.0;
  double beta = 1.0;
  double delta = 1e-6;
  long max_iter = 20000;
  Objective objective = Objective::sobolev;
  int temporal_step = 1;

  /// tgsr and gr_static always run with eps = 0, beta = 1.
  double effective_epsilon() const { return objective == Objective::sobolev ? epsilon : 0.0; }
  double effective_beta() const { return objective == Objective::sobolev ? beta : 1.0; }

  void validate() const {
    detail::require_param(std::isfinite(upsilon) && upsilon >= 0.0,
                          "upsilon must be >= 0, got " + std::to_string(upsilon));
    check_sobolev_params(effective_epsilon(), effective_beta());
    detail::require_param(std::isfinite(delta) && delta > 0.0, "delta must be > 0");
    detail::require_param(max_iter > 0, "max_iter must be positive");
    detail::require_param(temporal_step >= 1 && temporal_step <= 3, "temporal step must be 1, 2 or 3");
  }
};

enum class Termination { converged, max_iter };

inline const char* to_string(Termination t) { return t == Termination::converged ? "converged" : "max_iter"; }

struct SolveResult {
  Matrix x_hat;
  long iterations = 0;
  /// Objective value before the first step and after every step.
  std::vector<double> loss_trace;
  /// ||X^t - reference||_F, filled only when a reference was supplied.
  std::vector<double> distance_trace;
  Termination termination = Termination::max_iter;
  double wall_time = 0.0;
  /// Static baseline only: columns without any sample (returned as zeros).
  std::vector<bool> unsampled_columns;
};

/// Called with (iteration, X^iteration) for the initial iterate and after every step.
using IterateObserver = std::function<void(long, const Matrix&)>;

struct CgOptions {
  /// Steepest-descent restart period; 0 means N * M.
  long restart_interval = 0;
  const Matrix* reference = nullptr;
  IterateObserver observer;
};

namespace detail {

inline void check_problem_shapes(const Matrix& y, const SamplingMask& j, const Graph& g) {
  require_input(y.rows() == j.rows() && y.cols() == j.cols(),
                "observations are " + shape_str(y.rows(), y.cols()) + " but mask is " +
                    shape_str(j.rows(), j.cols()));
  require_input(y.rows() == g.n_nodes(), "observations have " + std::to_string(y.rows()) +
                                             " rows but graph has " + std::to_string(g.n_nodes()) +
                                             " nodes");
  require_input(y.allFinite(), "observations contain non-finite values");
}

inline void select_sampled(Matrix& x, const Matrix& y, const Matrix& mask) {
  x = (mask.array() != 0.0).select(y, x);
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace detail

/// f(X) = 1/2 ||J o X - Y||_F^2 + upsilon/2 tr((X D)^T (L + eps I)^beta (X D)).
///
/// For gr_static the smoothness term is the snapshot-wise tr(X^T L X).
class ReconstructionProblem {
 public:
  struct Evaluation {
    double objective;
    Matrix gradient;
  };

  ReconstructionProblem(Matrix y, SamplingMask mask, const Graph& g, const SolverConfig& config)
      : y_(std::move(y)),
        mask_(std::move(mask)),
        config_(config),
        k_(sparse_laplacian(g), config.effective_epsilon(), config.effective_beta()) {
    detail::check_problem_shapes(y_, mask_, g);
    config_.validate();
    if (config_.objective != Objective::gr_static) {
      d_.emplace(y_.cols(), config_.temporal_step);
    }
  }

  const Matrix& observations() const { return y_; }
  const SamplingMask& mask() const { return mask_; }
  const SolverConfig& config() const { return config_; }
  const SobolevOperator& smoothness_operator() const { return k_; }
  const std::optional<TemporalOperator>& temporal_operator() const { return d_; }
  Eigen::Index rows() const { return y_.rows(); }
  Eigen::Index cols() const { return y_.cols(); }

  /// 1/2 tr((X D)^T K (X D)) without the upsilon weight.
  double smoothness(const Matrix& x) const {
    if (!d_) return 0.5 * detail::frobenius_inner(x, k_.apply(x));
    const Matrix xd = d_->apply(x);
    return 0.5 * detail::frobenius_inner(xd, k_.apply(xd));
  }

  /// K X D D^T (the smoothness gradient without upsilon).
  Matrix smoothness_gradient(const Matrix& x) const {
    if (!d_) return k_.apply(x);
    return d_->apply_transpose(k_.apply(d_->apply(x)));
  }

  double objective(const Matrix& x) const { return evaluate(x).objective; }
  Matrix gradient(const Matrix& x) const { return evaluate(x).gradient; }

  /// Objective and gradient sharing one application of K.
  Evaluation evaluate(const Matrix& x) const {
    check_shape(x);
    const Matrix residual = mask_.matrix().cwiseProduct(x) - y_;
    Matrix grad;
    double smooth;
    if (d_) {
      const Matrix xd = d_->apply(x);
      const Matrix kxd = k_.apply(xd);
      smooth = detail::frobenius_inner(xd, kxd);
      grad = d_->apply_transpose(kxd);
    } else {
      grad = k_.apply(x);
      smooth = detail::frobenius_inner(x, grad);
    }
    grad *= config_.upsilon;
    grad += residual;
    return {0.5 * residual.squaredNorm() + 0.5 * config_.upsilon * smooth, std::move(grad)};
  }

  /// H V = J o V + upsilon K V D D^T.
  Matrix hessian_action(const Matrix& v) const {
    check_shape(v);
    Matrix out = smoothness_gradient(v);
    out *= config_.upsilon;
    out += mask_.matrix().cwiseProduct(v);
    return out;
  }

 private:
  void check_shape(const Matrix& x) const {
    detail::require_input(x.rows() == y_.rows() && x.cols() == y_.cols(),
                          "iterate is " + detail::shape_str(x.rows(), x.cols()) + ", expected " +
                              detail::shape_str(y_.rows(), y_.cols()));
  }

  Matrix y_;
  SamplingMask mask_;
  SolverConfig config_;
  SobolevOperator k_;
  std::optional<TemporalOperator> d_;
};

inline double objective(const Matrix& x, const Matrix& y, const SamplingMask& j, const Graph& g,
                        const SolverConfig& config) {
  return ReconstructionProblem(y, j, g, config).objective(x);
}

inline Matrix gradient(const Matrix& x, const Matrix& y, const SamplingMask& j, const Graph& g,
                       const SolverConfig& config) {
  return ReconstructionProblem(y, j, g, config).gradient(x);
}

/// Fletcher-Reeves conjugate gradient with exact line search on a quadratic.
///
/// mu = -<dX, grad f(X)> / <dX, H dX>, dX <- -grad f + gamma dX with
/// gamma = ||grad_t||^2 / ||grad_{t-1}||^2. Stops when ||dX||_F <= delta.
/// The direction is reset to steepest descent every `restart_interval` steps
/// and whenever it stops being a descent direction.
template <class Problem>
SolveResult conjugate_gradient(const Problem& problem, Matrix x, const SolverConfig& config,
                               const CgOptions& options = {}) {
  detail::Stopwatch clock;
  SolveResult out;
  const long restart = options.restart_interval > 0
                           ? options.restart_interval
                           : static_cast<long>(std::max<Eigen::Index>(1, x.size()));
  auto record = [&](long it) {
    if (options.reference) out.distance_trace.push_back((x - *options.reference).norm());
    if (options.observer) options.observer(it, x);
  };

  auto eval = problem.evaluate(x);
  out.loss_trace.push_back(eval.objective);
  record(0);
  Matrix g = std::move(eval.gradient);
  Matrix dir = -g;
  double gg = g.squaredNorm();
  out.termination = Termination::max_iter;

  for (long it = 0; it < config.max_iter; ++it) {
    if (dir.norm() <= config.delta) {
      out.termination = Termination::converged;
      break;
    }
    const Matrix hd = problem.hessian_action(dir);
    const double denom = detail::frobenius_inner(dir, hd);
    if (std::abs(denom) < 1e-300) {
      out.termination = Termination::converged;
      break;
    }
    const double mu = -detail::frobenius_inner(dir, g) / denom;
    x += mu * dir;
    out.iterations = it + 1;

    eval = problem.evaluate(x);
    if (!std::isfinite(eval.objective) || !std::isfinite(mu))
      throw NumericError("conjugate gradient produced a non-finite value", it + 1);
    out.loss_trace.push_back(eval.objective);
    record(it + 1);

    const double gg_new = eval.gradient.squaredNorm();
    const double gamma = gg > 0.0 ? gg_new / gg : 0.0;
    g = std::move(eval.gradient);
    gg = gg_new;
    dir = gamma * dir - g;
    if ((it + 1) % restart == 0 || detail::frobenius_inner(dir, g) >= 0.0) dir = -g;
  }
  out.x_hat = std::move(x);
  out.wall_time = clock.seconds();
  return out;
}

/// Conjugate gradient on the noisy problem, started from X^0 = Y.
inline SolveResult solve_cg(const Matrix& y, const SamplingMask& j, const Graph& g,
                            const SolverConfig& config, const CgOptions& options = {}) {
  const ReconstructionProblem problem(y, j, g, config);
  return conjugate_gradient(problem, y, problem.config(), options);
}

namespace detail {

/// One snapshot of the static baseline: 1/2 ||j o x - y||^2 + upsilon/2 x^T L x.
class StaticColumnProblem {
 public:
  StaticColumnProblem(const SparseMatrix& l, Vector y, Vector j, double upsilon)
      : l_(l), y_(std::move(y)), j_(std::move(j)), upsilon_(upsilon) {}

  ReconstructionProblem::Evaluation evaluate(const Matrix& x) const {
    const Vector residual = j_.cwiseProduct(x.col(0)) - y_;
    const Vector lx = l_ * x.col(0);
    Matrix grad = upsilon_ * lx + residual;
    return {0.5 * residual.squaredNorm() + 0.5 * upsilon_ * x.col(0).dot(lx), std::move(grad)};
  }

  Matrix hessian_action(const Matrix& v) const {
    Matrix out = upsilon_ * (l_ * v.col(0)) + j_.cwiseProduct(v.col(0));
    return out;
  }

 private:
  const SparseMatrix& l_;
  Vector y_;
  Vector j_;
  double upsilon_;
};

}  // namespace detail

/// Graph-regularized reconstruction of each snapshot on its own.
///
/// Columns without samples come back as zeros and are flagged. `iterations`
/// is the largest per-column count; the loss trace sums the per-column
/// objectives, holding each column at its final value once it has stopped.
inline SolveResult solve_gr_static(const Matrix& y, const SamplingMask& j, const Graph& g,
                                   SolverConfig config) {
  detail::Stopwatch clock;
  config.objective = Objective::gr_static;
  detail::check_problem_shapes(y, j, g);
  config.validate();
  const SparseMatrix l = sparse_laplacian(g);

  SolveResult out;
  out.x_hat = Matrix::Zero(y.rows(), y.cols());
  out.unsampled_columns.assign(static_cast<std::size_t>(y.cols()), false);
  out.termination = Termination::converged;
  std::vector<std::vector<double>> traces;
  for (Eigen::Index t = 0; t < y.cols(); ++t) {
    if (j.matrix().col(t).sum() == 0.0) {
      out.unsampled_columns[static_cast<std::size_t>(t)] = true;
      continue;
    }
    const detail::StaticColumnProblem col(l, y.col(t), j.matrix().col(t), config.upsilon);
    CgOptions opts;
    opts.restart_interval = static_cast<long>(y.rows());
    SolveResult r = conjugate_gradient(col, Matrix(y.col(t)), config, opts);
    out.x_hat.col(t) = r.x_hat.col(0);
    out.iterations = std::max(out.iterations, r.iterations);
    if (r.termination == Termination::max_iter) out.termination = Termination::max_iter;
    traces.push_back(std::move(r.loss_trace));
  }
  out.loss_trace.assign(static_cast<std::size_t>(out.iterations + 1), 0.0);
  for (const auto& tr : traces)
    for (std::size_t i = 0; i < out.loss_trace.size(); ++i) out.loss_trace[i] += tr[std::min(i, tr.size() - 1)];
  out.wall_time = clock.seconds();
  return out;
}

/// Default projected-gradient step 1 / ((lambda_N + eps)^beta * lambda_max(D D^T)).
inline double default_projection_step(const ReconstructionProblem& problem) {
  const double dd = problem.temporal_operator() ? problem.temporal_operator()->gram_lambda_max() : 1.0;
  const double kmax = problem.smoothness_operator().lambda_max();
  const double denom = kmax * dd;
  return denom > 0.0 ? 1.0 / denom : 1.0;
}

/// Projected gradient on min 1/2 tr((X D)^T K (X D)) s.t. J o X = Y.
///
/// The projection copies Y into the sampled entries, so they are preserved
/// bit-for-bit at every iterate. Stops when ||X^{t+1} - X^t||_F <= delta.
/// The loss trace holds the unweighted smoothness term 1/2 tr(...).
inline SolveResult solve_noiseless(const Matrix& y, const SamplingMask& j, const Graph& g,
                                   const SolverConfig& config, std::optional<double> step = std::nullopt,
                                   const CgOptions& options = {}) {
  detail::Stopwatch clock;
  detail::require_input(!j.empty(), "noiseless solver needs at least one sample");
  SolverConfig cfg = config;
  if (cfg.objective == Objective::gr_static) cfg.objective = Objective::tgsr;
  const ReconstructionProblem problem(y, j, g, cfg);
  const double xi = step ? *step : default_projection_step(problem);
  detail::require_param(std::isfinite(xi) && xi > 0.0, "projection step must be positive");

  SolveResult out;
  Matrix x = Matrix::Zero(y.rows(), y.cols());
  detail::select_sampled(x, y, j.matrix());
  auto record = [&](long it) {
    out.loss_trace.push_back(problem.smoothness(x));
    if (options.reference) out.distance_trace.push_back((x - *options.reference).norm());
    if (options.observer) options.observer(it, x);
  };
  record(0);
  out.termination = Termination::max_iter;
  for (long it = 0; it < cfg.max_iter; ++it) {
    Matrix next = x - xi * problem.smoothness_gradient(x);
    detail::select_sampled(next, y, j.matrix());
    const double moved = (next - x).norm();
    if (!std::isfinite(moved)) throw NumericError("projected gradient produced a non-finite value", it + 1);
    if (moved <= cfg.delta) {
      out.termination = Termination::converged;
      break;
    }
    x = std::move(next);
    out.iterations = it + 1;
    record(it + 1);
  }
  out.x_hat = std::move(x);
  out.wall_time = clock.seconds();
  return out;
}

/// Largest N*M accepted by the dense routines.
inline constexpr Eigen::Index kDenseGuard = 4000;

inline void require_dense_size(Eigen::Index n, Eigen::Index m, const char* what) {
  if (n * m > kDenseGuard)
    throw SizeGuardError(std::string(what) + ": N*M = " + std::to_string(n * m) +
                         " exceeds the dense limit of " + std::to_string(kDenseGuard));
}

/// Dense Hessian Q + upsilon (D D^T) kron K with Q = diag(vec(J)), vec column-major.
inline Matrix assemble_hessian(const SamplingMask& j, const Matrix& k, const Matrix& gram, double upsilon) {
  const Eigen::Index nm = j.rows() * j.cols();
  Matrix h = upsilon * Matrix(Eigen::kroneckerProduct(gram, k));
  h.diagonal() += Eigen::Map<const Vector>(j.matrix().data(), nm);
  return h;
}

struct OracleSolution {
  Matrix x;
  bool singular = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// Solves the stationarity system (Q + upsilon (D D^T) kron K) vec(X) = Q vec(Y) densely.
///
/// When lambda_min <= 1e-10 lambda_max the pseudo-inverse (minimum-norm
/// solution) is used and `singular` is set. gr_static uses the block-diagonal
/// I kron L Hessian.
inline OracleSolution dense_oracle_solve(const Matrix& y, const SamplingMask& j, const Graph& g,
                                         const SolverConfig& config) {
  detail::check_problem_shapes(y, j, g);
  config.validate();
  require_dense_size(y.rows(), y.cols(), "dense_oracle_solve");
  const Eigen::Index n = y.rows(), m = y.cols();
  const Matrix k = sobolev_power(laplacian(g), config.effective_epsilon(), config.effective_beta());
  const Matrix gram = config.objective == Objective::gr_static
                          ? Matrix(Matrix::Identity(m, m))
                          : TemporalOperator(m, config.temporal_step).gram();
  const Matrix h = assemble_hessian(j, k, gram, config.upsilon);
  const Matrix qy = j.matrix().cwiseProduct(y);
  const Vector rhs = Eigen::Map<const Vector>(qy.data(), n * m);

  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw NumericError("oracle eigendecomposition failed", 0);
  const Vector& lam = es.eigenvalues();
  OracleSolution out;
  out.min_eigenvalue = lam(0);
  out.max_eigenvalue = lam(lam.size() - 1);
  const double cut = 1e-10 * std::max(std::abs(out.max_eigenvalue), 1e-300);
  out.singular = out.min_eigenvalue <= cut;
  Vector coeff = es.eigenvectors().transpose() * rhs;
  for (Eigen::Index i = 0; i < lam.size(); ++i) coeff(i) = lam(i) > cut ? coeff(i) / lam(i) : 0.0;
  const Vector z = es.eigenvectors() * coeff;
  out.x = Eigen::Map<const Matrix>(z.data(), n, m);
  return out;
}

/// Dispatches on config.objective: CG for tgsr and sobolev, per-column CG for gr_static.
inline SolveResult reconstruct(const Matrix& y, const SamplingMask& j, const Graph& g,
                               const SolverConfig& config, const CgOptions& options = {}) {
  if (config.objective == Objective::gr_static) return solve_gr_static(y, j, g, config);
  return solve_cg(y, j, g, config, options);
}

}  // namespace tvgsr
