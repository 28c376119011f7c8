#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "tvgsr/error.hpp"
#include "tvgsr/graph.hpp"
#include "tvgsr/io.hpp"
#include "tvgsr/random.hpp"
#include "tvgsr/sampling.hpp"
#include "tvgsr/solvers.hpp"

namespace tvgsr {

// ---------------------------------------------------------------- metrics

namespace detail {
inline void require_same_length(const Vector& a, const Vector& b, const char* what) {
  require_input(a.size() == b.size(), std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                                          " vs " + std::to_string(b.size()) + ")");
  require_input(a.size() > 0, std::string(what) + ": empty evaluation set");
}
}  // namespace detail

inline double rmse(const Vector& x_hat, const Vector& x_star) {
  detail::require_same_length(x_hat, x_star, "rmse");
  return std::sqrt((x_hat - x_star).squaredNorm() / static_cast<double>(x_hat.size()));
}

inline double mae(const Vector& x_hat, const Vector& x_star) {
  detail::require_same_length(x_hat, x_star, "mae");
  return (x_hat - x_star).cwiseAbs().sum() / static_cast<double>(x_hat.size());
}

struct MapeResult {
  double value = 0.0;       // fraction, not percent
  Eigen::Index excluded = 0;  // entries with zero ground truth
};

/// Mean of |(x* - x_hat) / x*| over entries with x* != 0.
inline MapeResult mape(const Vector& x_hat, const Vector& x_star) {
  detail::require_same_length(x_hat, x_star, "mape");
  MapeResult r;
  double acc = 0.0;
  Eigen::Index used = 0;
  for (Eigen::Index i = 0; i < x_star.size(); ++i) {
    if (x_star(i) == 0.0) {
      ++r.excluded;
      continue;
    }
    acc += std::abs((x_star(i) - x_hat(i)) / x_star(i));
    ++used;
  }
  r.value = used > 0 ? acc / static_cast<double>(used) : 0.0;
  return r;
}

struct Metrics {
  double rmse = 0.0;
  double mae = 0.0;
  double mape = 0.0;
  Eigen::Index n_eval = 0;
  Eigen::Index mape_excluded = 0;
};

/// Scores x_hat against the truth on the entries the mask hides.
/// With nothing hidden the metrics are zero and n_eval is 0.
inline Metrics score_hidden(const Matrix& x_hat, const Matrix& truth, const SamplingMask& mask) {
  detail::require_input(x_hat.rows() == truth.rows() && x_hat.cols() == truth.cols() &&
                            mask.rows() == truth.rows() && mask.cols() == truth.cols(),
                        "score_hidden: shape mismatch");
  std::vector<double> a, b;
  for (Eigen::Index t = 0; t < truth.cols(); ++t)
    for (Eigen::Index i = 0; i < truth.rows(); ++i)
      if (!mask.observed(i, t)) {
        a.push_back(x_hat(i, t));
        b.push_back(truth(i, t));
      }
  Metrics m;
  m.n_eval = static_cast<Eigen::Index>(a.size());
  if (a.empty()) return m;
  const Eigen::Map<const Vector> va(a.data(), m.n_eval), vb(b.data(), m.n_eval);
  m.rmse = rmse(va, vb);
  m.mae = mae(va, vb);
  const auto mp = mape(va, vb);
  m.mape = mp.value;
  m.mape_excluded = mp.excluded;
  return m;
}

// ---------------------------------------------------------------- plans

enum class Regime { random_entry, snapshot, forecasting };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::random_entry: return "random_entry";
    case Regime::snapshot: return "snapshot";
    case Regime::forecasting: return "forecasting";
  }
  return "?";
}

inline Regime parse_regime(const std::string& s) {
  if (s == "random_entry" || s == "random") return Regime::random_entry;
  if (s == "snapshot") return Regime::snapshot;
  if (s == "forecasting" || s == "forecast") return Regime::forecasting;
  throw ParameterError("unknown regime '" + s + "' (expected random_entry|snapshot|forecasting)");
}

enum class SolverKind { conjugate_gradient, projected_gradient };

struct Method {
  std::string name;
  SolverConfig config;
  SolverKind solver = SolverKind::conjugate_gradient;
};

struct ExperimentPlan {
  Regime regime = Regime::random_entry;
  /// Densities in (0, 1] or forecast horizons in {1, ..., 10}.
  std::vector<double> levels;
  int repetitions = 1;
  std::vector<Method> methods;
  std::uint64_t base_seed = 0;
  /// Worker threads over (level, repetition) units; output does not depend on it.
  int jobs = 1;
  /// Additive white Gaussian measurement noise; none when unset.
  std::optional<double> snr_db;

  void validate() const {
    detail::require_param(!levels.empty(), "experiment plan has no densities/horizons");
    detail::require_param(repetitions > 0, "repetitions must be positive");
    detail::require_param(!methods.empty(), "experiment plan has no methods");
    detail::require_param(jobs >= 1, "jobs must be >= 1");
    for (double l : levels) {
      if (regime == Regime::forecasting)
        detail::require_param(l >= 1 && l <= 10 && std::floor(l) == l,
                              "forecast horizons must be integers in {1, ..., 10}");
      else
        detail::require_param(l > 0.0 && l <= 1.0, "densities must lie in (0, 1]");
    }
    for (const auto& m : methods) m.config.validate();
  }
};

/// Seed for repetition `rep` at `level`: hash(base_seed, regime, level, rep).
inline std::uint64_t repetition_seed(std::uint64_t base_seed, Regime regime, double level, long rep) {
  std::uint64_t h = hash_combine(base_seed, static_cast<std::uint64_t>(regime));
  h = hash_combine(h, std::bit_cast<std::uint64_t>(level));
  return hash_combine(h, static_cast<std::uint64_t>(rep));
}

inline SamplingMask make_mask(Regime regime, Eigen::Index n, Eigen::Index m, double level, std::uint64_t seed) {
  switch (regime) {
    case Regime::random_entry: return random_entry_mask(n, m, level, seed);
    case Regime::snapshot: return snapshot_mask(n, m, level, seed);
    case Regime::forecasting: return forecasting_mask(n, m, static_cast<Eigen::Index>(level));
  }
  throw ParameterError("unknown regime");
}

/// Y = J o (X + n), n white Gaussian with 10 log10(mean(X^2) / var(n)) = snr_db.
inline Matrix observe(const Matrix& truth, const SamplingMask& mask, std::optional<double> snr_db,
                      std::uint64_t seed) {
  if (!snr_db) return apply_mask(mask, truth);
  detail::require_param(std::isfinite(*snr_db), "snr_db must be finite");
  const double power = truth.squaredNorm() / static_cast<double>(std::max<Eigen::Index>(1, truth.size()));
  const double sd = std::sqrt(power / std::pow(10.0, *snr_db / 10.0));
  Rng rng(hash_combine(seed, 0x6e6f697365ULL));
  Matrix noisy = truth;
  for (Eigen::Index t = 0; t < noisy.cols(); ++t)
    for (Eigen::Index i = 0; i < noisy.rows(); ++i) noisy(i, t) += sd * rng.normal();
  return apply_mask(mask, noisy);
}

inline SolveResult run_method(const Method& method, const Matrix& y, const SamplingMask& j, const Graph& g,
                              const CgOptions& options = {}) {
  if (method.solver == SolverKind::projected_gradient)
    return solve_noiseless(y, j, g, method.config, std::nullopt, options);
  return reconstruct(y, j, g, method.config, options);
}

struct ResultRow {
  std::string method;
  Regime regime = Regime::random_entry;
  double level = 0.0;
  int repetition = 0;
  Metrics metrics;
  long iterations = 0;
  double wall_time = 0.0;
  Termination termination = Termination::max_iter;
  std::uint64_t mask_digest = 0;
};

struct AggregateRow {
  std::string method;
  Regime regime = Regime::random_entry;
  double level = 0.0;
  int repetitions = 0;
  double rmse = 0.0;
  double mae = 0.0;
  double mape = 0.0;
  double iterations = 0.0;
  double wall_time = 0.0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;  // ordered by (level, repetition, method)
  std::vector<AggregateRow> aggregates;  // ordered by (level, method)

  const AggregateRow& aggregate(const std::string& method, double level) const {
    for (const auto& a : aggregates)
      if (a.method == method && a.level == level) return a;
    throw ParameterError("no aggregate for method '" + method + "' at level " + std::to_string(level));
  }
};

/// Arithmetic means per (level, method), in first-appearance order.
inline std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows) {
  std::vector<AggregateRow> out;
  for (const auto& r : rows) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const AggregateRow& a) { return a.method == r.method && a.level == r.level; });
    if (it == out.end()) {
      out.push_back({r.method, r.regime, r.level});
      it = out.end() - 1;
    }
    it->repetitions += 1;
    it->rmse += r.metrics.rmse;
    it->mae += r.metrics.mae;
    it->mape += r.metrics.mape;
    it->iterations += static_cast<double>(r.iterations);
    it->wall_time += r.wall_time;
  }
  for (auto& a : out) {
    const double c = static_cast<double>(a.repetitions);
    a.rmse /= c;
    a.mae /= c;
    a.mape /= c;
    a.iterations /= c;
    a.wall_time /= c;
  }
  std::stable_sort(out.begin(), out.end(), [](const AggregateRow& a, const AggregateRow& b) { return a.level < b.level; });
  return out;
}

namespace detail {

/// Runs f(i) for i in [0, count) on up to `jobs` threads; rethrows the
/// lowest-index failure.
template <class F>
void parallel_for(std::size_t count, int jobs, F&& f) {
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&](std::size_t start, std::size_t stride) {
    for (std::size_t i = start; i < count; i += stride) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, std::min<int>(jobs, static_cast<int>(count))));
  if (threads <= 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::string context(const std::string& method, double level, long rep) {
  return "method=" + method + ", level=" + io::format_number(level) + ", repetition=" + std::to_string(rep);
}

}  // namespace detail

/// Monte-Carlo protocol: per (level, repetition) one mask and one noise draw,
/// shared by every method. Metrics compare against the clean truth on hidden
/// entries only.
inline ExperimentResult run_experiment(const ExperimentPlan& plan, const Matrix& truth, const Graph& g) {
  plan.validate();
  detail::require_input(truth.rows() == g.n_nodes(), "dataset has " + std::to_string(truth.rows()) +
                                                         " nodes, graph has " + std::to_string(g.n_nodes()));
  const std::size_t n_methods = plan.methods.size();
  const std::size_t reps = static_cast<std::size_t>(plan.repetitions);
  const std::size_t units = plan.levels.size() * reps;
  std::vector<ResultRow> rows(units * n_methods);

  detail::parallel_for(units, plan.jobs, [&](std::size_t u) {
    const double level = plan.levels[u / reps];
    const int rep = static_cast<int>(u % reps);
    const std::uint64_t seed = repetition_seed(plan.base_seed, plan.regime, level, rep);
    const SamplingMask mask = make_mask(plan.regime, truth.rows(), truth.cols(), level, seed);
    const Matrix y = observe(truth, mask, plan.snr_db, seed);
    for (std::size_t k = 0; k < n_methods; ++k) {
      const Method& method = plan.methods[k];
      SolveResult res;
      try {
        res = run_method(method, y, mask, g);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " [" + detail::context(method.name, level, rep) + "]",
                           e.iteration());
      }
      ResultRow& row = rows[u * n_methods + k];
      row.method = method.name;
      row.regime = plan.regime;
      row.level = level;
      row.repetition = rep;
      row.metrics = score_hidden(res.x_hat, truth, mask);
      row.iterations = res.iterations;
      row.wall_time = res.wall_time;
      row.termination = res.termination;
      row.mask_digest = mask.digest();
    }
  });
  ExperimentResult out;
  out.rows = std::move(rows);
  out.aggregates = aggregate(out.rows);
  return out;
}

inline void write_results(const std::string& path, const std::vector<ResultRow>& rows, bool wall_time = true) {
  auto out = io::detail::open_out(path);
  out << "method,regime,density_or_horizon,repetition,rmse,mae,mape,iterations,wall_time_s\n";
  for (const auto& r : rows)
    out << r.method << ',' << to_string(r.regime) << ',' << io::format_number(r.level) << ',' << r.repetition << ','
        << io::format_number(r.metrics.rmse) << ',' << io::format_number(r.metrics.mae) << ','
        << io::format_number(r.metrics.mape) << ',' << r.iterations << ','
        << io::format_number(wall_time ? r.wall_time : 0.0) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline void write_aggregates(const std::string& path, const std::vector<AggregateRow>& rows, bool wall_time = true) {
  auto out = io::detail::open_out(path);
  out << "method,regime,density_or_horizon,repetitions,rmse,mae,mape,iterations,wall_time_s\n";
  for (const auto& r : rows)
    out << r.method << ',' << to_string(r.regime) << ',' << io::format_number(r.level) << ',' << r.repetitions << ','
        << io::format_number(r.rmse) << ',' << io::format_number(r.mae) << ',' << io::format_number(r.mape) << ','
        << io::format_number(r.iterations) << ',' << io::format_number(wall_time ? r.wall_time : 0.0) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

// ---------------------------------------------------------------- convergence

struct ConvergenceRecord {
  std::string method;
  std::vector<long> iterations;  // per repetition
  std::vector<std::vector<double>> loss_traces;
  std::vector<std::uint64_t> mask_digests;
  double mean_iterations = 0.0;
};

/// Loss traces and iteration counts for several configs on shared random-entry masks.
/// Requires at least one tgsr config and one sobolev config.
inline std::vector<ConvergenceRecord> convergence_comparison(const Matrix& truth, const Graph& g, double density,
                                                             const std::vector<Method>& methods, int repetitions,
                                                             std::uint64_t base_seed = 0,
                                                             std::optional<double> snr_db = std::nullopt) {
  const bool has_tgsr = std::any_of(methods.begin(), methods.end(),
                                    [](const Method& m) { return m.config.objective == Objective::tgsr; });
  const bool has_sobolev = std::any_of(methods.begin(), methods.end(),
                                       [](const Method& m) { return m.config.objective == Objective::sobolev; });
  detail::require_param(has_tgsr && has_sobolev, "convergence_comparison needs a tgsr and a sobolev config");
  detail::require_param(repetitions > 0, "repetitions must be positive");
  std::vector<ConvergenceRecord> out(methods.size());
  for (std::size_t k = 0; k < methods.size(); ++k) out[k].method = methods[k].name;
  for (int rep = 0; rep < repetitions; ++rep) {
    const std::uint64_t seed = repetition_seed(base_seed, Regime::random_entry, density, rep);
    const SamplingMask mask = random_entry_mask(truth.rows(), truth.cols(), density, seed);
    const Matrix y = observe(truth, mask, snr_db, seed);
    for (std::size_t k = 0; k < methods.size(); ++k) {
      SolveResult r = run_method(methods[k], y, mask, g);
      out[k].iterations.push_back(r.iterations);
      out[k].loss_traces.push_back(std::move(r.loss_trace));
      out[k].mask_digests.push_back(mask.digest());
    }
  }
  for (auto& rec : out) {
    double s = 0.0;
    for (long it : rec.iterations) s += static_cast<double>(it);
    rec.mean_iterations = s / static_cast<double>(rec.iterations.size());
  }
  return out;
}

// ---------------------------------------------------------------- tuning

struct TuningGrid {
  std::vector<double> upsilon{1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4};
  std::vector<double> epsilon{0.01, 0.05, 0.1, 0.5, 1.0, 2.0};
};

struct TuningOutcome {
  SolverConfig config;
  double rmse = std::numeric_limits<double>::infinity();
};

/// Grid search on held-out masks, drawn from seeds disjoint from the experiment's.
///
/// upsilon is always searched; epsilon only for the sobolev objective (unless
/// `search_epsilon` is false). Lowest mean hidden-entry RMSE wins; ties keep
/// the earlier grid point.
inline TuningOutcome tune_config(const SolverConfig& base, const Matrix& truth, const Graph& g, Regime regime,
                                 double level, const TuningGrid& grid, std::uint64_t seed, int holdout = 1,
                                 bool search_epsilon = true, std::optional<double> snr_db = std::nullopt) {
  detail::require_param(holdout > 0, "holdout repetitions must be positive");
  std::vector<SamplingMask> masks;
  std::vector<Matrix> ys;
  for (int h = 0; h < holdout; ++h) {
    const std::uint64_t s = repetition_seed(hash_combine(seed, 0x74756e65ULL), regime, level, h);
    masks.push_back(make_mask(regime, truth.rows(), truth.cols(), level, s));
    ys.push_back(observe(truth, masks.back(), snr_db, s));
  }
  const std::vector<double> eps_grid =
      (base.objective == Objective::sobolev && search_epsilon) ? grid.epsilon : std::vector<double>{base.epsilon};
  const std::vector<double> ups_grid = grid.upsilon.empty() ? std::vector<double>{base.upsilon} : grid.upsilon;
  TuningOutcome best;
  best.config = base;
  for (double ups : ups_grid) {
    for (double eps : eps_grid) {
      SolverConfig c = base;
      c.upsilon = ups;
      c.epsilon = eps;
      double acc = 0.0;
      for (std::size_t h = 0; h < masks.size(); ++h)
        acc += score_hidden(reconstruct(ys[h], masks[h], g, c).x_hat, truth, masks[h]).rmse;
      acc /= static_cast<double>(masks.size());
      if (acc < best.rmse) {
        best.rmse = acc;
        best.config = c;
      }
    }
  }
  return best;
}

}  // namespace tvgsr
