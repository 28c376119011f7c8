// tvgsr command-line driver.
//
// Every subcommand accepts --config FILE (flat key=value, keys are long option
// names); explicit flags override config entries. Each run writes config.txt
// into its output directory, which reproduces the run when passed back as
// --config.
//
// Exit codes: 0 success, 1 usage or parameter error, 2 I/O or input error,
// 3 numeric failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tvgsr/tvgsr.hpp"

namespace fs = std::filesystem;
using namespace tvgsr;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumeric = 3;

std::string to_text(double v) { return io::format_number(v); }
std::string to_text(int v) { return std::to_string(v); }
std::string to_text(long v) { return std::to_string(v); }
std::string to_text(std::uint64_t v) { return std::to_string(v); }
std::string to_text(bool v) { return v ? "true" : "false"; }
std::string to_text(const std::string& v) { return v; }

/// Console-only rendering; files always get 17 significant digits.
std::string brief(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    double v = 0.0;
    if (!io::detail::parse_double(io::detail::trim(tok), v))
      throw ParameterError(std::string(what) + ": cannot parse '" + tok + "' as a number");
    out.push_back(v);
  }
  if (out.empty()) throw ParameterError(std::string(what) + " is empty");
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (auto t = io::detail::trim(tok); !t.empty()) out.emplace_back(t);
  return out;
}

/// A subcommand whose options are echoed back as key=value.
class Command {
 public:
  Command(CLI::App& parent, const std::string& name, const std::string& help)
      : app_(parent.add_subcommand(name, help)) {
    app_->add_option("--config", config_, "key=value file; explicit flags override it");
    app_->add_option("--out", out_, "output directory")->required();
  }

  template <class T>
  CLI::Option* option(const std::string& name, T& var, const std::string& help) {
    echo_.emplace_back(name, [&var] { return to_text(var); });
    return app_->add_option("--" + name, var, help)->capture_default_str();
  }

  CLI::Option* flag(const std::string& name, bool& var, const std::string& help) {
    echo_.emplace_back(name, [&var] { return to_text(var); });
    return app_->add_flag("--" + name, var, help);
  }

  CLI::App* app() const { return app_; }
  const std::string& out() const { return out_; }

  fs::path prepare_out() const {
    std::error_code ec;
    fs::create_directories(out_, ec);
    if (ec) throw IoError("cannot create output directory '" + out_ + "': " + ec.message());
    io::Manifest m;
    for (const auto& [k, get] : echo_) m.emplace_back(k, get());
    io::write_manifest((fs::path(out_) / "config.txt").string(), m);
    return fs::path(out_);
  }

 private:
  CLI::App* app_;
  std::string config_;
  std::string out_;
  std::vector<std::pair<std::string, std::function<std::string()>>> echo_;
};

/// Inserts --key=value for every config entry ahead of the explicit arguments.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> rest;
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config.empty() || rest.empty()) return rest;
  std::vector<std::string> out{rest.front()};
  for (const auto& [k, v] : io::read_manifest(config))
    if (!v.empty()) out.push_back("--" + k + "=" + v);  // empty means default
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

// ---------------------------------------------------------------- shared loaders

struct GraphSource {
  std::string path;
  std::string laplacian;  // empty: take the manifest's value, else combinatorial

  void add_to(Command& c) {
    c.option("graph", path, "graph directory (adjacency.csv + manifest.txt) or adjacency file")->required();
    c.option("laplacian", laplacian, "combinatorial | normalized (default: from graph manifest)");
  }

  Graph load() const {
    fs::path adj = path;
    std::string kind = laplacian;
    if (fs::is_directory(adj)) {
      const fs::path manifest = adj / "manifest.txt";
      if (kind.empty() && fs::exists(manifest)) {
        const auto m = io::read_manifest(manifest.string());
        if (auto it = m.find("laplacian"); it != m.end()) kind = it->second;
      }
      adj /= "adjacency.csv";
    }
    return Graph::from_adjacency(io::read_matrix(adj.string()).values,
                                 parse_laplacian_kind(kind.empty() ? "combinatorial" : kind));
  }
};

struct MaskSource {
  std::string file;
  std::string regime = "random_entry";
  double level = 0.5;
  std::uint64_t seed = 0;

  void add_to(Command& c) {
    c.option("mask", file, "0/1 mask file; when absent a mask is drawn from --regime/--level/--seed");
    c.option("regime", regime, "random_entry | snapshot | forecasting");
    c.option("level", level, "density in (0, 1] or forecast horizon");
    c.option("seed", seed, "mask seed");
  }

  SamplingMask load(Eigen::Index n, Eigen::Index m) const {
    if (!file.empty()) {
      SamplingMask j(io::read_matrix(file).values);
      detail::require_input(j.rows() == n && j.cols() == m,
                            "mask '" + file + "' is " + detail::shape_str(j.rows(), j.cols()) + ", expected " +
                                detail::shape_str(n, m));
      return j;
    }
    return make_mask(parse_regime(regime), n, m, level, seed);
  }
};

struct SolverFlags {
  std::string objective = "sobolev";
  double upsilon = 1.0;
  double epsilon = 0.1;
  double beta = 1.0;
  double delta = 1e-6;
  long max_iter = 20000;
  int step = 1;

  void add_to(Command& c) {
    c.option("objective", objective, "sobolev | tgsr | gr_static");
    c.option("upsilon", upsilon, "regularization weight");
    c.option("epsilon", epsilon, "Sobolev shift");
    c.option("beta", beta, "Sobolev exponent");
    c.option("delta", delta, "stopping tolerance on the step norm");
    c.option("max-iter", max_iter, "iteration cap");
    c.option("step", step, "temporal difference step s (1, 2 or 3)");
  }

  SolverConfig config() const {
    SolverConfig cfg;
    cfg.objective = parse_objective(objective);
    cfg.upsilon = upsilon;
    cfg.epsilon = epsilon;
    cfg.beta = beta;
    cfg.delta = delta;
    cfg.max_iter = max_iter;
    cfg.temporal_step = step;
    cfg.validate();
    return cfg;
  }
};

// ---------------------------------------------------------------- build-graph

struct BuildGraph {
  Command cmd;
  std::string coords;
  int k = 10;
  std::string laplacian = "combinatorial";

  explicit BuildGraph(CLI::App& app) : cmd(app, "build-graph", "Gaussian k-NN graph from a coordinate file") {
    cmd.option("coords", coords, "coordinate file (node_id, latitude, longitude)")->required();
    cmd.option("k", k, "neighbors per node");
    cmd.option("laplacian", laplacian, "combinatorial | normalized");
  }

  int run() const {
    const auto cf = io::read_coordinates(coords);
    const Graph g = build_knn_graph(cf.coords, k, parse_laplacian_kind(laplacian));
    const fs::path out = cmd.prepare_out();
    io::write_matrix((out / "adjacency.csv").string(), g.dense_adjacency());
    io::write_coordinates((out / "coords.csv").string(), cf.coords, cf.node_ids);
    io::write_manifest((out / "manifest.txt").string(),
                       {{"name", fs::path(coords).stem().string()},
                        {"coords", coords},
                        {"n_nodes", std::to_string(g.n_nodes())},
                        {"n_edges", std::to_string(g.n_edges())},
                        {"k", std::to_string(k)},
                        {"laplacian", laplacian},
                        {"kernel_sigma", io::format_number(g.kernel_sigma().value_or(0.0))},
                        {"connected", to_text(g.connected())}});
    if (!g.connected()) std::cerr << "warning: graph is disconnected\n";
    std::cout << "graph: " << g.n_nodes() << " nodes, " << g.n_edges() << " edges -> " << out.string() << '\n';
    return 0;
  }
};

// ---------------------------------------------------------------- synth

struct Synth {
  Command cmd;
  long n = 100;
  double side = 100.0;
  int k = 5;
  long m = 100;
  double alpha = 1.0;
  double energy = 1e4;
  std::uint64_t seed = 0;

  explicit Synth(CLI::App& app) : cmd(app, "synth", "synthetic graph and smoothly evolving signal") {
    cmd.option("n", n, "nodes");
    cmd.option("side", side, "side of the square the nodes are drawn in");
    cmd.option("k", k, "neighbors per node");
    cmd.option("m", m, "snapshots");
    cmd.option("alpha", alpha, "norm of every innovation f_t");
    cmd.option("energy", energy, "squared norm of the first snapshot");
    cmd.option("seed", seed, "generator seed");
  }

  int run() const {
    const SyntheticGraph sg = synth_graph(n, side, k, seed);
    const TimeVaryingSignal x = synth_signal(sg.graph, m, alpha, energy, seed);
    const fs::path out = cmd.prepare_out();
    io::write_coordinates((out / "coords.csv").string(), sg.coords);
    io::write_matrix((out / "signal.csv").string(), x.values());
    io::write_matrix((out / "adjacency.csv").string(), sg.graph.dense_adjacency());
    io::write_manifest((out / "manifest.txt").string(),
                       {{"name", "synthetic"},
                        {"units", "arbitrary"},
                        {"n_nodes", std::to_string(n)},
                        {"n_snapshots", std::to_string(m)},
                        {"k", std::to_string(k)},
                        {"laplacian", "combinatorial"},
                        {"kernel_sigma", io::format_number(sg.graph.kernel_sigma().value_or(0.0))},
                        {"connected", to_text(sg.graph.connected())},
                        {"provenance", "tvgsr synth seed=" + std::to_string(seed)}});
    std::cout << "synthetic dataset " << n << "x" << m << " -> " << out.string() << '\n';
    return 0;
  }
};

// ---------------------------------------------------------------- sample

struct Sample {
  Command cmd;
  long n = 0;
  long m = 0;
  std::string signal;
  MaskSource mask;

  explicit Sample(CLI::App& app) : cmd(app, "sample", "draw a sampling mask and check uniqueness") {
    cmd.option("signal", signal, "take N and M from this signal file");
    cmd.option("n", n, "nodes (when --signal is absent)");
    cmd.option("m", m, "snapshots (when --signal is absent)");
    mask.add_to(cmd);
  }

  int run() const {
    Eigen::Index rows = n, cols = m;
    if (!signal.empty()) {
      const Matrix x = io::read_matrix(signal).values;
      rows = x.rows();
      cols = x.cols();
    }
    detail::require_param(rows > 0 && cols > 0, "sample needs --signal or positive --n and --m");
    const SamplingMask j = mask.load(rows, cols);
    const UniquenessReport u = check_uniqueness(j);
    const fs::path out = cmd.prepare_out();
    io::write_matrix((out / "mask.csv").string(), j.matrix());
    io::write_manifest((out / "uniqueness.txt").string(),
                       {{"observed", std::to_string(static_cast<long>(j.matrix().sum()))},
                        {"every_node_sampled", to_text(u.every_node_sampled)},
                        {"has_fiducial_time", to_text(u.has_fiducial_time)},
                        {"fiducial", u.fiducial ? std::to_string(*u.fiducial) : "none"},
                        {"unique", to_text(u.unique())}});
    std::cout << "mask " << rows << "x" << cols << ", unique=" << to_text(u.unique()) << '\n';
    return 0;
  }
};

// ---------------------------------------------------------------- reconstruct

struct Reconstruct {
  Command cmd;
  std::string signal;
  GraphSource graph;
  MaskSource mask;
  SolverFlags solver;
  std::string method = "cg";
  double snr_db = 0.0;
  bool noisy = false;
  bool oracle_check = false;

  explicit Reconstruct(CLI::App& app) : cmd(app, "reconstruct", "recover a time-varying signal from samples") {
    cmd.option("signal", signal, "ground-truth signal file; observations are its masked entries")->required();
    graph.add_to(cmd);
    mask.add_to(cmd);
    solver.add_to(cmd);
    cmd.option("solver", method, "cg | projected (noiseless projected gradient)");
    cmd.option("snr", snr_db, "measurement SNR in dB (with --noisy)");
    cmd.flag("noisy", noisy, "add white Gaussian noise at --snr");
    cmd.flag("oracle-check", oracle_check, "compare against the dense direct solve (small problems)");
  }

  int run() const {
    const Matrix truth = io::read_matrix(signal).values;
    const Graph g = graph.load();
    const SamplingMask j = mask.load(truth.rows(), truth.cols());
    const SolverConfig cfg = solver.config();
    detail::require_param(method == "cg" || method == "projected", "unknown solver '" + method + "'");
    const Matrix y = observe(truth, j, noisy ? std::optional<double>(snr_db) : std::nullopt, mask.seed);
    const SolveResult r = method == "projected" ? solve_noiseless(y, j, g, cfg) : reconstruct(y, j, g, cfg);
    const Metrics met = score_hidden(r.x_hat, truth, j);
    const fs::path out = cmd.prepare_out();
    io::write_matrix((out / "x_hat.csv").string(), r.x_hat);
    io::write_trace((out / "trace.csv").string(), r.loss_trace);
    io::Manifest rec{{"rmse", io::format_number(met.rmse)},
                     {"mae", io::format_number(met.mae)},
                     {"mape", io::format_number(met.mape)},
                     {"mape_unit", "fraction"},
                     {"mape_excluded", std::to_string(met.mape_excluded)},
                     {"n_eval", std::to_string(met.n_eval)},
                     {"iterations", std::to_string(r.iterations)},
                     {"termination", to_string(r.termination)},
                     {"wall_time_s", io::format_number(r.wall_time)}};
    int code = 0;
    if (oracle_check) {
      const OracleSolution o = dense_oracle_solve(y, j, g, cfg);
      const double rel = (r.x_hat - o.x).norm() / std::max(o.x.norm(), 1e-300);
      rec.emplace_back("oracle_rel_error", io::format_number(rel));
      rec.emplace_back("oracle_singular", to_text(o.singular));
      if (!o.singular && rel > 1e-6) {
        std::cerr << "error: solution differs from the dense oracle (relative error " << rel << ")\n";
        code = kExitNumeric;
      }
    }
    if (!r.unsampled_columns.empty()) {
      long unsampled = 0;
      for (bool b : r.unsampled_columns) unsampled += b;
      rec.emplace_back("unsampled_columns", std::to_string(unsampled));
    }
    io::write_manifest((out / "metrics.txt").string(), rec);
    std::cout << "rmse=" << brief(met.rmse) << " iterations=" << r.iterations << " ("
              << to_string(r.termination) << ")\n";
    return code;
  }
};

// ---------------------------------------------------------------- analyze

struct Analyze {
  Command cmd;
  GraphSource graph;
  MaskSource mask;
  long m = 10;
  double upsilon = 1.0;
  double beta = 1.0;
  double epsilon = 0.1;
  std::string epsilon_grid = "0,0.01,0.05,0.1,0.5,1,10,100,1000000";
  std::string betas = "0,0.5,1,2,3";
  int step = 1;

  explicit Analyze(CLI::App& app) : cmd(app, "analyze", "Hessian conditioning, Weyl brackets, spectral penalties") {
    graph.add_to(cmd);
    mask.add_to(cmd);
    cmd.option("m", m, "snapshots (when --mask is absent)");
    cmd.option("upsilon", upsilon, "regularization weight");
    cmd.option("beta", beta, "Sobolev exponent for the sweep and Weyl report");
    cmd.option("epsilon", epsilon, "Sobolev shift for the Weyl report");
    cmd.option("epsilon-grid", epsilon_grid, "comma-separated epsilon values for the condition sweep");
    cmd.option("betas", betas, "comma-separated exponents for the penalization table");
    cmd.option("step", step, "temporal difference step s");
  }

  int run() const {
    const Graph g = graph.load();
    Eigen::Index cols = m;
    if (!mask.file.empty()) cols = io::read_matrix(mask.file).values.cols();
    const SamplingMask j = mask.load(g.n_nodes(), cols);
    const TemporalOperator d(cols, step);
    const auto grid = parse_list(epsilon_grid, "epsilon-grid");
    const auto bl = parse_list(betas, "betas");
    const auto sweep = condition_sweep(g, d, upsilon, beta, grid, j);
    const WeylReport w = weyl_bounds(g, d, upsilon, epsilon, beta, j);
    const Matrix pen = eigenvalue_penalization(spectrum(laplacian(g)), bl);
    const fs::path out = cmd.prepare_out();

    {
      Matrix t(static_cast<Eigen::Index>(sweep.size()), 3);
      for (std::size_t i = 0; i < sweep.size(); ++i)
        t.row(static_cast<Eigen::Index>(i)) << sweep[i].epsilon, sweep[i].sobolev.value, sweep[i].laplacian.value;
      io::write_matrix((out / "condition_sweep.csv").string(), t, {"epsilon", "kappa_sobolev", "kappa_laplacian"});
    }
    {
      Matrix t(static_cast<Eigen::Index>(bl.size()), pen.rows() + 1);
      std::vector<std::string> header{"beta"};
      for (Eigen::Index i = 0; i < pen.rows(); ++i) header.push_back("lambda_" + std::to_string(i + 1));
      for (std::size_t c = 0; c < bl.size(); ++c) {
        t(static_cast<Eigen::Index>(c), 0) = bl[c];
        t.row(static_cast<Eigen::Index>(c)).tail(pen.rows()) = pen.col(static_cast<Eigen::Index>(c)).transpose();
      }
      io::write_matrix((out / "penalization.csv").string(), t, header);
    }
    {
      auto f = io::detail::open_out((out / "weyl_report.csv").string());
      f << "hessian,bound,value,lower,upper,pass,premise\n";
      auto emit = [&](const char* name, const HessianBounds& b) {
        const std::pair<const char*, const Bracket*> rows[] = {
            {"lambda_max", &b.lambda_max}, {"lambda_min_data", &b.lambda_min_data},
            {"lambda_min_smooth", &b.lambda_min_smooth}};
        for (const auto& [bound, br] : rows)
          f << name << ',' << bound << ',' << io::format_number(br->value) << ',' << io::format_number(br->lower)
            << ',' << io::format_number(br->upper) << ',' << to_text(br->pass) << ',' << to_text(b.premise) << '\n';
      };
      emit("laplacian", w.laplacian);
      emit("sobolev", w.sobolev);
      if (!f) throw IoError("write failed for weyl_report.csv");
    }
    std::cout << "weyl brackets " << (w.all_pass() ? "pass" : "FAIL") << "; sweep rows " << sweep.size() << '\n';
    return 0;
  }
};

// ---------------------------------------------------------------- benchmark

/// Plan file (key=value):
///   regime=random_entry  levels=0.3,0.5  repetitions=20  base_seed=0  snr_db=20 (optional)
///   methods=tgsr,graphtrss
///   <name>.objective=sobolev  <name>.upsilon=1  <name>.epsilon=0.1  <name>.beta=1
///   <name>.delta=1e-6  <name>.max_iter=20000  <name>.step=1  <name>.solver=cg|projected
ExperimentPlan read_plan(const std::string& path) {
  const auto kv = io::read_manifest(path);
  auto get = [&](const std::string& k) -> const std::string* {
    auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto num = [&](const std::string& k, double fallback) {
    const std::string* v = get(k);
    return v ? parse_list(*v, k.c_str()).front() : fallback;
  };
  ExperimentPlan p;
  if (const auto* v = get("regime")) p.regime = parse_regime(*v);
  const std::string* levels = get("levels");
  detail::require_param(levels != nullptr, path + ": plan needs levels=");
  p.levels = parse_list(*levels, "levels");
  p.repetitions = static_cast<int>(num("repetitions", 1));
  p.base_seed = static_cast<std::uint64_t>(num("base_seed", 0));
  if (get("snr_db")) p.snr_db = num("snr_db", 0.0);
  const std::string* names = get("methods");
  detail::require_param(names != nullptr, path + ": plan needs methods=");
  std::vector<std::string> known{"regime", "levels", "repetitions", "base_seed", "snr_db", "methods"};
  for (const auto& name : split_names(*names)) {
    Method m;
    m.name = name;
    const std::string pre = name + ".";
    if (const auto* v = get(pre + "objective")) m.config.objective = parse_objective(*v);
    m.config.upsilon = num(pre + "upsilon", m.config.upsilon);
    m.config.epsilon = num(pre + "epsilon", m.config.epsilon);
    m.config.beta = num(pre + "beta", m.config.beta);
    m.config.delta = num(pre + "delta", m.config.delta);
    m.config.max_iter = static_cast<long>(num(pre + "max_iter", static_cast<double>(m.config.max_iter)));
    m.config.temporal_step = static_cast<int>(num(pre + "step", 1));
    if (const auto* v = get(pre + "solver")) {
      detail::require_param(*v == "cg" || *v == "projected", path + ": unknown solver '" + *v + "'");
      if (*v == "projected") m.solver = SolverKind::projected_gradient;
    }
    for (const char* k : {"objective", "upsilon", "epsilon", "beta", "delta", "max_iter", "step", "solver"})
      known.push_back(pre + k);
    p.methods.push_back(m);
  }
  for (const auto& [k, v] : kv)
    detail::require_param(std::find(known.begin(), known.end(), k) != known.end(),
                          path + ": unknown plan key '" + k + "'");
  p.validate();
  return p;
}

struct Benchmark {
  Command cmd;
  std::string plan;
  std::string signal;
  GraphSource graph;
  int jobs = 1;
  bool no_wall_time = false;

  explicit Benchmark(CLI::App& app) : cmd(app, "benchmark", "Monte-Carlo comparison of reconstruction methods") {
    cmd.option("plan", plan, "experiment plan file")->required();
    cmd.option("signal", signal, "ground-truth signal file")->required();
    graph.add_to(cmd);
    cmd.option("jobs", jobs, "worker threads over repetitions");
    cmd.flag("no-wall-time", no_wall_time, "write 0 for wall time so reruns are byte-identical");
  }

  int run() const {
    ExperimentPlan p = read_plan(plan);
    p.jobs = jobs;
    const Matrix truth = io::read_matrix(signal).values;
    const Graph g = graph.load();
    const ExperimentResult r = run_experiment(p, truth, g);
    const fs::path out = cmd.prepare_out();
    fs::copy_file(plan, out / "plan.txt", fs::copy_options::overwrite_existing);
    write_results((out / "results.csv").string(), r.rows, !no_wall_time);
    write_aggregates((out / "aggregates.csv").string(), r.aggregates, !no_wall_time);
    for (const auto& a : r.aggregates)
      std::cout << a.method << " level=" << brief(a.level) << " rmse=" << brief(a.rmse)
                << " iterations=" << brief(a.iterations) << '\n';
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-varying graph signal reconstruction"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  BuildGraph build_graph(app);
  Synth synth(app);
  Sample sample(app);
  Reconstruct recon(app);
  Analyze analyze(app);
  Benchmark bench(app);

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }

  try {
    if (*build_graph.cmd.app()) return build_graph.run();
    if (*synth.cmd.app()) return synth.run();
    if (*sample.cmd.app()) return sample.run();
    if (*recon.cmd.app()) return recon.run();
    if (*analyze.cmd.app()) return analyze.run();
    if (*bench.cmd.app()) return bench.run();
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
