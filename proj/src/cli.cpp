#include "sisnet/cli.hpp"

#include <algorithm>
#include <fstream>
#include <atomic>
#include <functional>
#include <future>
#include <thread>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sisnet/certificates.hpp"
#include "sisnet/equilibrium.hpp"
#include "sisnet/game.hpp"
#include "sisnet/generate.hpp"
#include "sisnet/io.hpp"
#include "sisnet/linalg.hpp"
#include "sisnet/simulate.hpp"

namespace sisnet {

using nlohmann::json;

namespace {

struct InputOptions {
  std::string input;
  double beta = 1.0;   // edge-list inputs only
  double delta = 1.0;
};

struct SimulateOptions {
  InputOptions in;
  std::string init;
  bool random = false;
  std::uint64_t seed = 0;
  double step = 1e-2;
  double t_max = 100.0;
  double tol = 0.0;
  std::size_t record_every = 1;
  bool lyapunov = false;
  std::string reference;
};

struct BatchOptions {
  std::vector<std::string> inputs;
  double beta = 1.0, delta = 1.0;
  std::string family;
  std::size_t count = 0;
  std::optional<std::size_t> nodes;
  double edge_prob = 0.3;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;
  double tol = 1e-12;
};

// Writes to --output when given, else to the default stream.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ParseError("cannot write " + path, 0);
    }
  }
  std::ostream& stream(std::ostream& fallback) { return file_.is_open() ? file_ : fallback; }

 private:
  std::ofstream file_;
};

void emit(const std::string& path, std::ostream& out, const json& j) {
  Sink sink(path);
  sink.stream(out) << j.dump(2) << '\n';
}

void add_input(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--input,-i", in.input, "model JSON (.json) or edge list")->required();
  cmd->add_option("--beta", in.beta, "uniform infection rate for edge-list input")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--delta", in.delta, "uniform curing rate for edge-list input")
      ->check(CLI::PositiveNumber);
}

State read_state_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  return read_state(in, n);
}

json model_summary(const EpidemicNetwork& net) {
  return {{"nodes", net.size()},
          {"edges", net.graph().edge_count()},
          {"total_weight", net.graph().total_weight()},
          {"connectivity", to_string(connectivity_class(net.graph()))},
          {"hash", matrix_hash(net.linearization_at_origin())}};
}

int cmd_analyze(const InputOptions& in, const std::string& output, double tol, std::ostream& out) {
  const auto net = load_model(in.input, in.beta, in.delta);
  const auto outcome = analyze_model(net, {}, tol);
  emit(output, out, outcome.report);
  return outcome.exit_code;
}

int cmd_simulate(const SimulateOptions& o, const std::string& output, std::ostream& out) {
  const auto net = load_model(o.in.input, o.in.beta, o.in.delta);
  const std::size_t n = net.size();
  State p0;
  if (!o.init.empty() && o.random) throw ParseError("--init and --random are exclusive", 0);
  if (!o.init.empty()) {
    p0 = read_state_file(o.init, n);
  } else if (o.random) {
    Rng rng(o.seed);
    p0.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) p0[static_cast<Eigen::Index>(i)] = rng.uniform();
  } else {
    throw ParseError("an initial condition is required (--init FILE or --random)", 0);
  }

  IntegrationOptions opts;
  opts.step = o.step;
  opts.t_end = o.t_max;
  opts.record_every = o.record_every;
  opts.stop_tol = o.tol;
  auto traj = integrate(net, p0, opts);
  if (o.lyapunov || !o.reference.empty()) {
    const State ref = o.reference.empty() ? equilibrium_cascade(net).p_star
                                          : read_state_file(o.reference, n);
    traj.lyapunov = lyapunov_trace(traj, ref);
  }
  Sink sink(output);
  write_trajectory_csv(sink.stream(out), traj);
  return kExitOk;
}

int cmd_generate(const GenerateConfig& cfg, const std::string& output, std::ostream& out) {
  const auto net = generate(cfg);
  json j = model_to_json(net);
  j["meta"] = {{"family", cfg.family},
               {"seed", cfg.seed},
               {"edge_count", net.graph().edge_count()},
               {"total_weight", net.graph().total_weight()}};
  emit(output, out, j);
  return kExitOk;
}

int cmd_check_distributed(const InputOptions& in, const std::string& output, std::ostream& out) {
  const auto net = load_model(in.input, in.beta, in.delta);
  const auto verdict = distributed_condition(net);
  emit(output, out, to_json(verdict, diagonal_dominance_check(net)));
  return verdict.pass ? kExitOk : kExitConditionFailure;
}

int error_code(const std::exception_ptr& e, std::string& message) {
  try {
    std::rethrow_exception(e);
  } catch (const CertificateError& x) {
    message = x.what();
    return kExitCertificateFailure;
  } catch (const EquilibriumError& x) {
    message = x.what();
    return kExitCertificateFailure;
  } catch (const std::exception& x) {
    message = x.what();
    return kExitInputError;
  }
}

int cmd_batch(const BatchOptions& o, const std::string& output, std::ostream& out) {
  struct Job {
    std::string name;
    std::function<EpidemicNetwork()> load;
  };
  std::vector<Job> jobs;
  for (const auto& path : o.inputs)
    jobs.push_back({path, [&o, path] { return load_model(path, o.beta, o.delta); }});
  if (!o.family.empty()) {
    for (std::size_t k = 0; k < o.count; ++k) {
      GenerateConfig cfg;
      cfg.family = o.family;
      cfg.nodes = o.nodes;
      cfg.edge_prob = o.edge_prob;
      cfg.seed = o.seed + k;
      jobs.push_back({o.family + ":" + std::to_string(cfg.seed), [cfg] { return generate(cfg); }});
    }
  }
  if (jobs.empty()) throw ParseError("batch needs --input files or --family with --count", 0);

  auto run = [&](const Job& job) {
    json entry{{"input", job.name}};
    try {
      auto outcome = analyze_model(job.load(), {}, o.tol);
      entry["exit_code"] = outcome.exit_code;
      entry["report"] = std::move(outcome.report);
    } catch (...) {
      std::string msg;
      entry["exit_code"] = error_code(std::current_exception(), msg);
      entry["error"] = msg;
    }
    return entry;
  };

  // Independent analyses fan out over a fixed number of workers; results
  // are collected in input order.
  const std::size_t workers =
      std::max<std::size_t>(1, o.jobs ? o.jobs : std::thread::hardware_concurrency());
  std::vector<json> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> pool;
  for (std::size_t w = 0; w < std::min(workers, jobs.size()); ++w)
    pool.push_back(std::async(std::launch::async, [&] {
      for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) results[k] = run(jobs[k]);
    }));
  for (auto& f : pool) f.get();

  int code = kExitOk;
  for (const auto& r : results) code = std::max(code, r.at("exit_code").get<int>());
  emit(output, out, json{{"runs", results}, {"exit_code", code}});
  return code;
}

}  // namespace

AnalysisOutcome analyze_model(const EpidemicNetwork& net, const PowerIterationOptions& power,
                              double fixed_point_tol) {
  AnalysisOutcome o;
  json& j = o.report;
  j["model"] = model_summary(net);
  try {
    const auto d = scc_decompose(net.graph());
    const double r0 = basic_reproduction_number(net, power);
    j["r0"] = r0;
    j["threshold"] = to_string(classify_threshold(r0));
    j["scc"] = to_json(d);
    j["component_r0"] = component_reproduction_numbers(net, d, power);
    FixedPointOptions fp;
    fp.tol = fixed_point_tol;
    const auto eq = equilibrium_cascade(net, d, fp);
    j["equilibrium"] = to_json(eq);
    const auto st = classify_stability(net, d, eq);
    for (const auto& c : st.components) verify_certificate(c.certificate);
    j["stability"] = to_json(st);
  } catch (...) {
    std::string msg;
    o.exit_code = error_code(std::current_exception(), msg);
    j["error"] = msg;
  }
  return o;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analysis and simulation of the n-intertwined SIS model on digraphs", "sisnet"};
  app.require_subcommand(1);
  std::string output;
  app.add_option("--output,-o", output, "write the result to this file instead of stdout");

  InputOptions analyze_in;
  double analyze_tol = 1e-12;
  auto* analyze = app.add_subcommand("analyze", "equilibria, stability verdict and certificates");
  add_input(analyze, analyze_in);
  analyze->add_option("--tol", analyze_tol, "fixed-point iteration tolerance")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--output,-o", output);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "RK4 trajectory as CSV");
  add_input(simulate, sim.in);
  simulate->add_option("--init", sim.init, "initial state file");
  simulate->add_flag("--random", sim.random, "uniform random initial state from --seed");
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--step", sim.step)->check(CLI::PositiveNumber);
  simulate->add_option("--tmax", sim.t_max)->check(CLI::NonNegativeNumber);
  simulate->add_option("--tol", sim.tol, "stop once the residual falls below this")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--record-every", sim.record_every)->check(CLI::PositiveNumber);
  simulate->add_flag("--lyapunov", sim.lyapunov, "append V = 1/2 |p - p*|^2");
  simulate->add_option("--reference", sim.reference, "p* file for the V column");
  simulate->add_option("--output,-o", output);

  GenerateConfig gen;
  auto* generate_cmd = app.add_subcommand("generate", "write a random model as JSON");
  generate_cmd->add_option("--family", gen.family)->required();
  generate_cmd->add_option("--nodes", gen.nodes);
  generate_cmd->add_option("--edge-prob", gen.edge_prob);
  generate_cmd->add_option("--seed", gen.seed);
  generate_cmd->add_option("--r0", gen.r0);
  generate_cmd->add_option("--r0-down", gen.r0_down);
  generate_cmd->add_option("--beta", gen.beta);
  generate_cmd->add_option("--delta", gen.delta);
  generate_cmd->add_option("--output,-o", output);

  InputOptions check_in;
  auto* check = app.add_subcommand("check-distributed", "per-node sufficient condition");
  add_input(check, check_in);
  check->add_option("--output,-o", output);

  BatchOptions batch;
  auto* batch_cmd = app.add_subcommand("batch", "analyze many models concurrently");
  batch_cmd->add_option("--input,-i", batch.inputs, "model files");
  batch_cmd->add_option("--beta", batch.beta)->check(CLI::PositiveNumber);
  batch_cmd->add_option("--delta", batch.delta)->check(CLI::PositiveNumber);
  batch_cmd->add_option("--family", batch.family, "generate models instead of reading them");
  batch_cmd->add_option("--count", batch.count, "number of generated models (seeds seed..)");
  batch_cmd->add_option("--nodes", batch.nodes);
  batch_cmd->add_option("--edge-prob", batch.edge_prob);
  batch_cmd->add_option("--seed", batch.seed);
  batch_cmd->add_option("--jobs", batch.jobs);
  batch_cmd->add_option("--tol", batch.tol)->check(CLI::PositiveNumber);
  batch_cmd->add_option("--output,-o", output);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(analyze_in, output, analyze_tol, out);
    if (simulate->parsed()) return cmd_simulate(sim, output, out);
    if (generate_cmd->parsed()) return cmd_generate(gen, output, out);
    if (check->parsed()) return cmd_check_distributed(check_in, output, out);
    if (batch_cmd->parsed()) return cmd_batch(batch, output, out);
  } catch (...) {
    std::string msg;
    const int code = error_code(std::current_exception(), msg);
    err << "error: " << msg << '\n';
    return code;
  }
  return kExitInputError;
}

}  // namespace sisnet
