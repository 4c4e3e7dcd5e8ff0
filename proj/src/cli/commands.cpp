#include "sfq/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sfq/cli/config.hpp"
#include "sfq/error.hpp"
#include "sfq/experiments.hpp"
#include "sfq/kernels.hpp"

#ifndef SFQ_VERSION
#define SFQ_VERSION "v0.0.0-unknown"
#endif

namespace sfq::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::string db_path;
  std::string seq_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;

  // subcommand specific
  int pulses = 0;
  std::string gates;
  std::string sigmas;
  std::string mode;
  std::string internal_model;
  int runs = 0;
};

std::string sig6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RunConfig assemble_config(const Options& opt) {
  RunConfig cfg;
  if (!opt.config_path.empty()) {
    if (!fs::exists(opt.config_path)) {
      throw Error(ErrorCode::IoError, "config file " + opt.config_path + " does not exist");
    }
    cfg = load_config(opt.config_path);
  }
  if (!opt.overrides.empty()) {
    // --set section.key=value is the one-line form of a config entry.
    std::ostringstream text;
    for (const auto& o : opt.overrides) {
      const auto dot = o.find('.');
      const auto eq = o.find('=');
      if (dot == std::string::npos || eq == std::string::npos || dot > eq) {
        throw Error(ErrorCode::InvalidConfig, "--set expects section.key=value, got '" + o + "'");
      }
      text << '[' << o.substr(0, dot) << "]\n" << o.substr(dot + 1) << '\n';
    }
    std::istringstream in(text.str());
    cfg = parse_config(in, cfg);
  }
  if (opt.seed_set) cfg.ga.seed = opt.seed;
  if (opt.threads > 0) cfg.ga.threads = opt.threads;
  cfg.validate();
  set_thread_count(cfg.ga.threads);
  return cfg;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::IoError, "cannot create output directory " + dir);
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

bool same_params(const ModelParams& a, const ModelParams& b) {
  auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::abs(y); };
  return a.levels == b.levels && close(a.omega, b.omega) && close(a.delta, b.delta) &&
         close(a.dtheta, b.dtheta) && close(a.t_c, b.t_c) && close(a.tau, b.tau);
}

UnitaryDatabase resolve_database(const RunConfig& cfg, const std::string& path, std::ostream& err) {
  const ModelParams params = cfg.params();
  if (path.empty()) return build_database(params, cfg.substeps);
  if (fs::exists(path)) {
    UnitaryDatabase db = load_database(path);
    if (!same_params(db.params, params) || db.substeps != cfg.substeps) {
      throw Error(ErrorCode::InvalidConfig,
                  "database " + path + " was built for different model parameters");
    }
    return db;
  }
  err << "building unitary database -> " << path << '\n';
  UnitaryDatabase db = build_database(params, cfg.substeps);
  save_database(path, db);
  return db;
}

PulseSequence require_sequence(const Options& opt, const UnitaryDatabase& db,
                               const RunConfig& cfg) {
  if (opt.seq_path.empty()) throw Error(ErrorCode::InvalidConfig, "--seq <path> is required");
  if (!fs::exists(opt.seq_path)) {
    throw Error(ErrorCode::IoError, "sequence file " + opt.seq_path + " does not exist");
  }
  PulseSequence seq = load_sequence(opt.seq_path);
  const double pixel = db.params.pixel();
  if (std::abs(seq.pixel() - pixel) > 1e-9 * pixel) {
    throw Error(ErrorCode::LengthMismatch, "sequence pixel differs from the model's 2 t_c");
  }
  // Re-grid onto the exact model pixel so gate times are N * pixel exactly.
  seq = PulseSequence(seq.genome(), pixel);
  if (cfg.gate_set && std::abs(seq.gate_time() - cfg.gate_time()) > 1e-6 * pixel) {
    throw Error(ErrorCode::LengthMismatch, "sequence length " + std::to_string(seq.size()) +
                                               " pixels does not match gate_ns");
  }
  return seq;
}

void write_meta(const fs::path& path, const RunConfig& cfg, const std::string& command,
                double wall_seconds, const std::vector<std::pair<std::string, std::string>>& extra) {
  auto out = open_out(path);
  out << "[meta]\n"
      << "command = " << command << '\n'
      << "version = " << version_string() << '\n'
      << "config_hash = " << cfg.hash() << '\n'
      << "seed = " << cfg.ga.seed << '\n'
      << "threads = " << (cfg.ga.threads > 0 ? cfg.ga.threads : max_threads()) << '\n'
      << "wall_time_s = " << sig6(wall_seconds) << '\n';
  for (const auto& [k, v] : extra) out << k << " = " << v << '\n';
  out << '\n' << cfg.to_text();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_gen_db(const Options& opt, std::ostream& out, std::ostream&) {
  const RunConfig cfg = assemble_config(opt);
  const std::string path =
      opt.db_path.empty() ? (fs::path(opt.out_dir) / "unitary.db").string() : opt.db_path;
  if (opt.db_path.empty()) ensure_dir(opt.out_dir);
  const UnitaryDatabase db = build_database(cfg.params(), cfg.substeps);
  save_database(path, db);
  out << "wrote " << path << " (" << db.dim() << " levels, substeps " << db.substeps
      << ", unitarity defects " << sig6(unitarity_defect(db.u0)) << ' '
      << sig6(unitarity_defect(db.u1)) << ")\n";
  return kExitOk;
}

int cmd_init_seq(const Options& opt, std::ostream& out, std::ostream&) {
  const RunConfig cfg = assemble_config(opt);
  const ModelParams params = cfg.params();
  const PulseSequence seq =
      opt.pulses > 0
          ? initial_sequence(params, opt.pulses)
          : spaced_sequence(params, pixels_for_gate_time(cfg.gate_time(), params.pixel()));
  std::string path = opt.seq_path;
  if (path.empty()) {
    ensure_dir(opt.out_dir);
    path = (fs::path(opt.out_dir) / "init.seq").string();
  }
  save_sequence(path, seq);
  out << "wrote " << path << " (" << seq.size() << " pixels, " << seq.pulse_count()
      << " pulses)\n";
  return kExitOk;
}

int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = assemble_config(opt);
  const UnitaryDatabase db = resolve_database(cfg, opt.db_path, err);
  const PulseSequence seq = require_sequence(opt, db, cfg);
  const TargetGate target = TargetGate::pauli_y(db.dim(), cfg.leak_phase);
  const double phi = fidelity(evolve(seq, db), target);

  ensure_dir(opt.out_dir);
  const fs::path dir(opt.out_dir);
  {
    auto f = open_out(dir / "report.csv");
    f << "pixels,pulses,gate_ns,fidelity,gate_error\n"
      << seq.size() << ',' << seq.pulse_count() << ',' << full(seq.gate_time() * 1e9) << ','
      << full(phi) << ',' << full(1.0 - phi) << '\n';
  }
  for (int level : {0, 1}) {
    auto f = open_out(dir / (level == 0 ? "populations_ground.csv" : "populations_excited.csv"));
    write_populations_csv(f, populations(seq, db, level), seq.pixel());
  }
  out << "pixels " << seq.size() << "  pulses " << seq.pulse_count() << '\n'
      << "gate_error " << sig6(1.0 - phi) << '\n';
  return kExitOk;
}

int cmd_optimize(const Options& opt, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = assemble_config(opt);
  const UnitaryDatabase db = resolve_database(cfg, opt.db_path, err);
  const ModelParams& params = db.params;
  const PulseSequence seed =
      opt.seq_path.empty()
          ? spaced_sequence(params, pixels_for_gate_time(cfg.gate_time(), params.pixel()))
          : require_sequence(opt, db, cfg);
  ensure_dir(opt.out_dir);

  const TargetGate target = TargetGate::pauli_y(db.dim(), cfg.leak_phase);
  const FidelityKernel kernel(db, target, seed.size());
  const auto t0 = std::chrono::steady_clock::now();
  const auto run = ga::optimize(
      seed.genome(), [&kernel](std::span<const Bit> bits) { return kernel.fidelity(bits); },
      cfg.ga, [&err](const ga::GenerationStats& s) {
        if (s.generation % 10000 == 0) {
          err << "generation " << s.generation << "  best_error " << sig6(1.0 - s.best_fitness)
              << '\n';
        }
        return true;
      });
  const double wall = seconds_since(t0);

  const fs::path dir(opt.out_dir);
  {
    auto f = open_out(dir / "history.csv");
    f << "generation,best_error,mean_error\n";
    for (const auto& h : run.history) {
      f << h.generation << ',' << full(1.0 - h.best_fitness) << ',' << full(1.0 - h.mean_fitness)
        << '\n';
    }
  }
  const PulseSequence best(run.best_genome, params.pixel());
  save_sequence((dir / "best.seq").string(), best);
  write_meta(dir / "run.meta", cfg, "optimize", wall,
             {{"seed_sequence", opt.seq_path.empty() ? std::string("spaced") : opt.seq_path},
              {"terminated_by", std::string(ga::to_string(run.terminated_by))},
              {"generations", std::to_string(run.generations_used)},
              {"best_error", full(1.0 - run.best_fitness)},
              {"initial_pulses", std::to_string(seed.pulse_count())},
              {"best_pulses", std::to_string(best.pulse_count())}});

  out << "terminated_by " << ga::to_string(run.terminated_by) << "  generations "
      << run.generations_used << '\n'
      << "pulses " << seed.pulse_count() << " -> " << best.pulse_count() << '\n'
      << "gate_error " << sig6(1.0 - run.best_fitness) << '\n';
  return run.terminated_by == ga::Termination::target_reached ? kExitOk : kExitBudgetExhausted;
}

int cmd_sweep(const Options& opt, std::ostream& out, std::ostream& err) {
  RunConfig cfg = assemble_config(opt);
  if (!opt.gates.empty()) cfg.sweep_gate_ns = parse_list(opt.gates);
  const UnitaryDatabase db = resolve_database(cfg, opt.db_path, err);
  const auto gate_times = cfg.sweep_gate_times();
  for (double t : gate_times) pixels_for_gate_time(t, db.params.pixel());
  ensure_dir(opt.out_dir);

  const TargetGate target = TargetGate::pauli_y(db.dim(), cfg.leak_phase);
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult result = speed_limit_sweep(gate_times, db, target, cfg.ga);
  const double wall = seconds_since(t0);

  const fs::path dir(opt.out_dir);
  {
    auto f = open_out(dir / "qsl.csv");
    write_qsl_csv(f, result);
  }
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& row = result.rows[i];
    save_sequence((dir / ("qsl_" + std::to_string(row.pixels) + "px.seq")).string(), row.best);
    out << "gate_ns " << sig6(row.gate_time * 1e9) << "  pixels " << row.pixels
        << "  best_error " << sig6(row.best_error) << "  generations " << row.generations << "  "
        << ga::to_string(row.terminated_by) << '\n';
  }
  write_meta(dir / "run.meta", cfg, "sweep-qsl", wall, {});
  return kExitOk;
}

int cmd_jitter(const Options& opt, std::ostream& out, std::ostream& err) {
  std::vector<std::string> overrides = opt.overrides;
  if (!opt.sigmas.empty()) overrides.push_back("jitter.sigmas_ps=" + opt.sigmas);
  if (!opt.mode.empty()) overrides.push_back("jitter.mode=" + opt.mode);
  if (!opt.internal_model.empty()) overrides.push_back("jitter.internal_model=" + opt.internal_model);
  if (opt.runs > 0) overrides.push_back("jitter.runs=" + std::to_string(opt.runs));
  Options merged = opt;
  merged.overrides = overrides;
  const RunConfig cfg = assemble_config(merged);
  const UnitaryDatabase db = resolve_database(cfg, opt.db_path, err);
  const PulseSequence seq = require_sequence(opt, db, cfg);
  ensure_dir(opt.out_dir);

  const TargetGate target = TargetGate::pauli_y(db.dim(), cfg.leak_phase);
  const FidelityKernel kernel(db, target, seq.size());
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<JitterRow> rows;
  for (JitterMode mode : cfg.jitter.modes()) {
    for (double sigma : cfg.jitter_sigmas()) {
      JitterSpec spec;
      spec.sigma = sigma;
      spec.mode = mode;
      spec.runs = cfg.jitter.runs;
      spec.seed = cfg.ga.seed;
      spec.internal_model = cfg.jitter.internal_model;
      rows.push_back({sigma, mode, jitter_eval(seq, kernel, spec, cfg.ga.threads)});
      const auto& r = rows.back();
      out << to_string(mode) << "  sigma_ps " << sig6(sigma * 1e12) << "  mean_error "
          << sig6(r.result.mean_error) << "  std_error " << sig6(r.result.std_error) << '\n';
    }
  }
  const double wall = seconds_since(t0);
  const fs::path dir(opt.out_dir);
  {
    auto f = open_out(dir / "jitter.csv");
    write_jitter_csv(f, rows);
  }
  write_meta(dir / "run.meta", cfg, "jitter", wall,
             {{"sequence", opt.seq_path}});
  return kExitOk;
}

}  // namespace

std::string version_string() { return SFQ_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Digital SFQ pulse-sequence control of a transmon qubit", "sfqctl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  Options opt;
  app.add_option("--config", opt.config_path, "key=value config file ([model], [ga], ...)");
  app.add_option("--db", opt.db_path, "unitary database file (built and cached if missing)");
  app.add_option("--seq", opt.seq_path, "pulse sequence file");
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_option("--set", opt.overrides, "config override section.key=value (repeatable)");
  auto* seed_opt = app.add_option("--seed", opt.seed, "64-bit RNG seed");
  app.add_option("--threads", opt.threads, "worker threads (default: machine parallelism)")
      ->check(CLI::NonNegativeNumber);

  auto* gen_db = app.add_subcommand("gen-db", "build the two-entry unitary database");
  auto* init_seq = app.add_subcommand("init-seq", "write the evenly spaced seed sequence");
  init_seq->add_option("--pulses", opt.pulses, "pulse count (default: fill gate_ns)");
  auto* simulate = app.add_subcommand("simulate", "gate error and populations of a sequence");
  auto* optimize = app.add_subcommand("optimize", "genetic optimization of a sequence");
  auto* sweep = app.add_subcommand("sweep-qsl", "optimize over a list of gate times");
  sweep->add_option("--gates", opt.gates, "comma-separated gate times in ns");
  auto* jitter = app.add_subcommand("jitter", "Monte-Carlo timing-jitter study of a sequence");
  jitter->add_option("--sigmas", opt.sigmas, "comma-separated jitter sigmas in ps");
  jitter->add_option("--mode", opt.mode, "external | internal | both");
  jitter->add_option("--runs", opt.runs, "Monte-Carlo runs per sigma");
  jitter->add_option("--internal-model", opt.internal_model,
                     "independent_sqrt_k | random_walk");
  for (auto* sub : {gen_db, init_seq, simulate, optimize, sweep, jitter}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }
  opt.seed_set = seed_opt->count() > 0;

  try {
    if (*gen_db) return cmd_gen_db(opt, out, err);
    if (*init_seq) return cmd_init_seq(opt, out, err);
    if (*simulate) return cmd_simulate(opt, out, err);
    if (*optimize) return cmd_optimize(opt, out, err);
    if (*sweep) return cmd_sweep(opt, out, err);
    if (*jitter) return cmd_jitter(opt, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "fatal: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace sfq::cli
