#include "sfq/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>

#include "sfq/error.hpp"

namespace sfq::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    bad("key '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

long to_long(const std::string& key, const std::string& v) {
  long out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) bad("key '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) bad("key '" + key + "' expects an unsigned integer");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  const long x = to_long(key, v);
  if (x < -2147483647L || x > 2147483647L) bad("key '" + key + "' out of range");
  return static_cast<int>(x);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt(xs[i]);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"model.omega_ghz", [](RunConfig& c, auto& k, auto& v) { c.model.omega_ghz = to_double(k, v); }},
      {"model.delta_ghz", [](RunConfig& c, auto& k, auto& v) { c.model.delta_ghz = to_double(k, v); }},
      {"model.dtheta", [](RunConfig& c, auto& k, auto& v) { c.model.dtheta = to_double(k, v); }},
      {"model.t_c_ps", [](RunConfig& c, auto& k, auto& v) { c.model.t_c_ps = to_double(k, v); }},
      {"model.tau_ps",
       [](RunConfig& c, auto& k, auto& v) {
         if (v == "auto") c.model.tau_ps.reset();
         else c.model.tau_ps = to_double(k, v);
       }},
      {"model.levels", [](RunConfig& c, auto& k, auto& v) { c.model.levels = to_int(k, v); }},
      {"model.substeps", [](RunConfig& c, auto& k, auto& v) { c.substeps = to_int(k, v); }},
      {"ga.population_size", [](RunConfig& c, auto& k, auto& v) { c.ga.population_size = to_int(k, v); }},
      {"ga.mutation_prob", [](RunConfig& c, auto& k, auto& v) { c.ga.mutation_prob = to_double(k, v); }},
      {"ga.crossover_prob", [](RunConfig& c, auto& k, auto& v) { c.ga.crossover_prob = to_double(k, v); }},
      {"ga.mating_pool", [](RunConfig& c, auto& k, auto& v) { c.ga.mating_pool = to_int(k, v); }},
      {"ga.max_iterations", [](RunConfig& c, auto& k, auto& v) { c.ga.max_iterations = to_long(k, v); }},
      {"ga.target_fitness", [](RunConfig& c, auto& k, auto& v) { c.ga.target_fitness = to_double(k, v); }},
      {"ga.elitism", [](RunConfig& c, auto& k, auto& v) { c.ga.elitism = to_int(k, v); }},
      {"ga.seed", [](RunConfig& c, auto& k, auto& v) { c.ga.seed = to_u64(k, v); }},
      {"ga.tournament_size", [](RunConfig& c, auto& k, auto& v) { c.ga.tournament_size = to_int(k, v); }},
      {"ga.selection",
       [](RunConfig& c, auto& k, auto& v) {
         if (v == "roulette") c.ga.selection = ga::Selection::roulette;
         else if (v == "tournament") c.ga.selection = ga::Selection::tournament;
         else bad("key '" + k + "' expects roulette|tournament");
       }},
      {"ga.crossover",
       [](RunConfig& c, auto& k, auto& v) {
         if (v == "single_point") c.ga.crossover = ga::Crossover::single_point;
         else if (v == "uniform") c.ga.crossover = ga::Crossover::uniform;
         else bad("key '" + k + "' expects single_point|uniform");
       }},
      {"run.target",
       [](RunConfig& c, auto& k, auto& v) {
         if (v != "pauli_y") bad("key '" + k + "' supports only pauli_y");
         c.target = v;
       }},
      {"run.leak_phase", [](RunConfig& c, auto& k, auto& v) { c.leak_phase = to_double(k, v); }},
      {"run.gate_ns",
       [](RunConfig& c, auto& k, auto& v) {
         c.gate_ns = to_double(k, v);
         c.gate_set = true;
       }},
      {"jitter.runs", [](RunConfig& c, auto& k, auto& v) { c.jitter.runs = to_int(k, v); }},
      {"jitter.mode",
       [](RunConfig& c, auto& k, auto& v) {
         c.jitter.both_modes = false;
         if (v == "external") c.jitter.mode = JitterMode::external;
         else if (v == "internal") c.jitter.mode = JitterMode::internal;
         else if (v == "both") c.jitter.both_modes = true;
         else bad("key '" + k + "' expects external|internal|both");
       }},
      {"jitter.internal_model",
       [](RunConfig& c, auto& k, auto& v) {
         if (v == "independent_sqrt_k") c.jitter.internal_model = InternalModel::independent_sqrt_k;
         else if (v == "random_walk") c.jitter.internal_model = InternalModel::random_walk;
         else bad("key '" + k + "' expects independent_sqrt_k|random_walk");
       }},
      {"jitter.sigmas_ps", [](RunConfig& c, auto&, auto& v) { c.jitter.sigmas_ps = parse_list(v); }},
      {"sweep.gate_ns", [](RunConfig& c, auto&, auto& v) { c.sweep_gate_ns = parse_list(v); }},
  };
  return table;
}

}  // namespace

ModelParams ModelSettings::params() const {
  // Divisions by exact powers of ten give the correctly rounded SI value.
  ModelParams p;
  p.omega = 2.0 * std::numbers::pi * (omega_ghz * 1e9);
  p.delta = 2.0 * std::numbers::pi * (delta_ghz * 1e9);
  p.dtheta = dtheta;
  p.t_c = t_c_ps / 1e12;
  p.tau = tau_ps ? *tau_ps / 1e12 : p.t_c / 3.0;
  p.levels = levels;
  return p;
}

std::vector<JitterMode> JitterSettings::modes() const {
  if (both_modes) return {JitterMode::external, JitterMode::internal};
  return {mode};
}

std::vector<double> RunConfig::sweep_gate_times() const {
  std::vector<double> out;
  for (double g : sweep_gate_ns) out.push_back(g / 1e9);
  return out;
}

std::vector<double> RunConfig::jitter_sigmas() const {
  std::vector<double> out;
  for (double s : jitter.sigmas_ps) out.push_back(s / 1e12);
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) bad("empty entry in list '" + text + "'");
    out.push_back(to_double("list", item));
  }
  if (out.empty()) bad("empty list");
  return out;
}

void RunConfig::validate() const {
  params().validate();
  if (substeps < 1) throw Error(ErrorCode::InvalidParams, "substeps >= 1 violated");
  ga.validate();
  if (!(gate_ns > 0.0)) bad("gate_ns > 0 violated");
  if (jitter.runs < 1) bad("jitter runs >= 1 violated");
  for (double s : jitter.sigmas_ps) {
    if (!(s >= 0.0)) bad("jitter sigma >= 0 violated");
  }
  for (double t : sweep_gate_ns) {
    if (!(t > 0.0)) bad("sweep gate times must be positive");
  }
}

std::string RunConfig::to_text() const {
  std::ostringstream out;
  out << "[model]\n"
      << "omega_ghz = " << fmt(model.omega_ghz) << '\n'
      << "delta_ghz = " << fmt(model.delta_ghz) << '\n'
      << "dtheta = " << fmt(model.dtheta) << '\n'
      << "t_c_ps = " << fmt(model.t_c_ps) << '\n'
      << "tau_ps = " << (model.tau_ps ? fmt(*model.tau_ps) : std::string("auto")) << '\n'
      << "levels = " << model.levels << '\n'
      << "substeps = " << substeps << '\n'
      << "\n[ga]\n"
      << "population_size = " << ga.population_size << '\n'
      << "mutation_prob = " << fmt(ga.mutation_prob) << '\n'
      << "crossover_prob = " << fmt(ga.crossover_prob) << '\n'
      << "mating_pool = " << ga.mating_pool << '\n'
      << "max_iterations = " << ga.max_iterations << '\n'
      << "target_fitness = " << fmt(ga.target_fitness) << '\n'
      << "elitism = " << ga.elitism << '\n'
      << "seed = " << ga.seed << '\n'
      << "selection = " << ga::to_string(ga.selection) << '\n'
      << "crossover = " << ga::to_string(ga.crossover) << '\n'
      << "tournament_size = " << ga.tournament_size << '\n'
      << "\n[run]\n"
      << "target = " << target << '\n'
      << "leak_phase = " << fmt(leak_phase) << '\n'
      << "gate_ns = " << fmt(gate_ns) << '\n'
      << "\n[jitter]\n"
      << "runs = " << jitter.runs << '\n'
      << "mode = " << (jitter.both_modes ? "both" : std::string(to_string(jitter.mode))) << '\n'
      << "internal_model = " << to_string(jitter.internal_model) << '\n'
      << "sigmas_ps = " << fmt_list(jitter.sigmas_ps) << '\n'
      << "\n[sweep]\n"
      << "gate_ns = " << fmt_list(sweep_gate_ns) << '\n';
  return out.str();
}

std::string RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad("line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    if (section == "meta") continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) bad("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second(base, key, value);
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
  return parse_config(in, std::move(base));
}

}  // namespace sfq::cli
