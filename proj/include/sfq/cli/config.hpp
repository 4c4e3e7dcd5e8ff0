#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sfq/experiments.hpp"
#include "sfq/ga.hpp"
#include "sfq/model.hpp"

namespace sfq::cli {

/// Model constants in the units users type: GHz of ordinary frequency, ps.
struct ModelSettings {
  double omega_ghz = 5.0;
  double delta_ghz = -0.2;
  double dtheta = std::numbers::pi / 100.0;
  double t_c_ps = 5.0;
  std::optional<double> tau_ps;  // unset: t_c / 3
  int levels = 3;

  /// SI conversion (rad/s, seconds).
  ModelParams params() const;
};

struct JitterSettings {
  int runs = 1000;
  JitterMode mode = JitterMode::external;
  bool both_modes = false;
  InternalModel internal_model = InternalModel::independent_sqrt_k;
  std::vector<double> sigmas_ps{0.0, 0.1, 1.0, 10.0};

  std::vector<JitterMode> modes() const;
};

/// Everything a subcommand needs. Text form is a flat key=value file with
/// [model], [ga], [run], [jitter] and [sweep] sections. Values are held in
/// their text units so the canonical text round-trips exactly; SI values
/// come from the accessors.
struct RunConfig {
  ModelSettings model;
  int substeps = kDefaultSubsteps;
  ga::GAConfig ga;
  std::string target = "pauli_y";
  double leak_phase = 0.0;
  double gate_ns = 20.0;
  bool gate_set = false;  // gate_ns given explicitly
  JitterSettings jitter;
  std::vector<double> sweep_gate_ns{6.0, 8.0, 12.0, 16.0, 20.0};

  ModelParams params() const { return model.params(); }
  double gate_time() const { return gate_ns / 1e9; }
  std::vector<double> sweep_gate_times() const;
  std::vector<double> jitter_sigmas() const;

  /// Throws Error(InvalidParams / InvalidConfig) naming the violated invariant.
  void validate() const;

  /// Canonical text form; parsing it yields an identical config.
  std::string to_text() const;

  /// 64-bit FNV-1a of to_text(), as 16 hex digits.
  std::string hash() const;
};

/// Parses config text over `base` (keys not mentioned keep their value).
/// A [meta] section is accepted and ignored so run.meta files can be fed back.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// "6,8,12" -> {6, 8, 12}
std::vector<double> parse_list(const std::string& text);

}  // namespace sfq::cli
