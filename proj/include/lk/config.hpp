// Flat key=value run configuration. '#' starts a comment, blank lines are
// skipped, unknown or malformed keys are hard errors. Matrices are inline JSON
// arrays of rows whose entries are numbers or [re, im] pairs.
#pragma once

#include "lk/scenarios.hpp"

#include <string>

namespace lk {

struct RunConfig {
  enum class Mode { Simulate, Converge, KrausVerify, ChoiProbe };
  enum class Scenario { Jc, Stiff, Custom };
  enum class Integrator { Rk, IfDense, IfLowRank };

  Mode mode = Mode::Simulate;
  Scenario scenario = Scenario::Jc;

  JCParams jc;
  double stiff_rate = 1e5;
  Matrix stiff_h;  // empty selects the built-in Hamiltonian
  Matrix custom_h;
  std::vector<Jump> custom_jumps;
  Matrix custom_v0;
  int observe_index = -1;  // -1 resolves to the scenario default

  Integrator integrator = Integrator::IfDense;
  ButcherTableau tableau;
  bool exact_flow = true;
  int taylor_order = 4;

  double t_final = 0.0;
  int steps = 0;      // one of steps / dt is set for simulate
  double dt = 0.0;

  TruncationPolicy policy;
  int epsilon_dt_power = 0;  // > 0: epsilon = dt^power per run

  std::string out_path;  // empty picks a per-mode default
  int sample_stride = 1;

  std::vector<MethodSpec> methods;  // converge
  std::vector<int> steps_list;
  int ref_self_steps = 0;

  int n_random = 20;  // kraus-verify probe states
  unsigned seed = 12345;

  bool renormalize = true;     // --no-renormalize clears this
  bool force_tableau = false;  // --force-tableau sets this
};

RunConfig parse_config(const std::string& text, RunConfig::Mode mode);
RunConfig load_config(const std::string& path, RunConfig::Mode mode);

// Inline JSON matrix: rows of numbers or [re, im] pairs.
Matrix parse_matrix_json(const std::string& text);

}  // namespace lk
