// Physical test scenarios and the convergence-study harness built on them.
//
// Jaynes-Cummings layout: dimension N = 2m, qubit (slow) outer factor and
// cavity (fast) inner factor, ground block first. The excited-qubit block
// occupies rows/columns m .. 2m-1.
#pragma once

#include "lk/integrators.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lk {

struct JCParams {
  int m = 30;              // cavity levels; N = 2m
  double coupling = 1.0;   // qubit-cavity coupling
  double kappa = 0.0;      // cavity decay rate
  double amplitude = 0.0;  // coherent amplitude; <= 0 selects sqrt(m/3)
};

// Model H = coupling (b sigma+ + b^dag sigma-) with one jump (rate 1,
// L = sqrt(kappa) b), plus the rank-1 initial factor |e> x |coherent v>.
std::pair<LindbladModel, Matrix> build_jaynes_cummings(const JCParams& p);

// Six-level ladder with ultrafast dephasing-type jumps (rates 1,
// L1 = (base_rate/sqrt(2)) a, L2 = base_rate a^dag a). An empty H selects the
// built-in two-level-dominant Hamiltonian with ||H|| ~ 1e15 rad/s.
LindbladModel build_stiff_decoherence(const Matrix& hamiltonian = Matrix(),
                                      double base_rate = 1e5);
Matrix stiff_default_hamiltonian();
// Pure uniform superposition over the six levels, as an N x 1 factor.
Matrix stiff_default_initial();

// Trace over the excited-qubit block; factor variant avoids forming rho.
double excited_population(const Matrix& rho, int m);
double excited_population_factor(const Matrix& v, int m);

// First full revival 2 pi |amplitude| / coupling of the excited population.
double revival_time(double coupling, double amplitude);

// Discrete L2-in-time distance sqrt(dt * sum_{n>=1} (series_n - ref_n)^2);
// both series include the t = 0 sample, which carries no weight.
double l2_time_error(std::span<const double> series, std::span<const double> reference,
                     double dt);

// Every factor-th entry of a finer series sharing the same endpoints.
std::vector<double> subsample_series(std::span<const double> fine, int factor);

struct MethodSpec {
  enum class Kind { PlainRk, IfDense, IfLowRank };
  std::string label;
  Kind kind = Kind::IfDense;
  bool exact_flow = true;
  int taylor_order = 4;          // used when exact_flow is false
  TruncationPolicy policy{};     // low-rank only
  int epsilon_dt_power = 0;      // > 0: epsilon = dt^power, overriding policy.epsilon
};

struct ScenarioBundle {
  LindbladModel model;
  Matrix initial_factor;  // N x r0
  std::function<double(const Matrix&)> observe_dense;
  std::function<double(const Matrix&)> observe_factor;
};

ScenarioBundle jc_bundle(const JCParams& p);
ScenarioBundle stiff_bundle(const Matrix& hamiltonian = Matrix(), double base_rate = 1e5,
                            int observe_index = 2);

// Observable samples at t_n = n dt for n = 0..steps.
std::vector<double> observable_series(const ScenarioBundle& scenario, const ButcherTableau& tab,
                                      const MethodSpec& method, int steps, double t_final);

struct ReferenceSpec {
  std::function<double(double)> analytic;  // when set, wins over self_steps
  int self_steps = 0;                      // exact-flow dense IF run at this resolution
};

struct ConvergenceRow {
  std::string method;
  int steps = 0;
  double error = 0.0;
  double order = 0.0;  // NaN on the first row of each method
};

// L2-in-time observable errors for each (method, steps) pair against the
// reference, with observed orders between successive step counts. Members run
// concurrently up to max_workers (0 picks a default; see LK_THREADS).
std::vector<ConvergenceRow> convergence_study(const ScenarioBundle& scenario,
                                              const ButcherTableau& tab, double t_final,
                                              const std::vector<MethodSpec>& methods,
                                              const std::vector<int>& step_counts,
                                              const ReferenceSpec& ref, int max_workers = 0);

}  // namespace lk
