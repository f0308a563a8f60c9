#include "lk/scenarios.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace lk {

namespace {

// Lowering operator on m levels: a(l-1, l) = sqrt(l).
Matrix lowering(int m) {
  Matrix a = Matrix::Zero(m, m);
  for (int l = 1; l < m; ++l) a(l - 1, l) = std::sqrt(double(l));
  return a;
}

// Coherent-state amplitudes v^n / sqrt(n!), normalized over the kept levels.
// Computed in log space so large v and m do not overflow.
Eigen::VectorXd coherent_amplitudes(int m, double v) {
  Eigen::VectorXd log_amp(m);
  const double log_v = std::log(v);
  for (int n = 0; n < m; ++n) log_amp(n) = n * log_v - 0.5 * std::lgamma(double(n) + 1.0);
  const double top = log_amp.maxCoeff();
  Eigen::VectorXd amp = (log_amp.array() - top).exp();
  return amp / amp.norm();
}

int worker_count(int jobs, int max_workers) {
  int cap = max_workers;
  if (cap <= 0) {
    cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("LK_THREADS")) {
      const int env_cap = std::atoi(env);
      if (env_cap >= 1) cap = std::min(cap, env_cap);
    }
  }
  return std::max(1, std::min(jobs, cap));
}

}  // namespace

std::pair<LindbladModel, Matrix> build_jaynes_cummings(const JCParams& p) {
  if (p.m < 2) throw std::invalid_argument("build_jaynes_cummings: need at least two cavity levels");
  if (p.coupling <= 0.0) throw std::invalid_argument("build_jaynes_cummings: coupling must be positive");
  if (p.kappa < 0.0) throw std::invalid_argument("build_jaynes_cummings: negative kappa");
  const int m = p.m;
  const int n = 2 * m;
  const double v = p.amplitude > 0.0 ? p.amplitude : std::sqrt(double(m) / 3.0);

  Matrix cavity_lower = lowering(m);
  // H = coupling (b sigma+ + b^dag sigma-); with the qubit as the outer factor
  // this is the lower-left block b_hat plus its adjoint.
  Matrix h = Matrix::Zero(n, n);
  h.block(m, 0, m, m) = p.coupling * cavity_lower;
  h.block(0, m, m, m) = p.coupling * cavity_lower.adjoint();

  Matrix b = Matrix::Zero(n, n);
  b.topLeftCorner(m, m) = cavity_lower;
  b.bottomRightCorner(m, m) = cavity_lower;

  LindbladModel model(std::move(h), {Jump{1.0, std::sqrt(p.kappa) * b}});

  Matrix v0 = Matrix::Zero(n, 1);
  v0.block(m, 0, m, 1) = coherent_amplitudes(m, v).cast<Complex>();
  return {std::move(model), std::move(v0)};
}

Matrix stiff_default_hamiltonian() {
  const double omega = 1.0e15;
  Matrix h = Matrix::Zero(6, 6);
  const double diag[6] = {0.0, 0.2, 0.9, 1.1, 1.3, 1.5};
  for (int i = 0; i < 6; ++i) h(i, i) = omega * diag[i];
  h(0, 1) = h(1, 0) = 0.8 * omega;  // dominant two-level transition
  for (int i = 1; i < 5; ++i) h(i, i + 1) = h(i + 1, i) = 0.05 * omega;
  return h;
}

Matrix stiff_default_initial() {
  Matrix v0 = Matrix::Constant(6, 1, Complex(1.0 / std::sqrt(6.0)));
  return v0;
}

LindbladModel build_stiff_decoherence(const Matrix& hamiltonian, double base_rate) {
  if (base_rate <= 0.0) throw std::invalid_argument("build_stiff_decoherence: base rate must be positive");
  Matrix h = hamiltonian.size() == 0 ? stiff_default_hamiltonian() : hamiltonian;
  if (h.rows() != h.cols() || h.rows() < 2)
    throw std::invalid_argument("build_stiff_decoherence: Hamiltonian must be square");
  const int n = static_cast<int>(h.rows());
  Matrix a = lowering(n);
  Matrix number_coupling = a.adjoint() * a;
  std::vector<Jump> jumps;
  jumps.push_back(Jump{1.0, (base_rate / std::sqrt(2.0)) * a});
  jumps.push_back(Jump{1.0, base_rate * number_coupling});
  return LindbladModel(std::move(h), std::move(jumps));
}

double excited_population(const Matrix& rho, int m) {
  if (m < 1 || rho.rows() != 2 * m || rho.cols() != 2 * m)
    throw std::invalid_argument("excited_population: state is not qubit x cavity shaped");
  return rho.block(m, m, m, m).trace().real();
}

double excited_population_factor(const Matrix& v, int m) {
  if (m < 1 || v.rows() != 2 * m)
    throw std::invalid_argument("excited_population_factor: factor is not qubit x cavity shaped");
  return v.bottomRows(m).squaredNorm();
}

double revival_time(double coupling, double amplitude) {
  if (coupling <= 0.0) throw std::invalid_argument("revival_time: coupling must be positive");
  return 2.0 * M_PI * std::abs(amplitude) / coupling;
}

double l2_time_error(std::span<const double> series, std::span<const double> reference,
                     double dt) {
  if (series.size() != reference.size())
    throw std::invalid_argument("l2_time_error: series lengths differ");
  if (series.size() < 2) throw std::invalid_argument("l2_time_error: need at least two samples");
  if (!(dt > 0.0)) throw std::invalid_argument("l2_time_error: dt must be positive");
  double acc = 0.0;
  for (std::size_t n = 1; n < series.size(); ++n) {
    const double d = series[n] - reference[n];
    acc += d * d;
  }
  return std::sqrt(dt * acc);
}

std::vector<double> subsample_series(std::span<const double> fine, int factor) {
  if (factor < 1) throw std::invalid_argument("subsample_series: factor must be >= 1");
  if (fine.size() < 2 || (fine.size() - 1) % static_cast<std::size_t>(factor) != 0)
    throw std::invalid_argument("subsample_series: grid mismatch beyond subsampling");
  std::vector<double> out;
  out.reserve((fine.size() - 1) / factor + 1);
  for (std::size_t n = 0; n < fine.size(); n += factor) out.push_back(fine[n]);
  return out;
}

ScenarioBundle jc_bundle(const JCParams& p) {
  auto [model, v0] = build_jaynes_cummings(p);
  const int m = p.m;
  ScenarioBundle bundle{std::move(model), std::move(v0), {}, {}};
  bundle.observe_dense = [m](const Matrix& rho) { return excited_population(rho, m); };
  bundle.observe_factor = [m](const Matrix& v) { return excited_population_factor(v, m); };
  return bundle;
}

ScenarioBundle stiff_bundle(const Matrix& hamiltonian, double base_rate, int observe_index) {
  LindbladModel model = build_stiff_decoherence(hamiltonian, base_rate);
  if (observe_index < 0 || observe_index >= model.dim())
    throw std::invalid_argument("stiff_bundle: observable index out of range");
  Matrix v0 = model.dim() == 6 ? stiff_default_initial()
                               : Matrix::Constant(model.dim(), 1,
                                                  Complex(1.0 / std::sqrt(double(model.dim()))));
  ScenarioBundle bundle{std::move(model), std::move(v0), {}, {}};
  const int idx = observe_index;
  bundle.observe_dense = [idx](const Matrix& rho) { return rho(idx, idx).real(); };
  bundle.observe_factor = [idx](const Matrix& v) { return v.row(idx).squaredNorm(); };
  return bundle;
}

std::vector<double> observable_series(const ScenarioBundle& scenario, const ButcherTableau& tab,
                                      const MethodSpec& method, int steps, double t_final) {
  if (steps < 1) throw std::invalid_argument("observable_series: need at least one step");
  if (!(t_final > 0.0)) throw std::invalid_argument("observable_series: t_final must be positive");
  const double dt = t_final / steps;
  std::vector<double> out;
  out.reserve(steps + 1);

  if (method.kind == MethodSpec::Kind::PlainRk) {
    Matrix rho = normalize_trace(Matrix(scenario.initial_factor * scenario.initial_factor.adjoint()));
    out.push_back(scenario.observe_dense(rho));
    for (int n = 0; n < steps; ++n) {
      rho = rk_step_dense(scenario.model, tab, dt, rho);
      out.push_back(scenario.observe_dense(rho));
    }
    return out;
  }

  Matrix generator = effective_generator(scenario.model);
  FlowOperator flow = method.exact_flow ? FlowOperator::exact(std::move(generator))
                                        : FlowOperator::taylor(std::move(generator),
                                                               method.taylor_order);
  if (method.kind == MethodSpec::Kind::IfDense) {
    Matrix rho = normalize_trace(Matrix(scenario.initial_factor * scenario.initial_factor.adjoint()));
    out.push_back(scenario.observe_dense(rho));
    for (int n = 0; n < steps; ++n) {
      rho = if_step_dense(scenario.model, flow, tab, dt, rho);
      out.push_back(scenario.observe_dense(rho));
    }
    return out;
  }

  TruncationPolicy policy = method.policy;
  if (method.epsilon_dt_power > 0) policy.epsilon = std::pow(dt, method.epsilon_dt_power);
  if (policy.pre_truncate && policy.epsilon_pre == 0.0)
    policy.epsilon_pre = std::pow(dt, tab.order);
  Matrix v = normalize_factor(scenario.initial_factor);
  out.push_back(scenario.observe_factor(v));
  for (int n = 0; n < steps; ++n) {
    v = if_step_lowrank(scenario.model, flow, tab, dt, policy, v);
    out.push_back(scenario.observe_factor(v));
  }
  return out;
}

std::vector<ConvergenceRow> convergence_study(const ScenarioBundle& scenario,
                                              const ButcherTableau& tab, double t_final,
                                              const std::vector<MethodSpec>& methods,
                                              const std::vector<int>& step_counts,
                                              const ReferenceSpec& ref, int max_workers) {
  if (methods.empty() || step_counts.empty())
    throw std::invalid_argument("convergence_study: nothing to run");
  std::vector<int> steps_sorted = step_counts;
  std::sort(steps_sorted.begin(), steps_sorted.end());
  for (std::size_t i = 0; i + 1 < steps_sorted.size(); ++i)
    if (steps_sorted[i] == steps_sorted[i + 1])
      throw std::invalid_argument("convergence_study: duplicate step count");
  if (steps_sorted.front() < 1) throw std::invalid_argument("convergence_study: steps must be >= 1");

  // Reference samples on each member grid.
  std::vector<std::vector<double>> ref_on_grid(steps_sorted.size());
  if (ref.analytic) {
    for (std::size_t k = 0; k < steps_sorted.size(); ++k) {
      const int s = steps_sorted[k];
      const double dt = t_final / s;
      ref_on_grid[k].reserve(s + 1);
      for (int n = 0; n <= s; ++n) ref_on_grid[k].push_back(ref.analytic(n * dt));
    }
  } else {
    if (ref.self_steps < steps_sorted.back())
      throw std::invalid_argument("convergence_study: reference grid coarser than members");
    for (int s : steps_sorted)
      if (ref.self_steps % s != 0)
        throw std::invalid_argument("convergence_study: grid mismatch beyond subsampling");
    MethodSpec ref_method;
    ref_method.label = "reference";
    ref_method.kind = MethodSpec::Kind::IfDense;
    std::vector<double> fine = observable_series(scenario, tab, ref_method, ref.self_steps, t_final);
    for (std::size_t k = 0; k < steps_sorted.size(); ++k)
      ref_on_grid[k] = subsample_series(fine, ref.self_steps / steps_sorted[k]);
  }

  struct Job {
    std::size_t method_idx;
    std::size_t steps_idx;
  };
  std::vector<Job> jobs;
  for (std::size_t mi = 0; mi < methods.size(); ++mi)
    for (std::size_t si = 0; si < steps_sorted.size(); ++si) jobs.push_back({mi, si});
  std::vector<double> errors(jobs.size(), 0.0);
  std::vector<std::exception_ptr> failures(jobs.size());

  auto run_job = [&](std::size_t idx) {
    const Job& job = jobs[idx];
    const int s = steps_sorted[job.steps_idx];
    const double dt = t_final / s;
    std::vector<double> series =
        observable_series(scenario, tab, methods[job.method_idx], s, t_final);
    errors[idx] = l2_time_error(series, ref_on_grid[job.steps_idx], dt);
  };

  const int workers = worker_count(static_cast<int>(jobs.size()), max_workers);
  if (workers <= 1) {
    for (std::size_t idx = 0; idx < jobs.size(); ++idx) run_job(idx);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t idx = next.fetch_add(1);
          if (idx >= jobs.size()) return;
          try {
            run_job(idx);
          } catch (...) {
            failures[idx] = std::current_exception();
          }
        }
      });
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& err : failures)
      if (err) std::rethrow_exception(err);
  }

  std::vector<ConvergenceRow> rows;
  rows.reserve(jobs.size());
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    double prev_error = 0.0;
    int prev_steps = 0;
    for (std::size_t si = 0; si < steps_sorted.size(); ++si) {
      ConvergenceRow row;
      row.method = methods[mi].label;
      row.steps = steps_sorted[si];
      row.error = errors[mi * steps_sorted.size() + si];
      // Orders between errors at reference precision are noise, not rates.
      const double floor = 1e-13;
      if (si == 0 || prev_error <= floor || row.error <= floor)
        row.order = std::numeric_limits<double>::quiet_NaN();
      else
        row.order = std::log(prev_error / row.error) /
                    std::log(double(row.steps) / double(prev_steps));
      prev_error = row.error;
      prev_steps = row.steps;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace lk
