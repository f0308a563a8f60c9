#include "lk/runner.hpp"

#include "lk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lk {
namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("run: cannot open output file '" + path + "'");
  return out;
}

ScenarioBundle resolve_bundle(const RunConfig& cfg) {
  switch (cfg.scenario) {
    case RunConfig::Scenario::Jc:
      return jc_bundle(cfg.jc);
    case RunConfig::Scenario::Stiff:
      return stiff_bundle(cfg.stiff_h, cfg.stiff_rate,
                          cfg.observe_index < 0 ? 2 : cfg.observe_index);
    case RunConfig::Scenario::Custom:
      break;
  }
  LindbladModel model(cfg.custom_h, cfg.custom_jumps);
  if (cfg.custom_v0.rows() != cfg.custom_h.rows())
    throw std::invalid_argument("run: v0 row count must match the Hamiltonian dimension");
  const int idx = cfg.observe_index < 0 ? 0 : cfg.observe_index;
  if (idx < 0 || idx >= cfg.custom_h.rows())
    throw std::invalid_argument("run: observe_index out of range");
  ScenarioBundle b{std::move(model), normalize_factor(cfg.custom_v0),
                   [idx](const Matrix& rho) { return rho(idx, idx).real(); },
                   [idx](const Matrix& v) { return v.row(idx).squaredNorm(); }};
  return b;
}

FlowOperator make_flow(const RunConfig& cfg, const LindbladModel& model) {
  const Matrix j = effective_generator(model);
  return cfg.exact_flow ? FlowOperator::exact(j) : FlowOperator::taylor(j, cfg.taylor_order);
}

TruncationPolicy resolve_policy(const RunConfig& cfg, const ButcherTableau& tab) {
  TruncationPolicy policy = cfg.policy;
  if (cfg.epsilon_dt_power > 0) policy.epsilon = std::pow(cfg.dt, cfg.epsilon_dt_power);
  if (policy.pre_truncate && policy.epsilon_pre == 0.0)
    policy.epsilon_pre = std::pow(cfg.dt, tab.order);
  return policy;
}

int run_simulate(const RunConfig& cfg) {
  const ScenarioBundle bundle = resolve_bundle(cfg);
  const bool lowrank = cfg.integrator == RunConfig::Integrator::IfLowRank;
  const bool plain_rk = cfg.integrator == RunConfig::Integrator::Rk;
  const TruncationPolicy policy = resolve_policy(cfg, cfg.tableau);
  const StepOptions opts{cfg.renormalize, cfg.force_tableau};
  FlowOperator flow = plain_rk ? FlowOperator::taylor(Matrix::Zero(1, 1), 1)
                               : make_flow(cfg, bundle.model);

  Matrix state = lowrank ? bundle.initial_factor
                         : Matrix(bundle.initial_factor * bundle.initial_factor.adjoint());

  std::ofstream out = open_out(cfg.out_path.empty() ? "simulate.csv" : cfg.out_path);
  out << "t,trace_defect,herm_defect,min_eig,rank,P_e\n";

  double max_trace_defect = 0.0;
  double min_eig_seen = 0.0;
  double last_obs = 0.0;
  int last_rank = 0;

  const auto sample = [&](int n) {
    CPTPReport rep = lowrank ? cptp_report_factor(state) : cptp_report(state);
    const int rank = lowrank ? static_cast<int>(state.cols()) : rep.rank_eps;
    const double obs = lowrank ? bundle.observe_factor(state) : bundle.observe_dense(state);
    out << fmt(n * cfg.dt) << ',' << fmt(rep.trace_defect) << ',' << fmt(rep.herm_defect) << ','
        << fmt(rep.min_eig) << ',' << rank << ',' << fmt(obs) << '\n';
    max_trace_defect = std::max(max_trace_defect, rep.trace_defect);
    min_eig_seen = std::min(min_eig_seen, rep.min_eig);
    last_obs = obs;
    last_rank = rank;
    return rep.min_eig;
  };

  sample(0);
  for (int n = 1; n <= cfg.steps; ++n) {
    if (plain_rk) {
      state = rk_step_dense(bundle.model, cfg.tableau, cfg.dt, state, opts);
    } else if (lowrank) {
      state = if_step_lowrank(bundle.model, flow, cfg.tableau, cfg.dt, policy, state, opts);
    } else {
      state = if_step_dense(bundle.model, flow, cfg.tableau, cfg.dt, state, opts);
    }
    if (n % cfg.sample_stride != 0 && n != cfg.steps) continue;
    const double min_eig = sample(n);
    if (!plain_rk && min_eig < -1e-6) {
      out.flush();
      std::cerr << "monitor: state lost positivity at step " << n
                << " (min eigenvalue " << fmt(min_eig) << ")\n";
      return 2;
    }
  }

  std::cout << "steps = " << cfg.steps << "\n"
            << "dt = " << fmt(cfg.dt) << "\n"
            << "final_P_e = " << fmt(last_obs) << "\n"
            << "final_rank = " << last_rank << "\n"
            << "max_trace_defect = " << fmt(max_trace_defect) << "\n"
            << "min_eigenvalue = " << fmt(min_eig_seen) << "\n";
  return 0;
}

int run_converge(const RunConfig& cfg) {
  const ScenarioBundle bundle = resolve_bundle(cfg);
  ReferenceSpec ref;
  ref.self_steps = cfg.ref_self_steps;
  std::vector<ConvergenceRow> rows =
      convergence_study(bundle, cfg.tableau, cfg.t_final, cfg.methods, cfg.steps_list, ref);
  std::stable_sort(rows.begin(), rows.end(), [](const ConvergenceRow& a, const ConvergenceRow& b) {
    return a.method != b.method ? a.method < b.method : a.steps < b.steps;
  });

  std::ofstream out = open_out(cfg.out_path.empty() ? "converge.csv" : cfg.out_path);
  out << "method,steps,error,order\n";
  for (const ConvergenceRow& r : rows) {
    out << r.method << ',' << r.steps << ',' << fmt(r.error) << ',';
    if (!std::isnan(r.order)) out << fmt(r.order);
    out << '\n';
    std::cout << r.method << " steps=" << r.steps << " error=" << fmt(r.error)
              << " order=" << (std::isnan(r.order) ? std::string("-") : fmt(r.order)) << "\n";
  }
  return 0;
}

int run_kraus_verify(const RunConfig& cfg) {
  const ScenarioBundle bundle = resolve_bundle(cfg);
  const LindbladModel& model = bundle.model;
  const int n = static_cast<int>(model.hamiltonian().rows());
  FlowOperator flow = make_flow(cfg, model);

  const std::vector<Matrix> kraus = extract_kraus(model, flow, cfg.tableau, cfg.dt);
  const long count = kraus_count(cfg.tableau, static_cast<int>(model.jumps().size()));

  const StepOptions raw{false, false};
  std::mt19937 gen(cfg.seed);
  std::normal_distribution<double> dist;
  double max_defect = 0.0;
  for (int probe = 0; probe < cfg.n_random; ++probe) {
    Matrix g(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) g(r, c) = Complex(dist(gen), dist(gen));
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    Matrix recon = Matrix::Zero(n, n);
    for (const Matrix& k : kraus) recon += k * rho * k.adjoint();
    const Matrix direct = if_step_dense(model, flow, cfg.tableau, cfg.dt, rho, raw);
    max_defect = std::max(max_defect, (recon - direct).norm());
  }

  const Matrix choi = choi_matrix(
      [&](const Matrix& rho) { return if_step_dense(model, flow, cfg.tableau, cfg.dt, rho, raw); },
      n);
  const double choi_min = hermitian_eig(choi).values.minCoeff();
  const double choi_floor = -1e-10 * choi.norm();

  std::cout << "kraus_count = " << kraus.size() << "\n"
            << "max_reconstruction_defect = " << fmt(max_defect) << "\n"
            << "choi_min_eigenvalue = " << fmt(choi_min) << "\n";
  if (static_cast<long>(kraus.size()) != count)
    throw std::runtime_error("kraus-verify: operator count does not match the stage formula");

  if (!cfg.out_path.empty()) {
    std::ofstream out = open_out(cfg.out_path);
    out << "quantity,value\n"
        << "kraus_count," << kraus.size() << '\n'
        << "max_reconstruction_defect," << fmt(max_defect) << '\n'
        << "choi_min_eigenvalue," << fmt(choi_min) << '\n';
  }
  return (max_defect <= 1e-12 && choi_min >= choi_floor) ? 0 : 2;
}

int run_choi_probe(const RunConfig& cfg) {
  const ScenarioBundle bundle = resolve_bundle(cfg);
  const int n = static_cast<int>(bundle.model.hamiltonian().rows());
  const bool plain_rk = cfg.integrator == RunConfig::Integrator::Rk;
  const StepOptions raw{false, cfg.force_tableau};
  FlowOperator flow = plain_rk ? FlowOperator::taylor(Matrix::Zero(1, 1), 1)
                               : make_flow(cfg, bundle.model);

  const Matrix choi = choi_matrix(
      [&](const Matrix& rho) {
        return plain_rk ? rk_step_dense(bundle.model, cfg.tableau, cfg.dt, rho, raw)
                        : if_step_dense(bundle.model, flow, cfg.tableau, cfg.dt, rho, raw);
      },
      n);
  const RealVector eig = hermitian_eig(choi).values;

  std::ofstream out = open_out(cfg.out_path.empty() ? "choi.csv" : cfg.out_path);
  out << "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < eig.size(); ++i) out << i << ',' << fmt(eig(i)) << '\n';

  double negativity = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) negativity += std::min(eig(i), 0.0);
  std::cout << "choi_dim = " << eig.size() << "\n"
            << "choi_min_eigenvalue = " << fmt(eig.minCoeff()) << "\n"
            << "choi_max_eigenvalue = " << fmt(eig.maxCoeff()) << "\n"
            << "choi_negativity = " << fmt(-negativity) << "\n";

  // Positivity is only promised by the integrating-factor map; the plain
  // Runge-Kutta probe exists to expose its violations, so it always exits 0.
  if (!plain_rk && eig.minCoeff() < -1e-10 * choi.norm()) return 2;
  return 0;
}

}  // namespace

int run(const RunConfig& cfg) {
  switch (cfg.mode) {
    case RunConfig::Mode::Simulate:
      return run_simulate(cfg);
    case RunConfig::Mode::Converge:
      return run_converge(cfg);
    case RunConfig::Mode::KrausVerify:
      return run_kraus_verify(cfg);
    case RunConfig::Mode::ChoiProbe:
      return run_choi_probe(cfg);
  }
  throw std::logic_error("run: unknown mode");
}

}  // namespace lk
