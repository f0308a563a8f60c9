#include "lk/integrators.hpp"

#include <map>
#include <stdexcept>

namespace lk {

namespace {

void gate_tableau(const ButcherTableau& tab, bool force) {
  CPValidity validity = validate_tableau(tab);
  if (validity.is_cp_valid || force) return;
  throw std::invalid_argument("tableau '" + tab.name +
                              "' is not CP-valid; pass the force option to run it anyway");
}

void check_step_inputs(const LindbladModel& model, const FlowOperator& flow, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  if (flow.dim() != model.dim()) throw std::invalid_argument("step: flow/model dimension mismatch");
}

}  // namespace

Matrix normalize_trace(const Matrix& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("normalize_trace: matrix must be square");
  const double tr = rho.trace().real();
  if (!std::isfinite(tr) || tr <= 0.0)
    throw std::runtime_error("normalize_trace: trace is not positive");
  return rho / tr;
}

Matrix normalize_factor(const Matrix& v) {
  const double norm = v.norm();
  if (!std::isfinite(norm) || norm <= 0.0)
    throw std::runtime_error("normalize_factor: factor has zero norm");
  return v / norm;
}

Matrix if_step_dense(const LindbladModel& model, const FlowOperator& flow,
                     const ButcherTableau& tab, double dt, const Matrix& rho0,
                     const StepOptions& opts) {
  check_step_inputs(model, flow, dt);
  if (rho0.rows() != model.dim() || rho0.cols() != model.dim())
    throw std::invalid_argument("if_step_dense: state dimension mismatch");
  gate_tableau(tab, opts.force_tableau);
  if (opts.renormalize && std::abs(rho0.trace() - Complex(1.0)) > 1e-10)
    throw std::invalid_argument("if_step_dense: input state trace must be 1");

  const int s = tab.stages();
  std::vector<Matrix> diss(s);
  for (int i = 0; i < s; ++i) {
    Matrix stage = flow.conjugate(tab.c(i), dt, rho0);
    for (int j = 0; j < i; ++j)
      if (tab.a(i, j) != 0.0)
        stage += (dt * tab.a(i, j)) * flow.conjugate(tab.c(i) - tab.c(j), dt, diss[j]);
    diss[i] = dissipator_apply(model, stage);
  }
  Matrix out = flow.conjugate(1.0, dt, rho0);
  for (int i = 0; i < s; ++i)
    if (tab.b(i) != 0.0) out += (dt * tab.b(i)) * flow.conjugate(1.0 - tab.c(i), dt, diss[i]);

  if (!is_finite(out)) throw std::runtime_error("if_step_dense: non-finite step result");
  if (opts.renormalize) out = normalize_trace(out);
  return out;
}

Matrix if_step_lowrank(const LindbladModel& model, const FlowOperator& flow,
                       const ButcherTableau& tab, double dt, const TruncationPolicy& policy,
                       const Matrix& v0, const StepOptions& opts) {
  check_step_inputs(model, flow, dt);
  if (v0.rows() != model.dim()) throw std::invalid_argument("if_step_lowrank: factor dimension mismatch");
  if (v0.cols() < 1 || v0.norm() == 0.0)
    throw std::invalid_argument("if_step_lowrank: initial factor must be nonzero");
  gate_tableau(tab, opts.force_tableau);

  // Propagated copies of v0 are shared across stages that use the same node.
  std::map<double, Matrix> v0_at;
  auto flow_v0 = [&](double coeff) -> const Matrix& {
    auto it = v0_at.find(coeff);
    if (it == v0_at.end()) it = v0_at.emplace(coeff, flow.propagate(coeff, dt, v0)).first;
    return it->second;
  };

  const int s = tab.stages();
  std::vector<Matrix> stage_v(s);
  auto assemble = [&](double node, const auto& weight_of, int upto) -> Matrix {
    std::vector<Matrix> blocks;
    blocks.push_back(flow_v0(node));
    Eigen::Index width = blocks[0].cols();
    for (int j = 0; j < upto; ++j) {
      const double w = weight_of(j);
      if (w == 0.0) continue;
      Matrix block = dissipator_columns(model, stage_v[j], dt * w);
      if (block.cols() == 0) continue;
      block = flow.propagate(node - tab.c(j), dt, block);
      if (policy.pre_truncate) {
        TruncationPolicy pre;
        pre.epsilon = policy.epsilon_pre;
        block = truncate(block, pre);
        if (block.norm() == 0.0) continue;
      }
      width += block.cols();
      blocks.push_back(std::move(block));
    }
    Matrix w_all(model.dim(), width);
    Eigen::Index col = 0;
    for (const Matrix& b : blocks) {
      w_all.middleCols(col, b.cols()) = b;
      col += b.cols();
    }
    return w_all;
  };

  for (int i = 0; i < s; ++i) {
    Matrix w = assemble(tab.c(i), [&](int j) { return tab.a(i, j); }, i);
    stage_v[i] = truncate(w, policy);
  }
  Matrix w_final = assemble(1.0, [&](int j) { return tab.b(j); }, s);
  if (w_final.norm() == 0.0)
    throw std::runtime_error("if_step_lowrank: step produced an all-zero factor");
  Matrix v1 = truncate(w_final, policy);

  if (!is_finite(v1)) throw std::runtime_error("if_step_lowrank: non-finite step result");
  if (opts.renormalize) v1 = normalize_factor(v1);
  return v1;
}

Matrix rk_step_dense(const LindbladModel& model, const ButcherTableau& tab, double dt,
                     const Matrix& rho0, const StepOptions& opts) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk_step_dense: dt must be positive");
  if (rho0.rows() != model.dim() || rho0.cols() != model.dim())
    throw std::invalid_argument("rk_step_dense: state dimension mismatch");
  validate_tableau(tab);  // structural checks only; CP plays no role here

  const int s = tab.stages();
  std::vector<Matrix> k(s);
  for (int i = 0; i < s; ++i) {
    Matrix y = rho0;
    for (int j = 0; j < i; ++j)
      if (tab.a(i, j) != 0.0) y += (dt * tab.a(i, j)) * k[j];
    k[i] = lindblad_rhs(model, y);
  }
  Matrix out = rho0;
  for (int i = 0; i < s; ++i)
    if (tab.b(i) != 0.0) out += (dt * tab.b(i)) * k[i];

  if (!is_finite(out)) throw std::runtime_error("rk_step_dense: non-finite step result");
  if (opts.renormalize) {
    out = 0.5 * (out + out.adjoint());
    out = normalize_trace(out);
  }
  return out;
}

std::vector<Matrix> extract_kraus(const LindbladModel& model, const FlowOperator& flow,
                                  const ButcherTableau& tab, double dt) {
  check_step_inputs(model, flow, dt);
  CPValidity validity = validate_tableau(tab);
  if (!validity.is_cp_valid)
    throw std::invalid_argument("extract_kraus: tableau '" + tab.name + "' is not CP-valid");

  const int s = tab.stages();
  std::vector<std::vector<Matrix>> stage_k(s);
  auto extend = [&](std::vector<Matrix>& out, double node, double weight,
                    const std::vector<Matrix>& base, double from_node) {
    for (const Jump& jump : model.jumps()) {
      Matrix ul = std::sqrt(dt * weight * jump.rate) *
                  flow.propagate(node - from_node, dt, jump.op);
      for (const Matrix& k : base) out.push_back(ul * k);
    }
  };

  for (int i = 0; i < s; ++i) {
    stage_k[i].push_back(flow.propagator(tab.c(i), dt));
    for (int j = 0; j < i; ++j)
      if (tab.a(i, j) > 0.0) extend(stage_k[i], tab.c(i), tab.a(i, j), stage_k[j], tab.c(j));
  }
  std::vector<Matrix> out;
  out.push_back(flow.propagator(1.0, dt));
  for (int i = 0; i < s; ++i)
    if (tab.b(i) > 0.0) extend(out, 1.0, tab.b(i), stage_k[i], tab.c(i));
  return out;
}

long kraus_count(const ButcherTableau& tab, int n_jumps) {
  if (n_jumps < 0) throw std::invalid_argument("kraus_count: negative jump count");
  const int s = tab.stages();
  std::vector<long> stage(s);
  for (int i = 0; i < s; ++i) {
    stage[i] = 1;
    for (int j = 0; j < i; ++j)
      if (tab.a(i, j) > 0.0) stage[i] += n_jumps * stage[j];
  }
  long total = 1;
  for (int i = 0; i < s; ++i)
    if (tab.b(i) > 0.0) total += n_jumps * stage[i];
  return total;
}

}  // namespace lk
