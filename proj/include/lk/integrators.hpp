// One-step integrators. The integrating-factor (IF) steps propagate the stage
// states with exp(J tau) and add only non-negatively weighted jump
// contributions, so each step is a Kraus map followed by a trace (dense) or
// Frobenius (factored) renormalization at the very end of the step.
#pragma once

#include "lk/flow.hpp"
#include "lk/model.hpp"
#include "lk/tableau.hpp"
#include "lk/truncation.hpp"

#include <vector>

namespace lk {

struct StepOptions {
  bool renormalize = true;    // divide by trace / Frobenius norm at step end
  bool force_tableau = false; // run a CP-invalid tableau anyway
};

// rho / tr(rho); throws when the trace is zero, negative, or non-finite.
Matrix normalize_trace(const Matrix& rho);
// v / ||v||_F; throws on a zero factor.
Matrix normalize_factor(const Matrix& v);

// Dense IF step: stage states U(c_i dt) rho0 U^dag + dt sum_j a_ij U((c_i-c_j) dt) D(rho_j) U^dag
// with D the gamma-weighted jump part; same pattern with weights b_i for the update.
Matrix if_step_dense(const LindbladModel& model, const FlowOperator& flow,
                     const ButcherTableau& tab, double dt, const Matrix& rho0,
                     const StepOptions& opts = {});

// Factored IF step: each stage assembles W = [U(c_i dt) V0 | per-stage jump blocks]
// and compresses it with the policy; the final factor is normalized to unit
// Frobenius norm when renormalization is on.
Matrix if_step_lowrank(const LindbladModel& model, const FlowOperator& flow,
                       const ButcherTableau& tab, double dt, const TruncationPolicy& policy,
                       const Matrix& v0, const StepOptions& opts = {});

// Plain explicit Runge-Kutta step on the full right-hand side (no flow, no CP
// guarantee); renormalization also re-symmetrizes since the raw update drifts.
Matrix rk_step_dense(const LindbladModel& model, const ButcherTableau& tab, double dt,
                     const Matrix& rho0, const StepOptions& opts = {});

// The Kraus operators of one un-normalized IF step: K = {U(dt)} plus
// sqrt(b_i dt gamma_a) U((1-c_i) dt) L_a K' over stages and jumps, recursively.
std::vector<Matrix> extract_kraus(const LindbladModel& model, const FlowOperator& flow,
                                  const ButcherTableau& tab, double dt);

// Number of Kraus operators the recursion yields for n_jumps jump operators.
long kraus_count(const ButcherTableau& tab, int n_jumps);

}  // namespace lk
