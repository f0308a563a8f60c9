// Lindblad generator: Hamiltonian plus weighted jump operators, all time-independent.
#pragma once

#include "lk/linalg.hpp"

#include <vector>

namespace lk {

struct Jump {
  double rate = 0.0;  // gamma >= 0
  Matrix op;          // same dimension as H
};

class LindbladModel {
 public:
  LindbladModel(Matrix hamiltonian, std::vector<Jump> jumps);

  int dim() const { return static_cast<int>(h_.rows()); }
  const Matrix& hamiltonian() const { return h_; }
  const std::vector<Jump>& jumps() const { return jumps_; }

 private:
  Matrix h_;
  std::vector<Jump> jumps_;
};

// J = -iH - (1/2) sum_a gamma_a L_a^dag L_a; drives the non-unitary flow exp(J t).
Matrix effective_generator(const LindbladModel& model);

// Full right-hand side: -i[H, rho] + sum_a gamma_a (L rho L^dag - (1/2){L^dag L, rho}).
Matrix lindblad_rhs(const LindbladModel& model, const Matrix& rho);

// The jump part alone: sum_a gamma_a L_a rho L_a^dag.
Matrix dissipator_apply(const LindbladModel& model, const Matrix& rho);

// Horizontal concatenation of sqrt(scale * gamma_a) L_a V over all jumps; scale >= 0.
// Shape N x (n_jumps * cols(V)); zero-width when the model has no jumps.
Matrix dissipator_columns(const LindbladModel& model, const Matrix& v, double scale);

}  // namespace lk
