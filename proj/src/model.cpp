#include "lk/model.hpp"

#include <stdexcept>
#include <utility>

namespace lk {

LindbladModel::LindbladModel(Matrix hamiltonian, std::vector<Jump> jumps)
    : h_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
  if (h_.size() == 0 || h_.rows() != h_.cols())
    throw std::invalid_argument("LindbladModel: Hamiltonian must be square and non-empty");
  if (!is_finite(h_)) throw std::invalid_argument("LindbladModel: non-finite Hamiltonian");
  if ((h_ - h_.adjoint()).norm() > 1e-10 * std::max(h_.norm(), 1e-300))
    throw std::invalid_argument("LindbladModel: Hamiltonian exceeds Hermiticity tolerance");
  for (const Jump& j : jumps_) {
    if (j.rate < 0.0) throw std::invalid_argument("LindbladModel: negative jump rate");
    if (j.op.rows() != h_.rows() || j.op.cols() != h_.cols())
      throw std::invalid_argument("LindbladModel: jump operator dimension mismatch");
    if (!is_finite(j.op)) throw std::invalid_argument("LindbladModel: non-finite jump operator");
  }
}

Matrix effective_generator(const LindbladModel& model) {
  const Complex i_unit(0.0, 1.0);
  Matrix j = -i_unit * model.hamiltonian();
  for (const Jump& jump : model.jumps())
    j -= 0.5 * jump.rate * (jump.op.adjoint() * jump.op);
  return j;
}

Matrix lindblad_rhs(const LindbladModel& model, const Matrix& rho) {
  if (rho.rows() != model.dim() || rho.cols() != model.dim())
    throw std::invalid_argument("lindblad_rhs: state dimension mismatch");
  const Complex i_unit(0.0, 1.0);
  const Matrix& h = model.hamiltonian();
  Matrix out = -i_unit * (h * rho - rho * h);
  for (const Jump& jump : model.jumps()) {
    Matrix lr = jump.op * rho;
    Matrix ldl = jump.op.adjoint() * jump.op;
    out += jump.rate * (lr * jump.op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  return out;
}

Matrix dissipator_apply(const LindbladModel& model, const Matrix& rho) {
  if (rho.rows() != model.dim() || rho.cols() != model.dim())
    throw std::invalid_argument("dissipator_apply: state dimension mismatch");
  Matrix out = Matrix::Zero(model.dim(), model.dim());
  for (const Jump& jump : model.jumps())
    out += jump.rate * (jump.op * rho * jump.op.adjoint());
  return out;
}

Matrix dissipator_columns(const LindbladModel& model, const Matrix& v, double scale) {
  if (v.rows() != model.dim()) throw std::invalid_argument("dissipator_columns: factor dimension mismatch");
  if (scale < 0.0) throw std::invalid_argument("dissipator_columns: negative scale");
  const int n = model.dim();
  const auto r = v.cols();
  const auto n_jumps = static_cast<Eigen::Index>(model.jumps().size());
  Matrix out(n, n_jumps * r);
  Eigen::Index col = 0;
  for (const Jump& jump : model.jumps()) {
    out.middleCols(col, r) = std::sqrt(scale * jump.rate) * (jump.op * v);
    col += r;
  }
  return out;
}

}  // namespace lk
