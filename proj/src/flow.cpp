#include "lk/flow.hpp"

#include <stdexcept>

namespace lk {

FlowOperator::FlowOperator(Matrix j, bool exact, int order)
    : j_(std::move(j)), exact_(exact), order_(order) {
  if (j_.size() == 0 || j_.rows() != j_.cols())
    throw std::invalid_argument("FlowOperator: generator must be square and non-empty");
  if (!is_finite(j_)) throw std::invalid_argument("FlowOperator: non-finite generator");
}

FlowOperator::FlowOperator(const FlowOperator& other)
    : j_(other.j_), exact_(other.exact_), order_(other.order_) {
  std::lock_guard<std::mutex> lock(other.mutex_);
  cache_ = other.cache_;
}

FlowOperator& FlowOperator::operator=(const FlowOperator& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_, other.mutex_);
  j_ = other.j_;
  exact_ = other.exact_;
  order_ = other.order_;
  cache_ = other.cache_;
  return *this;
}

FlowOperator FlowOperator::exact(Matrix generator) {
  return FlowOperator(std::move(generator), true, 0);
}

FlowOperator FlowOperator::taylor(Matrix generator, int order) {
  if (order < 1) throw std::invalid_argument("FlowOperator: Taylor order must be >= 1");
  return FlowOperator(std::move(generator), false, order);
}

const Matrix& FlowOperator::cached_exact(double coeff, double dt) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto key = std::make_pair(coeff, dt);
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, matexp(j_ * (coeff * dt))).first;
  return it->second;
}

Matrix FlowOperator::taylor_apply(double tau, const Matrix& m) const {
  Matrix acc = m;
  Matrix term = m;
  for (int q = 1; q <= order_; ++q) {
    term = (tau / q) * (j_ * term);
    acc += term;
  }
  return acc;
}

Matrix FlowOperator::propagate(double coeff, double dt, const Matrix& m) const {
  if (m.rows() != j_.rows()) throw std::invalid_argument("FlowOperator: dimension mismatch");
  const double tau = coeff * dt;
  if (tau < 0.0) throw std::invalid_argument("FlowOperator: negative flow offset");
  if (tau == 0.0 || m.cols() == 0) return m;
  if (exact_) return cached_exact(coeff, dt) * m;
  return taylor_apply(tau, m);
}

Matrix FlowOperator::conjugate(double coeff, double dt, const Matrix& rho) const {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("FlowOperator: state must be square");
  if (rho.rows() != j_.rows()) throw std::invalid_argument("FlowOperator: dimension mismatch");
  const double tau = coeff * dt;
  if (tau < 0.0) throw std::invalid_argument("FlowOperator: negative flow offset");
  if (tau == 0.0) return rho;
  if (exact_) {
    const Matrix& u = cached_exact(coeff, dt);
    return u * rho * u.adjoint();
  }
  Matrix half = taylor_apply(tau, rho);
  return taylor_apply(tau, Matrix(half.adjoint())).adjoint();
}

Matrix FlowOperator::propagator(double coeff, double dt) const {
  const double tau = coeff * dt;
  if (tau < 0.0) throw std::invalid_argument("FlowOperator: negative flow offset");
  if (tau == 0.0) return Matrix::Identity(j_.rows(), j_.cols());
  if (exact_) return cached_exact(coeff, dt);
  return taylor_apply(tau, Matrix::Identity(j_.rows(), j_.cols()));
}

}  // namespace lk
