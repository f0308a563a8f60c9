// Flow of the effective generator: application of U(tau) = exp(J tau) and its
// conjugation rho -> U rho U^dag. Offsets tau = coeff * dt are keyed by the
// exact (coeff, dt) pair so repeated stage offsets reuse one cached propagator.
#pragma once

#include "lk/linalg.hpp"

#include <map>
#include <mutex>
#include <utility>

namespace lk {

class FlowOperator {
 public:
  // Dense exp(J tau), evaluated once per distinct (coeff, dt) and cached.
  static FlowOperator exact(Matrix generator);
  // Degree-k truncated series applied factor-by-factor; stores no N x N propagator.
  static FlowOperator taylor(Matrix generator, int order);

  FlowOperator(const FlowOperator& other);
  FlowOperator& operator=(const FlowOperator& other);

  int dim() const { return static_cast<int>(j_.rows()); }
  bool is_exact() const { return exact_; }
  int taylor_order() const { return order_; }
  const Matrix& generator() const { return j_; }

  // U(coeff * dt) * m for an N x r block; coeff * dt < 0 is rejected.
  Matrix propagate(double coeff, double dt, const Matrix& m) const;
  // U rho U^dag for square rho.
  Matrix conjugate(double coeff, double dt, const Matrix& rho) const;
  // Dense U(coeff * dt); for the Taylor variant this materializes the series
  // applied to the identity and is not cached.
  Matrix propagator(double coeff, double dt) const;

 private:
  FlowOperator(Matrix j, bool exact, int order);

  const Matrix& cached_exact(double coeff, double dt) const;
  Matrix taylor_apply(double tau, const Matrix& m) const;

  Matrix j_;
  bool exact_ = true;
  int order_ = 0;
  mutable std::map<std::pair<double, double>, Matrix> cache_;
  mutable std::mutex mutex_;
};

}  // namespace lk
