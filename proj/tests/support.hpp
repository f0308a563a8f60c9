// Shared helpers for the test suites: seeded random matrices and small fits.
#pragma once

#include "lk/linalg.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace lk::testing {

inline Matrix random_matrix(int rows, int cols, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline Matrix random_hermitian(int n, std::mt19937& rng) {
  Matrix a = random_matrix(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

// PSD with trace 1, generic rank min(n, r).
inline Matrix random_density(int n, int r, std::mt19937& rng) {
  Matrix v = random_matrix(n, r, rng);
  Matrix rho = v * v.adjoint();
  return rho / rho.trace().real();
}

inline Matrix random_unitary(int n, std::mt19937& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

// Least-squares slope of log2(err) against log2(h): observed convergence order.
inline double fit_order(const std::vector<double>& h, const std::vector<double>& err) {
  const int n = static_cast<int>(h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log2(h[i]);
    const double y = std::log2(err[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace lk::testing
