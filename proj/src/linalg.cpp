#include "lk/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <stdexcept>

namespace lk {

bool is_finite(const Matrix& a) { return a.allFinite(); }

Matrix matexp(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matexp: matrix must be square");
  if (!is_finite(a)) throw std::invalid_argument("matexp: non-finite entries");
  return a.exp();
}

PivotedQR pivoted_qr(const Matrix& w) {
  if (w.size() == 0) throw std::invalid_argument("pivoted_qr: empty matrix");
  if (!is_finite(w)) throw std::invalid_argument("pivoted_qr: non-finite entries");
  const Eigen::Index n = w.rows();
  const Eigen::Index k = w.cols();
  const Eigen::Index m = std::min(n, k);

  Eigen::ColPivHouseholderQR<Matrix> qr(w);
  PivotedQR out;
  out.q = qr.householderQ() * Matrix::Identity(n, m);
  Matrix top = qr.matrixR().topRows(m);
  out.r = top.triangularView<Eigen::Upper>();
  out.perm = qr.colsPermutation().indices();
  return out;
}

Svd svd(const Matrix& m) {
  if (m.size() == 0) throw std::invalid_argument("svd: empty matrix");
  if (!is_finite(m)) throw std::invalid_argument("svd: non-finite entries");
  Eigen::BDCSVD<Matrix> s(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return Svd{s.matrixU(), s.singularValues(), s.matrixV()};
}

HermitianEig hermitian_eig(const Matrix& a, double herm_tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_eig: matrix must be square");
  if (!is_finite(a)) throw std::invalid_argument("hermitian_eig: non-finite entries");
  const double defect = (a - a.adjoint()).norm();
  if (defect > herm_tol * std::max(a.norm(), 1e-300))
    throw std::invalid_argument("hermitian_eig: input exceeds Hermiticity tolerance");
  Matrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: eigensolver failed");
  return HermitianEig{es.eigenvalues(), es.eigenvectors()};
}

}  // namespace lk
