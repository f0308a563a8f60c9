#include "lk/truncation.hpp"

#include <stdexcept>

namespace lk {

namespace {

void check_policy(const TruncationPolicy& policy) {
  if (policy.epsilon < 0.0) throw std::invalid_argument("truncate: negative epsilon");
  if (policy.r_max && *policy.r_max < 1) throw std::invalid_argument("truncate: r_max must be >= 1");
  if (policy.epsilon_pre < 0.0) throw std::invalid_argument("truncate: negative epsilon_pre");
}

}  // namespace

int keep_count(const RealVector& energies_descending, double eps_sq) {
  int k = static_cast<int>(energies_descending.size());
  while (k > 0 && energies_descending(k - 1) <= 0.0) --k;
  double acc = 0.0;
  while (k > 0) {
    const double with_next = acc + energies_descending(k - 1);
    if (with_next < eps_sq) {
      acc = with_next;
      --k;
    } else {
      break;
    }
  }
  return k;
}

Matrix truncate(const Matrix& w, const TruncationPolicy& policy) {
  if (w.size() == 0) throw std::invalid_argument("truncate: empty factor");
  if (!is_finite(w)) throw std::invalid_argument("truncate: non-finite factor");
  check_policy(policy);
  const Eigen::Index n = w.rows();
  if (w.norm() == 0.0) return Matrix::Zero(n, 1);

  PivotedQR qr = pivoted_qr(w);
  // Singular values of R are those of W Pi; the permutation never changes them.
  Eigen::BDCSVD<Matrix> s(qr.r, Eigen::ComputeThinU);
  const RealVector& sigma = s.singularValues();
  RealVector energies = sigma.array().square();
  int r = keep_count(energies, policy.epsilon * policy.epsilon);
  if (policy.r_max) r = std::min(r, *policy.r_max);
  if (r == 0) return Matrix::Zero(n, 1);
  return qr.q * (s.matrixU().leftCols(r) * sigma.head(r).cast<Complex>().asDiagonal());
}

KrausWitness kraus_witness(const Matrix& a, const TruncationPolicy& policy) {
  if (a.size() == 0 || a.rows() != a.cols())
    throw std::invalid_argument("kraus_witness: matrix must be square and non-empty");
  check_policy(policy);
  HermitianEig eig = hermitian_eig(a);  // rejects grossly non-Hermitian input
  const Eigen::Index n = a.rows();
  const double scale = std::max(a.norm(), 1e-300);
  if (eig.values.minCoeff() < -1e-8 * scale)
    throw std::invalid_argument("kraus_witness: input is not positive semidefinite");

  RealVector energies = eig.values.reverse();
  int r = keep_count(energies, policy.epsilon * policy.epsilon);
  if (policy.r_max) r = std::min(r, *policy.r_max);

  Matrix u_keep(n, r);
  RealVector kept(r);
  for (int j = 0; j < r; ++j) {
    u_keep.col(j) = eig.vectors.col(n - 1 - j);
    kept(j) = energies(j);
  }
  KrausWitness out;
  out.projector = u_keep * u_keep.adjoint();
  out.truncated = u_keep * kept.cast<Complex>().asDiagonal() * u_keep.adjoint();
  if (r == 0) {
    out.projector = Matrix::Zero(n, n);
    out.truncated = Matrix::Zero(n, n);
  }
  return out;
}

}  // namespace lk
