#include "lk/diagnostics.hpp"

#include <stdexcept>

namespace lk {

CPTPReport cptp_report(const Matrix& rho, double eps_r) {
  if (rho.size() == 0 || rho.rows() != rho.cols())
    throw std::invalid_argument("cptp_report: state must be square and non-empty");
  if (!is_finite(rho)) throw std::invalid_argument("cptp_report: non-finite state");
  CPTPReport rep;
  rep.trace_defect = std::abs(rho.trace() - Complex(1.0));
  rep.herm_defect = (rho - rho.adjoint()).norm();
  Matrix sym = 0.5 * (rho + rho.adjoint());
  HermitianEig eig = hermitian_eig(sym);
  rep.min_eig = eig.values.minCoeff();
  const double cutoff = eps_r > 0.0 ? eps_r : 1e-12 * std::max(eig.values.maxCoeff(), 0.0);
  rep.rank_eps = 0;
  for (Eigen::Index j = 0; j < eig.values.size(); ++j)
    if (eig.values(j) > cutoff) ++rep.rank_eps;
  return rep;
}

CPTPReport cptp_report_factor(const Matrix& v, double eps_r) {
  if (v.size() == 0) throw std::invalid_argument("cptp_report_factor: empty factor");
  if (!is_finite(v)) throw std::invalid_argument("cptp_report_factor: non-finite factor");
  CPTPReport rep;
  rep.trace_defect = std::abs(v.squaredNorm() - 1.0);
  rep.herm_defect = 0.0;
  Svd s = svd(v);
  RealVector energies = s.sigma.array().square();
  rep.min_eig = v.cols() < v.rows() ? 0.0 : energies.minCoeff();
  const double cutoff = eps_r > 0.0 ? eps_r : 1e-12 * std::max(energies.maxCoeff(), 0.0);
  rep.rank_eps = 0;
  for (Eigen::Index j = 0; j < energies.size(); ++j)
    if (energies(j) > cutoff) ++rep.rank_eps;
  return rep;
}

Matrix choi_matrix(const std::function<Matrix(const Matrix&)>& step, int n) {
  if (n < 1) throw std::invalid_argument("choi_matrix: dimension must be positive");
  if (!step) throw std::invalid_argument("choi_matrix: missing step map");
  Matrix choi = Matrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix unit = Matrix::Zero(n, n);
      unit(i, j) = 1.0;
      Matrix out = step(unit);
      if (out.rows() != n || out.cols() != n)
        throw std::runtime_error("choi_matrix: step changed the state dimension");
      if (!is_finite(out)) throw std::runtime_error("choi_matrix: non-finite step output");
      choi.block(i * n, j * n, n, n) = out;
    }
  return choi;
}

std::vector<int> rank_series(const std::vector<Matrix>& factors) {
  std::vector<int> ranks;
  ranks.reserve(factors.size());
  for (const Matrix& v : factors) ranks.push_back(static_cast<int>(v.cols()));
  return ranks;
}

}  // namespace lk
