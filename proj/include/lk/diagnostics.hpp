// State and channel diagnostics: per-state CPTP defect report, Choi matrix of
// a one-step map probed on matrix units, and the rank history of a factored
// trajectory.
#pragma once

#include "lk/linalg.hpp"

#include <functional>
#include <vector>

namespace lk {

struct CPTPReport {
  double trace_defect = 0.0;  // |tr(rho) - 1|
  double herm_defect = 0.0;   // ||rho - rho^dag||_F
  double min_eig = 0.0;       // smallest eigenvalue of the symmetrized state
  int rank_eps = 0;           // eigenvalues above eps_r
};

// eps_r <= 0 selects the default cutoff 1e-12 * max eigenvalue. Non-Hermitian
// input is reported through herm_defect, never thrown.
CPTPReport cptp_report(const Matrix& rho, double eps_r = 0.0);

// Same report for a factored state rho = v v^dag without forming it densely;
// herm_defect is structurally zero.
CPTPReport cptp_report_factor(const Matrix& v, double eps_r = 0.0);

// Choi matrix of a linear map on N x N states: block (i, j) holds step(E_ij).
// The step must be the raw linear map (no renormalization, no symmetrization).
Matrix choi_matrix(const std::function<Matrix(const Matrix&)>& step, int n);

// Column counts of a factored trajectory.
std::vector<int> rank_series(const std::vector<Matrix>& factors);

}  // namespace lk
