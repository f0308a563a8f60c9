// Dense complex linear algebra kernel shared by all modules.
// Storage is column-major (Eigen default) everywhere.
#pragma once

#include <Eigen/Dense>
#include <complex>

namespace lk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

bool is_finite(const Matrix& a);

// Thin QR with column pivoting: W * Pi = Q * R, with |R(0,0)| >= |R(1,1)| >= ...
// Q is N x m with orthonormal columns, R is m x k upper trapezoidal, m = min(N, k).
// perm(j) is the source column of W that lands in column j of W * Pi.
struct PivotedQR {
  Matrix q;
  Matrix r;
  Eigen::VectorXi perm;
};

struct Svd {
  Matrix u;          // thin left singular vectors
  RealVector sigma;  // descending, non-negative
  Matrix v;          // thin right singular vectors
};

struct HermitianEig {
  RealVector values;  // ascending
  Matrix vectors;     // unitary; column j pairs with values(j)
};

// exp(A) for square A; throws std::invalid_argument on non-square or non-finite input.
Matrix matexp(const Matrix& a);

PivotedQR pivoted_qr(const Matrix& w);

Svd svd(const Matrix& m);

// Eigendecomposition of a Hermitian matrix. Inputs with relative Hermiticity
// defect up to herm_tol are symmetrized first; larger defects throw.
HermitianEig hermitian_eig(const Matrix& a, double herm_tol = 1e-8);

}  // namespace lk
