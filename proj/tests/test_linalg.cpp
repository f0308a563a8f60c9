#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lk/linalg.hpp"
#include "support.hpp"

#include <cmath>
#include <random>

using namespace lk;
using lk::testing::random_matrix;
using lk::testing::random_unitary;

namespace {
const Complex I_UNIT(0.0, 1.0);
}

TEST_CASE("matexp of zero is identity") {
  Matrix z = Matrix::Zero(3, 3);
  CHECK((matexp(z) - Matrix::Identity(3, 3)).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("matexp of a diagonal matrix exponentiates the diagonal") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = -1.0;
  d(1, 1) = -2.0;
  Matrix e = matexp(d);
  CHECK(std::abs(e(0, 0) - Complex(std::exp(-1.0))) < 1e-14);
  CHECK(std::abs(e(1, 1) - Complex(std::exp(-2.0))) < 1e-14);
  CHECK(std::abs(e(0, 1)) < 1e-15);
  CHECK(std::abs(e(1, 0)) < 1e-15);
}

TEST_CASE("matexp of a nilpotent matrix truncates the series") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  Matrix e = matexp(a);
  Matrix want(2, 2);
  want << 1.0, 1.0, 0.0, 1.0;
  CHECK((e - want).norm() < 1e-14);
}

TEST_CASE("matexp rejects bad input") {
  CHECK_THROWS_AS(matexp(Matrix::Zero(2, 3)), std::invalid_argument);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(matexp(bad), std::invalid_argument);
}

TEST_CASE("matexp(A) matexp(-A) is the identity") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix a = random_matrix(5, 5, rng);
    a *= 5.0 / a.norm();
    Matrix prod = matexp(a) * matexp(-a);
    CHECK((prod - Matrix::Identity(5, 5)).norm() < 1e-11);
  }
}

TEST_CASE("matexp of a skew-Hermitian matrix is unitary") {
  std::mt19937 rng(12);
  Matrix h = lk::testing::random_hermitian(6, rng);
  Matrix u = matexp(-I_UNIT * h);
  CHECK((u.adjoint() * u - Matrix::Identity(6, 6)).norm() < 1e-12);
}

TEST_CASE("pivoted_qr of the identity") {
  Matrix w = Matrix::Identity(3, 3);
  PivotedQR f = pivoted_qr(w);
  CHECK((f.q * f.r - w).norm() < 1e-14);
  CHECK((f.q.adjoint() * f.q - Matrix::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("pivoted_qr pivots the dominant column first") {
  std::mt19937 rng(13);
  Matrix u = random_matrix(4, 1, rng);
  Matrix w(4, 2);
  w.col(0) = u;
  w.col(1) = 2.0 * u;
  PivotedQR f = pivoted_qr(w);
  CHECK(f.perm(0) == 1);
  // W Pi rebuilt from perm must match Q R.
  Matrix wp(4, 2);
  for (int j = 0; j < 2; ++j) wp.col(j) = w.col(f.perm(j));
  CHECK((f.q * f.r - wp).norm() < 1e-13 * w.norm());
}

TEST_CASE("pivoted_qr reconstructs a random tall matrix") {
  std::mt19937 rng(14);
  Matrix w = random_matrix(8, 3, rng);
  PivotedQR f = pivoted_qr(w);
  REQUIRE(f.q.rows() == 8);
  REQUIRE(f.q.cols() == 3);
  REQUIRE(f.r.rows() == 3);
  REQUIRE(f.r.cols() == 3);
  Matrix wp(8, 3);
  for (int j = 0; j < 3; ++j) wp.col(j) = w.col(f.perm(j));
  CHECK((f.q * f.r - wp).norm() <= 1e-12 * w.norm());
  CHECK((f.q.adjoint() * f.q - Matrix::Identity(3, 3)).norm() <= 1e-12 * std::sqrt(3.0));
}

TEST_CASE("pivoted_qr handles wide matrices") {
  std::mt19937 rng(15);
  Matrix w = random_matrix(3, 7, rng);
  PivotedQR f = pivoted_qr(w);
  REQUIRE(f.q.cols() == 3);
  REQUIRE(f.r.rows() == 3);
  REQUIRE(f.r.cols() == 7);
  Matrix wp(3, 7);
  for (int j = 0; j < 7; ++j) wp.col(j) = w.col(f.perm(j));
  CHECK((f.q * f.r - wp).norm() <= 1e-12 * w.norm());
}

TEST_CASE("pivoted_qr R diagonal decays on a low-rank matrix") {
  std::mt19937 rng(16);
  const int n = 6, r = 2;
  Matrix w = random_matrix(n, r, rng) * random_matrix(r, n, rng);
  PivotedQR f = pivoted_qr(w);
  for (int j = 0; j + 1 < n; ++j)
    CHECK(std::abs(f.r(j + 1, j + 1)) <= std::abs(f.r(j, j)) + 1e-13);
  for (int j = r; j < n; ++j)
    CHECK(std::abs(f.r(j, j)) <= 1e-10 * std::abs(f.r(0, 0)));
}

TEST_CASE("svd of a real diagonal") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  Svd s = svd(m);
  CHECK(s.sigma(0) == doctest::Approx(3.0));
  CHECK(s.sigma(1) == doctest::Approx(1.0));
}

TEST_CASE("svd of a rank-1 outer product") {
  std::mt19937 rng(17);
  Matrix u = random_matrix(5, 1, rng);
  Matrix v = random_matrix(3, 1, rng);
  Matrix m = u * v.adjoint();
  Svd s = svd(m);
  CHECK(s.sigma(0) == doctest::Approx(u.norm() * v.norm()).epsilon(1e-12));
  for (int j = 1; j < s.sigma.size(); ++j) CHECK(s.sigma(j) < 1e-12 * s.sigma(0));
}

TEST_CASE("svd reconstructs and orders descending") {
  std::mt19937 rng(18);
  Matrix m = random_matrix(5, 3, rng);
  Svd s = svd(m);
  for (int j = 0; j + 1 < s.sigma.size(); ++j) CHECK(s.sigma(j) >= s.sigma(j + 1));
  Matrix rebuilt = s.u * s.sigma.cast<Complex>().asDiagonal() * s.v.adjoint();
  CHECK((rebuilt - m).norm() <= 1e-12 * m.norm());
}

TEST_CASE("singular values are invariant under unitaries") {
  std::mt19937 rng(19);
  Matrix m = random_matrix(4, 4, rng);
  Matrix u = random_unitary(4, rng);
  Matrix v = random_unitary(4, rng);
  Svd a = svd(m);
  Svd b = svd(u * m * v);
  CHECK((a.sigma - b.sigma).norm() < 1e-11 * a.sigma(0));
}

TEST_CASE("hermitian_eig of the Pauli-z matrix") {
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  HermitianEig e = hermitian_eig(z);
  CHECK(e.values(0) == doctest::Approx(-1.0));
  CHECK(e.values(1) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig of the maximally mixed state") {
  const int n = 4;
  Matrix rho = Matrix::Identity(n, n) / double(n);
  HermitianEig e = hermitian_eig(rho);
  for (int j = 0; j < n; ++j) CHECK(e.values(j) == doctest::Approx(0.25));
  CHECK((e.vectors.adjoint() * e.vectors - Matrix::Identity(n, n)).norm() < 1e-13);
}

TEST_CASE("eigenvalues of V V^dag are squared singular values of V") {
  std::mt19937 rng(20);
  Matrix v = random_matrix(6, 3, rng);
  Svd s = svd(v);
  HermitianEig e = hermitian_eig(Matrix(v * v.adjoint()));
  // ascending eigenvalues vs descending sigma
  for (int j = 0; j < 3; ++j) {
    double want = s.sigma(j) * s.sigma(j);
    CHECK(e.values(5 - j) == doctest::Approx(want).epsilon(1e-10));
  }
  for (int j = 0; j < 3; ++j) CHECK(std::abs(e.values(j)) < 1e-10 * e.values(5));
}

TEST_CASE("hermitian_eig rejects a grossly non-Hermitian matrix") {
  Matrix a(2, 2);
  a << 1.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(hermitian_eig(a), std::invalid_argument);
}

TEST_CASE("hermitian_eig symmetrizes within tolerance") {
  std::mt19937 rng(21);
  Matrix h = lk::testing::random_hermitian(4, rng);
  Matrix perturbed = h;
  perturbed(0, 1) += Complex(0, 1e-12);
  HermitianEig a = hermitian_eig(h);
  HermitianEig b = hermitian_eig(perturbed);
  CHECK((a.values - b.values).norm() < 1e-10);
}
