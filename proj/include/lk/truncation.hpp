// Rank truncation of factored states. A factor W (rho = W W^dag) is compressed
// by pivoted QR followed by an SVD of R; discarded energy is measured in squared
// singular values so the compressed state stays PSD with a certified projector.
#pragma once

#include "lk/linalg.hpp"

#include <optional>

namespace lk {

struct TruncationPolicy {
  double epsilon = 0.0;          // discard tail with sum of sigma^2 < epsilon^2
  std::optional<int> r_max;     // hard rank cap; unbounded when empty
  bool pre_truncate = false;    // compress stage blocks before assembly
  double epsilon_pre = 0.0;     // tolerance for the per-block compression
};

// Compressed factor W_hat with cols = min(kept rank, r_max). A zero (or fully
// discarded) input yields an N x 1 zero factor. Ties at the threshold keep the
// extra vector; exactly-zero singular values are always dropped.
Matrix truncate(const Matrix& w, const TruncationPolicy& policy);

struct KrausWitness {
  Matrix projector;  // P = U_r U_r^dag, Hermitian idempotent
  Matrix truncated;  // T = U_r Lambda_r U_r^dag, equals P A P^dag up to roundoff
};

// Spectral truncation of a PSD matrix under the same energy-cutoff rule,
// returned together with the projector that realizes it.
KrausWitness kraus_witness(const Matrix& a, const TruncationPolicy& policy);

// Kept count for a descending energy profile (squared singular values or
// eigenvalues): the largest suffix with total energy < eps_sq is discarded.
int keep_count(const RealVector& energies_descending, double eps_sq);

}  // namespace lk
