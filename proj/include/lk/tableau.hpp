// Explicit Butcher tableaus and the complete-positivity gate. A tableau yields
// a CP step iff every a_ij and b_i is non-negative AND every flow offset it
// requests is non-negative: 0 <= c_i <= 1 and c_i >= c_j wherever a_ij > 0.
// Backward offsets would apply exp(J tau) with tau < 0, which amplifies the
// dissipative part, so they are excluded from the CP-valid set.
#pragma once

#include "lk/linalg.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace lk {

struct ButcherTableau {
  std::string name;
  int order = 0;  // design order of the scheme
  RealMatrix a;   // s x s, strictly lower triangular
  RealVector b;
  RealVector c;

  int stages() const { return static_cast<int>(b.size()); }
};

ButcherTableau forward_euler();
ButcherTableau heun2();
ButcherTableau ssprk3();
ButcherTableau classic_rk4();

// Lookup over {euler, heun, ssprk3, rk4}; throws on unknown names.
ButcherTableau tableau_by_name(std::string_view name);
const std::vector<std::string>& builtin_tableau_names();

enum class CPViolationKind {
  StageWeight,      // a_ij < 0
  QuadratureWeight, // b_i < 0
  NodeRange,        // c_i outside [0, 1]
  BackwardOffset,   // c_i < c_j for a used pair
};

struct CPViolation {
  CPViolationKind kind;
  int i = -1;  // 0-based stage index
  int j = -1;  // second stage for offset violations, -1 otherwise
  double value = 0.0;
};

struct CPValidity {
  bool is_cp_valid = false;  // entries non-negative and offsets_ok
  bool offsets_ok = false;
  std::vector<CPViolation> violations;
};

// Checks CP validity. Structurally broken tableaus (non-lower-triangular a,
// weights not summing to 1, c inconsistent with row sums) throw instead.
CPValidity validate_tableau(const ButcherTableau& tab);

}  // namespace lk
