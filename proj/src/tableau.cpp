#include "lk/tableau.hpp"

#include <cmath>
#include <stdexcept>

namespace lk {

namespace {

ButcherTableau make(std::string name, int order, RealMatrix a, RealVector b, RealVector c) {
  ButcherTableau t;
  t.name = std::move(name);
  t.order = order;
  t.a = std::move(a);
  t.b = std::move(b);
  t.c = std::move(c);
  return t;
}

}  // namespace

ButcherTableau forward_euler() {
  RealMatrix a = RealMatrix::Zero(1, 1);
  RealVector b(1), c(1);
  b << 1.0;
  c << 0.0;
  return make("euler", 1, a, b, c);
}

ButcherTableau heun2() {
  RealMatrix a = RealMatrix::Zero(2, 2);
  a(1, 0) = 1.0;
  RealVector b(2), c(2);
  b << 0.5, 0.5;
  c << 0.0, 1.0;
  return make("heun", 2, a, b, c);
}

ButcherTableau ssprk3() {
  RealMatrix a = RealMatrix::Zero(3, 3);
  a(1, 0) = 1.0;
  a(2, 0) = 0.25;
  a(2, 1) = 0.25;
  RealVector b(3), c(3);
  b << 1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0;
  c << 0.0, 1.0, 0.5;
  return make("ssprk3", 3, a, b, c);
}

ButcherTableau classic_rk4() {
  RealMatrix a = RealMatrix::Zero(4, 4);
  a(1, 0) = 0.5;
  a(2, 1) = 0.5;
  a(3, 2) = 1.0;
  RealVector b(4), c(4);
  b << 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0;
  c << 0.0, 0.5, 0.5, 1.0;
  return make("rk4", 4, a, b, c);
}

ButcherTableau tableau_by_name(std::string_view name) {
  if (name == "euler") return forward_euler();
  if (name == "heun") return heun2();
  if (name == "ssprk3") return ssprk3();
  if (name == "rk4") return classic_rk4();
  throw std::invalid_argument("tableau_by_name: unknown tableau '" + std::string(name) + "'");
}

const std::vector<std::string>& builtin_tableau_names() {
  static const std::vector<std::string> names{"euler", "heun", "ssprk3", "rk4"};
  return names;
}

CPValidity validate_tableau(const ButcherTableau& tab) {
  const int s = tab.stages();
  if (s < 1) throw std::invalid_argument("validate_tableau: tableau has no stages");
  if (tab.a.rows() != s || tab.a.cols() != s || tab.c.size() != s)
    throw std::invalid_argument("validate_tableau: inconsistent tableau shapes");
  if (!tab.a.allFinite() || !tab.b.allFinite() || !tab.c.allFinite())
    throw std::invalid_argument("validate_tableau: non-finite tableau entries");
  for (int i = 0; i < s; ++i)
    for (int j = i; j < s; ++j)
      if (tab.a(i, j) != 0.0)
        throw std::invalid_argument("validate_tableau: a must be strictly lower triangular");
  if (std::abs(tab.b.sum() - 1.0) > 1e-14)
    throw std::invalid_argument("validate_tableau: quadrature weights must sum to 1");
  for (int i = 0; i < s; ++i) {
    double row = 0.0;
    for (int j = 0; j < i; ++j) row += tab.a(i, j);
    if (std::abs(tab.c(i) - row) > 1e-14)
      throw std::invalid_argument("validate_tableau: c must equal the a row sums");
  }

  CPValidity out;
  out.offsets_ok = true;
  bool entries_ok = true;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < i; ++j)
      if (tab.a(i, j) < 0.0) {
        entries_ok = false;
        out.violations.push_back({CPViolationKind::StageWeight, i, j, tab.a(i, j)});
      }
  for (int i = 0; i < s; ++i)
    if (tab.b(i) < 0.0) {
      entries_ok = false;
      out.violations.push_back({CPViolationKind::QuadratureWeight, i, -1, tab.b(i)});
    }
  for (int i = 0; i < s; ++i)
    if (tab.c(i) < 0.0 || tab.c(i) > 1.0) {
      out.offsets_ok = false;
      out.violations.push_back({CPViolationKind::NodeRange, i, -1, tab.c(i)});
    }
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < i; ++j)
      if (tab.a(i, j) != 0.0 && tab.c(i) < tab.c(j)) {
        out.offsets_ok = false;
        out.violations.push_back({CPViolationKind::BackwardOffset, i, j, tab.c(i) - tab.c(j)});
      }
  out.is_cp_valid = entries_ok && out.offsets_ok;
  return out;
}

}  // namespace lk
