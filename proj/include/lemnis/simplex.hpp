#pragma once

#include "lemnis/rational.hpp"

#include <optional>
#include <vector>

namespace lemnis {

// maximize <objective, x>  subject to  constraints * x <= rhs,  x free.
template <class T>
struct BasicLinearProgram {
  std::vector<T> objective;
  std::vector<std::vector<T>> constraints;
  std::vector<T> rhs;

  std::size_t num_vars() const { return objective.size(); }
};

using LinearProgram = BasicLinearProgram<Rational>;
using FloatLinearProgram = BasicLinearProgram<double>;

enum class LPStatus { optimal, unbounded, infeasible };

const char* to_string(LPStatus status);

template <class T>
struct BasicLPResult {
  LPStatus status = LPStatus::infeasible;
  std::optional<T> value;                     // iff optimal
  std::optional<std::vector<T>> optimizer;    // iff optimal
  std::optional<std::vector<T>> ray;          // iff unbounded: feasible direction raising the objective
  // Float solver only: iteration cap hit or the optimizer failed its residual
  // check. Callers should fall back to solve_lp_exact.
  bool numerically_suspect = false;
};

using LPResult = BasicLPResult<Rational>;
using FloatLPResult = BasicLPResult<double>;

// Two-phase tableau simplex over the rationals with Bland's smallest-index
// rule. Throws InputError on malformed dimensions.
LPResult solve_lp_exact(const LinearProgram& lp);

// Same algorithm in double precision with pivot tolerance `tol`.
FloatLPResult solve_lp_float(const LinearProgram& lp, double tol = 1e-9);
FloatLPResult solve_lp_float(const FloatLinearProgram& lp, double tol = 1e-9);

// True iff target = sum_i y_i * generators[i] for some y >= 0 (exact).
bool cone_membership(const std::vector<RationalVector>& generators, const RationalVector& target);

}  // namespace lemnis
