#pragma once

#include "lemnis/domain.hpp"
#include "lemnis/error.hpp"
#include "lemnis/rational.hpp"
#include "lemnis/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lemnis {

// Lower supporting function x -> <theta, x> - b of G in log coordinates, with
// b = h(theta).
struct SupportPiece {
  std::vector<double> theta;
  double b = 0.0;
  // Exact theta when it is known to be rational (constraint normals, grid points).
  std::optional<RationalVector> exact_theta;
};

// u(x) = max_j (<theta_j, x> - b_j).
double eval_pieces(const std::vector<SupportPiece>& pieces, std::span<const double> x);

// Pieces theta_i = alpha_i / |alpha_i|_1, b_i = log(c_i) / |alpha_i|_1 of a
// monomial polyhedron. Their maximum is G itself.
std::vector<SupportPiece> exact_pieces_polyhedral(const ReinhardtDomain& domain);

// Drops duplicates and pieces that are nowhere strictly above all others
// (decided by an exact LP per piece). Preserves the order of survivors.
std::vector<SupportPiece> prune_redundant_pieces(const std::vector<SupportPiece>& pieces);

struct SelectionBudget {
  std::size_t initial_grid = 1;
  std::size_t max_grid = 512;
  std::size_t max_pieces = 4096;
  std::size_t samples = 2000;
  std::uint64_t seed = 1;
};

struct Selection {
  std::vector<SupportPiece> pieces;
  std::size_t grid = 0;
  double measured_error = 0.0;  // sup of G - u over the shell sample
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

class SelectionBudgetExhausted : public ComputationError {
public:
  SelectionBudgetExhausted(double best_error, std::size_t best_grid);
  double best_error;
  std::size_t best_grid;
};

// Sup of G - u over `count` random points of the shell {t <= G <= 0}.
double measure_shell_error(const ReinhardtDomain& domain, const std::vector<SupportPiece>& pieces, double t,
                           std::size_t count, std::uint64_t seed);

// Grid pieces on the simplex, resolution doubled from budget.initial_grid
// until the measured sup of G - u on the shell is below epsilon / 2.
Selection select_support_pieces(const ReinhardtDomain& domain, double epsilon, double t,
                                const SelectionBudget& budget = {});

struct RationalPiece {
  RationalVector a_tilde;  // nonnegative, sums to r
  Rational b_tilde;
};

// v(x) = max_j (<a_j, x> - b_j) / r, the rationalized approximant.
struct RationalPL {
  std::size_t n = 0;
  std::vector<RationalPiece> pieces;
  Rational r = 1;
  Rational t = -1;
  bool gp_certified = false;
  // Construction record.
  double max_b_rounding = 0.0;     // max_j (b_tilde_j / r - b_j)
  double perturbation_norm = 0.0;  // max_j max(|a_j / r - theta_j|_inf, |b_tilde_j / r - b_j|)
  std::size_t attempts = 0;
  bool used_r_fallback = false;
};

struct GeneralPosition {
  bool pass = true;
  std::vector<std::size_t> witness;  // violating index set J (0-based), empty on pass
};

// Exhaustive exact test: for every J with |J| = n + 1 the system
// <a_j, x> = b_j + r t (j in J) must be unsolvable.
GeneralPosition check_general_position(const RationalPL& pl, const Rational& t);

class GeneralPositionFailure : public ComputationError {
public:
  explicit GeneralPositionFailure(std::vector<std::size_t> witness);
  std::vector<std::size_t> witness;
};

struct RationalizeOptions {
  std::int64_t denom_bound = 100000;
  std::uint64_t seed = 0;
  std::size_t max_attempts = 64;
};

// Rational pieces on the simplex (r = 1) with b rounded upward to the grid
// 1/denom_bound, perturbed upward at random until general position holds at
// level t. Falls back to r = (B + 1) / B after half of the attempts.
RationalPL rationalize(const std::vector<SupportPiece>& pieces, const Rational& t,
                       const RationalizeOptions& options = {});

struct Monomial {
  std::vector<std::int64_t> k_vec;  // |k_vec|_1 = q
  Rational log_coef;                // -N b_tilde
};

// g_j(z) = e^{log_coef_j} z^{k_j}, all of degree q = r N.
struct MonomialSystem {
  std::size_t n = 0;
  std::vector<Monomial> monomials;
  std::int64_t N = 1;
  Rational r = 1;
  std::int64_t q = 1;

  std::size_t m() const { return monomials.size(); }
};

MonomialSystem emit_monomials(const RationalPL& pl);

struct VValue {
  double value = kNegInf;
  std::vector<std::size_t> active;  // indices within tie_tol of the max
};

// v(z) = q^{-1} max_j log|g_j(z)|.
VValue eval_v(const MonomialSystem& system, std::span<const double> x, double tie_tol = 1e-9);
VValue eval_v(const MonomialSystem& system, std::span<const Complex> z, double tie_tol = 1e-9);
VValue eval_v(const RationalPL& pl, std::span<const double> x, double tie_tol = 1e-9);
VValue eval_v(const RationalPL& pl, std::span<const Complex> z, double tie_tol = 1e-9);

}  // namespace lemnis
