#pragma once

#include "lemnis/rational.hpp"
#include "lemnis/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lemnis {

// Nonnegative exponents, not all zero.
using ExponentVector = RationalVector;

// |z^alpha| < bound, i.e. <alpha, log|z|> < log(bound).
struct MonomialConstraint {
  ExponentVector alpha;
  double bound = 1.0;
  // Exact log(bound); when present it takes precedence over `bound`.
  std::optional<Rational> log_bound;

  double log_c() const;
  Rational exact_log_c() const;  // log_bound, or the exact rational value of log(bound) as a double
};

struct ValidationFailure {
  std::string code;  // "dimension", "alpha", "bound", "empty", "unbounded", "weights", "exponent"
  std::string message;
  std::vector<double> witness;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationFailure> failures;
};

class ReinhardtDomain;

enum class DomainKind { polyhedral, weighted_ball };

// Bounded, logarithmically convex, complete Reinhardt domain. Either a monomial
// polyhedron {|z^alpha_i| < c_i} or a weighted p-ball {sum_k w_k |z_k|^p < 1}.
class ReinhardtDomain {
public:
  static ReinhardtDomain polyhedral(std::size_t dim, std::vector<MonomialConstraint> constraints);
  static ReinhardtDomain weighted_ball(double p, std::vector<double> weights);

  std::size_t dim() const { return dim_; }
  DomainKind kind() const { return kind_; }
  bool is_polyhedral() const { return kind_ == DomainKind::polyhedral; }
  const std::vector<MonomialConstraint>& constraints() const { return constraints_; }
  double p() const { return p_; }
  const std::vector<double>& weights() const { return weights_; }
  bool validated() const { return validated_; }
  // All log-bounds are exact rationals.
  bool has_exact_bounds() const;

  std::string summary() const;

private:
  friend ValidationReport validate(ReinhardtDomain& domain);

  std::size_t dim_ = 0;
  DomainKind kind_ = DomainKind::polyhedral;
  std::vector<MonomialConstraint> constraints_;
  double p_ = 2.0;
  std::vector<double> weights_;
  bool validated_ = false;
};

// Checks structure, nonemptiness and boundedness; marks the domain validated
// on success. Semantic failures are reported, never thrown.
ValidationReport validate(ReinhardtDomain& domain);

// validate() that throws InputError with the first failure message.
ReinhardtDomain require_valid(ReinhardtDomain domain);

ReinhardtDomain unit_polydisk(std::size_t dim);
ReinhardtDomain unit_ball(std::size_t dim);

// Support function h(theta) = sup{<theta, x> : x in log|D|}, theta in the
// standard simplex. Throws InputError for theta outside the simplex.
double support_h(const ReinhardtDomain& domain, std::span<const double> theta);
double support_h(const ReinhardtDomain& domain, const RationalVector& theta);

// Exact value for polyhedral domains whose log-bounds are all exact.
std::optional<Rational> support_h_exact(const ReinhardtDomain& domain, const RationalVector& theta);

enum class Location { inside, boundary, outside };
const char* to_string(Location where);

struct Membership {
  Location where = Location::inside;
  double slack = 0.0;  // most violated normalized log-margin; negative inside
};

Membership contains(const ReinhardtDomain& domain, std::span<const double> modulus,
                    double boundary_tol = 1e-12);

// Normalized defining function in log coordinates (the slack of contains()).
double log_slack(const ReinhardtDomain& domain, std::span<const double> x);

// Barycentric grid {k/d : k in Z^n_{>=0}, |k| = d}, in lexicographic order of k
// with the first coordinate decreasing.
std::vector<RationalVector> simplex_grid(std::size_t n, std::size_t d);

// Polyhedral outer hull of a compact Reinhardt point cloud: one constraint
// <theta, x> <= h_K(theta) + margin per grid point theta. Zero moduli are
// clamped to e^{log_floor}.
ReinhardtDomain hull_from_points(const std::vector<std::vector<double>>& points, double margin,
                                 std::size_t grid_resolution, double log_floor = -40.0);

}  // namespace lemnis
