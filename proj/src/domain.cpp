#include "lemnis/domain.hpp"

#include "lemnis/error.hpp"
#include "lemnis/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace lemnis {

namespace {

constexpr double kSimplexTol = 1e-9;

void require_validated(const ReinhardtDomain& domain) {
  if (!domain.validated()) throw InputError("domain has not been validated");
}

void check_theta(const ReinhardtDomain& domain, std::span<const double> theta) {
  if (theta.size() != domain.dim()) {
    throw InputError("theta has length " + std::to_string(theta.size()) + ", domain dimension is " +
                     std::to_string(domain.dim()));
  }
  double sum = 0.0;
  for (double t : theta) {
    if (!std::isfinite(t) || t < -kSimplexTol) throw InputError("theta has a negative or non-finite entry");
    sum += t;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) {
    throw InputError("theta is not on the simplex (sum = " + std::to_string(sum) + ")");
  }
}

LinearProgram log_image_lp(const ReinhardtDomain& domain, RationalVector objective) {
  LinearProgram lp;
  lp.objective = std::move(objective);
  for (const auto& c : domain.constraints()) {
    lp.constraints.push_back(c.alpha);
    lp.rhs.push_back(c.exact_log_c());
  }
  return lp;
}

double weighted_ball_support(const ReinhardtDomain& domain, std::span<const double> theta) {
  double s = 0.0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double t = std::max(theta[k], 0.0);
    if (t == 0.0) continue;  // 0 log 0 := 0
    s += t * std::log(t / domain.weights()[k]);
  }
  return s / domain.p();
}

}  // namespace

double MonomialConstraint::log_c() const {
  return log_bound ? to_double(*log_bound) : std::log(bound);
}

Rational MonomialConstraint::exact_log_c() const {
  return log_bound ? *log_bound : rational_from_double(std::log(bound));
}

ReinhardtDomain ReinhardtDomain::polyhedral(std::size_t dim, std::vector<MonomialConstraint> constraints) {
  ReinhardtDomain d;
  d.dim_ = dim;
  d.kind_ = DomainKind::polyhedral;
  d.constraints_ = std::move(constraints);
  return d;
}

ReinhardtDomain ReinhardtDomain::weighted_ball(double p, std::vector<double> weights) {
  ReinhardtDomain d;
  d.dim_ = weights.size();
  d.kind_ = DomainKind::weighted_ball;
  d.p_ = p;
  d.weights_ = std::move(weights);
  return d;
}

bool ReinhardtDomain::has_exact_bounds() const {
  return is_polyhedral() &&
         std::all_of(constraints_.begin(), constraints_.end(), [](const auto& c) { return c.log_bound.has_value(); });
}

std::string ReinhardtDomain::summary() const {
  std::ostringstream os;
  if (is_polyhedral()) {
    os << "polyhedral n=" << dim_ << " constraints=" << constraints_.size();
  } else {
    os << "weighted_ball n=" << dim_ << " p=" << p_;
  }
  return os.str();
}

ValidationReport validate(ReinhardtDomain& domain) {
  ValidationReport report;
  auto fail = [&](std::string code, std::string message, std::vector<double> witness = {}) {
    report.ok = false;
    report.failures.push_back({std::move(code), std::move(message), std::move(witness)});
  };

  const std::size_t n = domain.dim();
  if (n < 2) fail("dimension", "dimension must be at least 2, got " + std::to_string(n));

  if (domain.kind() == DomainKind::weighted_ball) {
    if (!(domain.p() > 0.0) || !std::isfinite(domain.p())) {
      fail("exponent", "weighted ball exponent p must be positive and finite");
    }
    for (std::size_t k = 0; k < domain.weights().size(); ++k) {
      const double w = domain.weights()[k];
      if (!(w > 0.0) || !std::isfinite(w)) {
        fail("weights", "weight " + std::to_string(k) + " must be positive and finite");
      }
    }
    domain.validated_ = report.ok;
    return report;
  }

  if (domain.constraints().empty()) fail("empty_system", "polyhedral domain has no constraints");
  bool structural_ok = report.ok;
  for (std::size_t i = 0; i < domain.constraints().size(); ++i) {
    const auto& c = domain.constraints()[i];
    const std::string tag = "constraint " + std::to_string(i);
    if (c.alpha.size() != n) {
      fail("alpha", tag + ": exponent vector has length " + std::to_string(c.alpha.size()));
      structural_ok = false;
      continue;
    }
    bool any_positive = false;
    for (const auto& a : c.alpha) {
      if (sgn(a) < 0) {
        fail("alpha", tag + ": negative exponent");
        structural_ok = false;
      }
      if (sgn(a) > 0) any_positive = true;
    }
    if (!any_positive) {
      fail("alpha", tag + ": exponent vector is zero");
      structural_ok = false;
    }
    if (!c.log_bound && (!(c.bound > 0.0) || !std::isfinite(c.bound))) {
      fail("bound", tag + ": bound must be positive and finite");
      structural_ok = false;
    }
  }
  if (!structural_ok) {
    domain.validated_ = false;
    return report;
  }

  auto feasibility = solve_lp_exact(log_image_lp(domain, RationalVector(n, Rational(0))));
  if (feasibility.status == LPStatus::infeasible) {
    fail("empty", "logarithmic image is empty");
  }

  std::vector<RationalVector> generators;
  for (const auto& c : domain.constraints()) generators.push_back(c.alpha);
  for (std::size_t k = 0; k < n; ++k) {
    RationalVector e(n, Rational(0));
    e[k] = 1;
    if (cone_membership(generators, e)) continue;
    std::vector<double> ray;
    auto lp = solve_lp_exact(log_image_lp(domain, e));
    if (lp.status == LPStatus::unbounded && lp.ray) ray = to_doubles(*lp.ray);
    fail("unbounded",
         "e_" + std::to_string(k + 1) + " is not in the cone of exponent vectors; domain is unbounded in z_" +
             std::to_string(k + 1),
         std::move(ray));
  }

  domain.validated_ = report.ok;
  return report;
}

ReinhardtDomain require_valid(ReinhardtDomain domain) {
  auto report = validate(domain);
  if (!report.ok) throw InputError("invalid domain: " + report.failures.front().message);
  return domain;
}

ReinhardtDomain unit_polydisk(std::size_t dim) {
  std::vector<MonomialConstraint> cs;
  for (std::size_t k = 0; k < dim; ++k) {
    MonomialConstraint c;
    c.alpha.assign(dim, Rational(0));
    c.alpha[k] = 1;
    c.log_bound = Rational(0);
    cs.push_back(std::move(c));
  }
  return require_valid(ReinhardtDomain::polyhedral(dim, std::move(cs)));
}

ReinhardtDomain unit_ball(std::size_t dim) {
  return require_valid(ReinhardtDomain::weighted_ball(2.0, std::vector<double>(dim, 1.0)));
}

double support_h(const ReinhardtDomain& domain, std::span<const double> theta) {
  require_validated(domain);
  check_theta(domain, theta);
  if (domain.kind() == DomainKind::weighted_ball) return weighted_ball_support(domain, theta);

  RationalVector obj;
  obj.reserve(theta.size());
  for (double t : theta) obj.push_back(rational_from_double(t));
  auto lp = solve_lp_exact(log_image_lp(domain, std::move(obj)));
  if (lp.status != LPStatus::optimal) {
    throw ComputationError(std::string("support LP is ") + to_string(lp.status));
  }
  return to_double(*lp.value);
}

double support_h(const ReinhardtDomain& domain, const RationalVector& theta) {
  if (auto exact = support_h_exact(domain, theta)) return to_double(*exact);
  auto t = to_doubles(theta);
  return support_h(domain, std::span<const double>(t));
}

std::optional<Rational> support_h_exact(const ReinhardtDomain& domain, const RationalVector& theta) {
  require_validated(domain);
  if (!domain.has_exact_bounds()) return std::nullopt;
  if (theta.size() != domain.dim()) throw InputError("theta has wrong length");
  Rational sum = 0;
  for (const auto& t : theta) {
    if (sgn(t) < 0) throw InputError("theta has a negative entry");
    sum += t;
  }
  if (sum != 1) throw InputError("theta is not on the simplex");
  auto lp = solve_lp_exact(log_image_lp(domain, theta));
  if (lp.status != LPStatus::optimal) {
    throw ComputationError(std::string("support LP is ") + to_string(lp.status));
  }
  return *lp.value;
}

const char* to_string(Location where) {
  switch (where) {
    case Location::inside: return "inside";
    case Location::boundary: return "boundary";
    case Location::outside: return "outside";
  }
  return "?";
}

double log_slack(const ReinhardtDomain& domain, std::span<const double> x) {
  if (domain.kind() == DomainKind::weighted_ball) {
    // (1/p) log sum_k w_k e^{p x_k}, max-factored.
    const double p = domain.p();
    double top = kNegInf;
    for (double xk : x) top = std::max(top, xk);
    if (top == kNegInf) return kNegInf;
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] == kNegInf) continue;
      s += domain.weights()[k] * std::exp(p * (x[k] - top));
    }
    return top + std::log(s) / p;
  }
  double worst = kNegInf;
  for (const auto& c : domain.constraints()) {
    const auto a = to_doubles(c.alpha);
    const double norm = std::accumulate(a.begin(), a.end(), 0.0);
    worst = std::max(worst, (log_dot(a, x) - c.log_c()) / norm);
  }
  return worst;
}

Membership contains(const ReinhardtDomain& domain, std::span<const double> modulus, double boundary_tol) {
  require_validated(domain);
  if (modulus.size() != domain.dim()) throw InputError("modulus vector has wrong length");
  const auto x = log_moduli(modulus);
  Membership m;
  m.slack = log_slack(domain, x);
  if (std::abs(m.slack) <= boundary_tol) {
    m.where = Location::boundary;
  } else {
    m.where = m.slack < 0.0 ? Location::inside : Location::outside;
  }
  return m;
}

std::vector<RationalVector> simplex_grid(std::size_t n, std::size_t d) {
  if (n == 0 || d == 0) throw InputError("simplex grid needs n >= 1 and d >= 1");
  std::vector<RationalVector> grid;
  std::vector<std::size_t> k(n, 0);
  // Enumerate compositions of d into n parts, first coordinate descending.
  auto recurse = [&](auto&& self, std::size_t pos, std::size_t remaining) -> void {
    if (pos + 1 == n) {
      k[pos] = remaining;
      RationalVector theta(n);
      for (std::size_t i = 0; i < n; ++i) {
        theta[i] = Rational(static_cast<unsigned long>(k[i]), static_cast<unsigned long>(d));
        theta[i].canonicalize();
      }
      grid.push_back(std::move(theta));
      return;
    }
    for (std::size_t v = remaining + 1; v-- > 0;) {
      k[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  recurse(recurse, 0, d);
  return grid;
}

ReinhardtDomain hull_from_points(const std::vector<std::vector<double>>& points, double margin,
                                 std::size_t grid_resolution, double log_floor) {
  if (points.empty()) throw InputError("hull_from_points needs at least one point");
  if (!(margin >= 0.0)) throw InputError("hull margin must be nonnegative");
  const std::size_t n = points.front().size();
  std::vector<LogPoint> logs;
  for (const auto& p : points) {
    if (p.size() != n) throw InputError("points have inconsistent dimensions");
    LogPoint x(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (!(p[k] >= 0.0) || !std::isfinite(p[k])) throw InputError("moduli must be finite and nonnegative");
      x[k] = p[k] > 0.0 ? std::max(std::log(p[k]), log_floor) : log_floor;
    }
    logs.push_back(std::move(x));
  }

  std::vector<MonomialConstraint> constraints;
  for (auto& theta : simplex_grid(n, grid_resolution)) {
    const auto t = to_doubles(theta);
    double h = kNegInf;
    for (const auto& x : logs) h = std::max(h, log_dot(t, x));
    MonomialConstraint c;
    c.alpha = std::move(theta);
    c.bound = std::exp(h + margin);
    constraints.push_back(std::move(c));
  }
  return require_valid(ReinhardtDomain::polyhedral(n, std::move(constraints)));
}

}  // namespace lemnis
