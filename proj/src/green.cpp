#include "lemnis/green.hpp"

#include "lemnis/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lemnis {

GreenValue eval_green(const ReinhardtDomain& domain, std::span<const double> x) {
  if (!domain.validated()) throw InputError("domain has not been validated");
  if (x.size() != domain.dim()) throw InputError("point has wrong dimension");
  GreenValue g;
  if (std::all_of(x.begin(), x.end(), [](double v) { return v == kNegInf; })) return g;

  if (domain.kind() == DomainKind::weighted_ball) {
    g.value = log_slack(domain, x);
    const double p = domain.p();
    std::vector<double> theta(x.size(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] == kNegInf) continue;
      theta[k] = domain.weights()[k] * std::exp(p * (x[k] - g.value));
      total += theta[k];
    }
    for (auto& t : theta) t /= total;
    g.attained_theta = std::move(theta);
    return g;
  }

  std::vector<double> best_alpha;
  double best_norm = 1.0;
  for (std::size_t i = 0; i < domain.constraints().size(); ++i) {
    const auto& c = domain.constraints()[i];
    auto a = to_doubles(c.alpha);
    const double norm = std::accumulate(a.begin(), a.end(), 0.0);
    const double piece = (log_dot(a, x) - c.log_c()) / norm;
    if (i == 0 || piece > g.value) {
      g.value = piece;
      best_alpha = std::move(a);
      best_norm = norm;
    }
  }
  if (g.value != kNegInf) {
    for (auto& a : best_alpha) a /= best_norm;
    g.attained_theta = std::move(best_alpha);
  }
  return g;
}

GreenValue eval_green(const ReinhardtDomain& domain, std::span<const Complex> z) {
  const auto x = log_moduli(z);
  return eval_green(domain, std::span<const double>(x));
}

double green(const ReinhardtDomain& domain, std::span<const Complex> z) { return eval_green(domain, z).value; }

SupportGrid::SupportGrid(const ReinhardtDomain& domain, std::size_t resolution) : resolution_(resolution) {
  for (const auto& theta : simplex_grid(domain.dim(), resolution)) {
    support_.push_back(support_h(domain, theta));
    thetas_.push_back(to_doubles(theta));
  }
}

double SupportGrid::max_abs_support() const {
  double m = 0.0;
  for (double h : support_) m = std::max(m, std::abs(h));
  return m;
}

double SupportGrid::lower_bound(std::span<const double> x) const {
  double best = kNegInf;
  for (std::size_t i = 0; i < thetas_.size(); ++i) {
    best = std::max(best, log_dot(thetas_[i], x) - support_[i]);
  }
  return best;
}

double green_grid_oracle(const ReinhardtDomain& domain, std::span<const Complex> z, std::size_t resolution) {
  const auto x = log_moduli(z);
  return SupportGrid(domain, resolution).lower_bound(x);
}

double green_plus(const ReinhardtDomain& domain, std::span<const Complex> z) {
  if (is_zero_vector(z)) return 0.0;
  return std::max(green(domain, z), 0.0);
}

ClosedFormCheck check_green_closed_form(const ReinhardtDomain& domain, std::size_t count,
                                        std::size_t resolution, std::uint64_t seed, double t) {
  SupportGrid grid(domain, resolution);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> level(t, 0.0);

  ClosedFormCheck check;
  check.count = count;
  check.max_excess = kNegInf;
  check.max_gap = kNegInf;
  double max_abs_x = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    auto w = random_unit_sphere(rng, domain.dim());
    const double gw = green(domain, w);
    const double scale = std::exp(level(rng) - gw);
    for (auto& c : w) c *= scale;
    const auto x = log_moduli(w);
    const double closed = eval_green(domain, std::span<const double>(x)).value;
    const double oracle = grid.lower_bound(x);
    for (double v : x) max_abs_x = std::max(max_abs_x, std::abs(v));
    check.max_excess = std::max(check.max_excess, oracle - closed);
    check.max_gap = std::max(check.max_gap, closed - oracle);
  }
  check.tolerance = 2.0 / static_cast<double>(resolution) * (max_abs_x + grid.max_abs_support());
  check.passed = check.max_excess <= 1e-12 * (1.0 + max_abs_x) && check.max_gap <= check.tolerance;
  return check;
}

}  // namespace lemnis
