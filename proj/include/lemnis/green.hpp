#pragma once

#include "lemnis/domain.hpp"
#include "lemnis/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lemnis {

struct GreenValue {
  double value = kNegInf;
  // Maximizing theta in the sup over the simplex, when one is known.
  std::optional<std::vector<double>> attained_theta;
};

// Pluricomplex Green function of the domain with pole at the origin,
// G(z) = sup{<theta, log|z|> - h(theta) : theta in the simplex}, extended to
// all of C^n by the same formula. Polyhedral domains use
// max_i (<alpha_i, x> - log c_i) / |alpha_i|_1; weighted balls use
// (1/p) log sum_k w_k |z_k|^p.
GreenValue eval_green(const ReinhardtDomain& domain, std::span<const double> x);
GreenValue eval_green(const ReinhardtDomain& domain, std::span<const Complex> z);

double green(const ReinhardtDomain& domain, std::span<const Complex> z);

// Support function tabulated on the barycentric grid of resolution d.
class SupportGrid {
public:
  SupportGrid(const ReinhardtDomain& domain, std::size_t resolution);

  std::size_t resolution() const { return resolution_; }
  const std::vector<std::vector<double>>& thetas() const { return thetas_; }
  const std::vector<double>& support() const { return support_; }
  double max_abs_support() const;

  // max over grid points of <theta, x> - h(theta).
  double lower_bound(std::span<const double> x) const;

private:
  std::size_t resolution_;
  std::vector<std::vector<double>> thetas_;
  std::vector<double> support_;
};

// Brute-force discretization of the sup over the simplex; a lower bound for G.
double green_grid_oracle(const ReinhardtDomain& domain, std::span<const Complex> z, std::size_t resolution);

// max(G(z), 0): the Green function of the closure with pole at infinity.
double green_plus(const ReinhardtDomain& domain, std::span<const Complex> z);

struct ClosedFormCheck {
  std::size_t count = 0;
  double max_excess = 0.0;  // max(oracle - closed form); must stay <= 1e-12 in magnitude
  double max_gap = 0.0;     // max(closed form - oracle)
  double tolerance = 0.0;   // allowed gap: 2/d * (max|x| + max|h|)
  bool passed = false;
};

// Compares the closed form with the grid oracle on random points of the shell
// {t <= G <= 0}.
ClosedFormCheck check_green_closed_form(const ReinhardtDomain& domain, std::size_t count,
                                        std::size_t resolution, std::uint64_t seed, double t = -1.0);

}  // namespace lemnis
