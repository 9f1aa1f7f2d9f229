#pragma once

#include "lemnis/pl_approx.hpp"
#include "lemnis/types.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace lemnis {

// A complex number as (log|w|, arg w); log_modulus = -inf means w = 0 and
// then phase = 0.
struct ComplexLogValue {
  double log_modulus = kNegInf;
  double phase = 0.0;  // in (-pi, pi]
};

// The mapping z -> (g_1^(s)(z), ..., g_n^(s)(z)) with
//   g_k^(s) = e_k(g_1^s, ..., g_m^s)^(n!/k),
// e_k the k-th elementary symmetric function of the powered monomials. All
// components are homogeneous of degree q_s = q s n!. Nothing is expanded;
// evaluation happens in log-modulus/phase form.
class HomogeneousMap {
public:
  HomogeneousMap(MonomialSystem system, std::int64_t s);

  const MonomialSystem& system() const { return system_; }
  std::size_t n() const { return system_.n; }
  std::size_t m() const { return system_.m(); }
  std::int64_t s() const { return s_; }
  std::int64_t q_s() const { return q_s_; }
  std::int64_t n_factorial() const { return n_factorial_; }
  // n! / k
  std::int64_t component_power(std::size_t k) const { return n_factorial_ / static_cast<std::int64_t>(k); }

  // log|g_j(z)^s| and arg(g_j(z)^s) for every monomial.
  std::vector<ComplexLogValue> powered_monomials(std::span<const Complex> z) const;

private:
  MonomialSystem system_;
  std::int64_t s_;
  std::int64_t q_s_;
  std::int64_t n_factorial_;
  std::vector<double> log_coef_;  // double copies of the exact log-coefficients
};

constexpr std::size_t kMaxDimension = 6;

// Throws InputError when m < n, n > 6 or s < 1.
HomogeneousMap build_map(MonomialSystem system, std::int64_t s);

// Component k in 1..n.
ComplexLogValue eval_component(const HomogeneousMap& map, std::size_t k, std::span<const Complex> z);
std::vector<ComplexLogValue> eval_components(const HomogeneousMap& map, std::span<const Complex> z);

// v_s(z) = q_s^{-1} max_k log|g_k^(s)(z)|; with clamp_plus, max(v_s, 0).
double eval_vs(const HomogeneousMap& map, std::span<const Complex> z, bool clamp_plus = false);

// max_k log C(m, k) / (k s q): the amount by which v_s may exceed v.
double upper_envelope_slack(const HomogeneousMap& map);

// (multiplicity) * e^(log_magnitude); monomial coefficients are positive reals
// so no phase is carried.
struct LogCoefficient {
  mpz_class multiplicity;
  Rational log_magnitude;
};

struct ExpansionTerm {
  std::vector<std::int64_t> exponent;
  std::vector<LogCoefficient> coefficient;  // sum of the parts
};

struct SymbolicExpansion {
  std::int64_t q_s = 0;
  std::vector<std::vector<ExpansionTerm>> components;  // index k - 1
};

// Exact multinomial expansion of every component. Throws ComputationError
// when a component would exceed term_cap terms.
SymbolicExpansion expand_symbolic(const HomogeneousMap& map, std::size_t term_cap = 100000);

ComplexLogValue eval_expansion(const SymbolicExpansion& expansion, std::size_t k, std::span<const Complex> z);

// s * k * arg(z) reduced to (-pi, pi]; uses a double-double reduction when the
// multiplier is large.
double reduce_phase(std::int64_t multiplier, double angle);

double wrap_phase(double angle);

}  // namespace lemnis
