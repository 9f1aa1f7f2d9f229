#include "lemnis/combiner.hpp"

#include "lemnis/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace lemnis {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// 2 pi as an unevaluated sum hi + lo.
constexpr double kTwoPiHi = 6.283185307179586232;
constexpr double kTwoPiLo = 2.4492935982947064e-16;
constexpr std::int64_t kLargeMultiplier = std::int64_t{1} << 40;

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

struct PhasedTerm {
  double log_modulus;
  double phase;
};

// Sum of e^{L_i + i phi_i}, factored by max L. `phase_magnitude` bounds the
// unreduced phases and sets the cancellation floor: sums whose modulus is
// below the rounding error of the terms are reported as exact zeros.
ComplexLogValue scaled_sum(const std::vector<PhasedTerm>& terms, double phase_magnitude) {
  double top = kNegInf;
  for (const auto& t : terms) top = std::max(top, t.log_modulus);
  if (top == kNegInf) return {};

  CompensatedSum re, im;
  double abs_sum = 0.0;
  std::size_t live = 0;
  for (const auto& t : terms) {
    if (t.log_modulus == kNegInf) continue;
    const double w = std::exp(t.log_modulus - top);
    re.add(w * std::cos(t.phase));
    im.add(w * std::sin(t.phase));
    abs_sum += w;
    ++live;
  }
  const double modulus = std::hypot(re.value(), im.value());
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double floor = abs_sum * 16.0 * eps * (static_cast<double>(live) + phase_magnitude);
  if (!(modulus > floor)) return {};
  return {top + std::log(modulus), std::atan2(im.value(), re.value())};
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t m) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < m - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw InputError(std::string(what) + " overflows 64-bit integers");
  return out;
}

double log_binomial(std::size_t m, std::size_t k) {
  return std::lgamma(static_cast<double>(m) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(m - k) + 1.0);
}

}  // namespace

double wrap_phase(double angle) {
  double r = std::remainder(angle, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  if (r > std::numbers::pi) r -= kTwoPi;
  return r;
}

double reduce_phase(std::int64_t multiplier, double angle) {
  if (multiplier == 0 || angle == 0.0) return 0.0;
  if (std::abs(multiplier) <= kLargeMultiplier) {
    return wrap_phase(static_cast<double>(multiplier) * angle);
  }
  // multiplier * angle as hi + lo, minus the nearest multiple of 2 pi in
  // double-double. Exact for |multiplier| < 2^53.
  const double m = static_cast<double>(multiplier);
  const double hi = m * angle;
  const double lo = std::fma(m, angle, -hi);
  const double turns = std::nearbyint(hi / kTwoPiHi);
  const double r1 = std::fma(-turns, kTwoPiHi, hi);
  const double r = (r1 - turns * kTwoPiLo) + lo;
  return wrap_phase(r);
}

HomogeneousMap::HomogeneousMap(MonomialSystem system, std::int64_t s) : system_(std::move(system)), s_(s) {
  const std::size_t n = system_.n;
  if (n == 0 || n > kMaxDimension) {
    throw InputError("dimension must be between 1 and " + std::to_string(kMaxDimension));
  }
  if (s < 1) throw InputError("power s must be positive");
  if (system_.m() < n) {
    throw InputError("need at least n = " + std::to_string(n) + " monomials, got " + std::to_string(system_.m()));
  }
  for (const auto& mono : system_.monomials) {
    if (mono.k_vec.size() != n) throw InputError("monomial exponent has wrong length");
    if (std::accumulate(mono.k_vec.begin(), mono.k_vec.end(), std::int64_t{0}) != system_.q) {
      throw InputError("monomial degree differs from q");
    }
    log_coef_.push_back(to_double(mono.log_coef));
  }
  n_factorial_ = 1;
  for (std::size_t i = 2; i <= n; ++i) n_factorial_ *= static_cast<std::int64_t>(i);
  q_s_ = checked_mul(checked_mul(system_.q, s_, "q s"), n_factorial_, "q s n!");
}

std::vector<ComplexLogValue> HomogeneousMap::powered_monomials(std::span<const Complex> z) const {
  if (z.size() != n()) throw InputError("point has wrong dimension");
  const auto x = log_moduli(z);
  std::vector<double> arg(z.size());
  for (std::size_t l = 0; l < z.size(); ++l) arg[l] = std::arg(z[l]);

  std::vector<ComplexLogValue> out(m());
  std::vector<double> k(n());
  for (std::size_t j = 0; j < m(); ++j) {
    const auto& mono = system_.monomials[j];
    for (std::size_t l = 0; l < n(); ++l) k[l] = static_cast<double>(mono.k_vec[l]);
    const double log_mod = log_dot(k, x) + log_coef_[j];
    if (log_mod == kNegInf) continue;
    double phase = 0.0;
    for (std::size_t l = 0; l < n(); ++l) phase += reduce_phase(s_ * mono.k_vec[l], arg[l]);
    out[j] = {static_cast<double>(s_) * log_mod, wrap_phase(phase)};
  }
  return out;
}

HomogeneousMap build_map(MonomialSystem system, std::int64_t s) { return HomogeneousMap(std::move(system), s); }

namespace {

ComplexLogValue component_from_powers(const HomogeneousMap& map, std::size_t k,
                                      const std::vector<ComplexLogValue>& powered) {
  const std::size_t m = map.m();
  std::vector<PhasedTerm> terms;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  do {
    double log_mod = 0.0;
    double phase = 0.0;
    for (std::size_t j : idx) {
      log_mod += powered[j].log_modulus;
      phase += powered[j].phase;
    }
    terms.push_back({log_mod, phase});
  } while (next_combination(idx, m));

  const double phase_magnitude =
      std::numbers::pi * static_cast<double>(k) * static_cast<double>(map.s()) * static_cast<double>(map.system().q);
  const ComplexLogValue sum = scaled_sum(terms, phase_magnitude);
  if (sum.log_modulus == kNegInf) return {};
  const double power = static_cast<double>(map.component_power(k));
  return {power * sum.log_modulus, reduce_phase(map.component_power(k), sum.phase)};
}

}  // namespace

ComplexLogValue eval_component(const HomogeneousMap& map, std::size_t k, std::span<const Complex> z) {
  if (k < 1 || k > map.n()) throw InputError("component index out of range");
  return component_from_powers(map, k, map.powered_monomials(z));
}

std::vector<ComplexLogValue> eval_components(const HomogeneousMap& map, std::span<const Complex> z) {
  const auto powered = map.powered_monomials(z);
  std::vector<ComplexLogValue> out;
  for (std::size_t k = 1; k <= map.n(); ++k) out.push_back(component_from_powers(map, k, powered));
  return out;
}

double eval_vs(const HomogeneousMap& map, std::span<const Complex> z, bool clamp_plus) {
  double best = kNegInf;
  if (!is_zero_vector(z)) {
    for (const auto& c : eval_components(map, z)) best = std::max(best, c.log_modulus);
    best /= static_cast<double>(map.q_s());
  }
  return clamp_plus ? std::max(best, 0.0) : best;
}

double upper_envelope_slack(const HomogeneousMap& map) {
  double slack = 0.0;
  for (std::size_t k = 1; k <= map.n(); ++k) {
    slack = std::max(slack, log_binomial(map.m(), k) / (static_cast<double>(k) * static_cast<double>(map.s()) *
                                                        static_cast<double>(map.system().q)));
  }
  return slack;
}

namespace {

// exponent -> (log magnitude -> multiplicity)
using Polynomial = std::map<std::vector<std::int64_t>, std::map<Rational, mpz_class>>;

std::size_t count_parts(const Polynomial& p) {
  std::size_t c = 0;
  for (const auto& [e, coef] : p) c += coef.size();
  return c;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b, std::size_t cap) {
  if (count_parts(a) * count_parts(b) > cap * 100) {
    throw ComputationError("symbolic expansion exceeds the term cap; test without the oracle");
  }
  Polynomial out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<std::int64_t> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      auto& target = out[e];
      for (const auto& [la, ma] : ca) {
        for (const auto& [lb, mb] : cb) target[la + lb] += ma * mb;
      }
    }
  }
  if (out.size() > cap) throw ComputationError("symbolic expansion exceeds the term cap; test without the oracle");
  return out;
}

}  // namespace

SymbolicExpansion expand_symbolic(const HomogeneousMap& map, std::size_t term_cap) {
  const auto& sys = map.system();
  const std::size_t m = map.m();
  SymbolicExpansion out;
  out.q_s = map.q_s();

  for (std::size_t k = 1; k <= map.n(); ++k) {
    const double subsets = std::exp(log_binomial(m, k));
    if (subsets > static_cast<double>(term_cap)) {
      throw ComputationError("symbolic expansion exceeds the term cap; test without the oracle");
    }
    Polynomial ek;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    do {
      std::vector<std::int64_t> e(map.n(), 0);
      Rational lambda = 0;
      for (std::size_t j : idx) {
        for (std::size_t l = 0; l < map.n(); ++l) e[l] += map.s() * sys.monomials[j].k_vec[l];
        lambda += Rational(static_cast<long>(map.s())) * sys.monomials[j].log_coef;
      }
      ek[e][lambda] += 1;
    } while (next_combination(idx, m));

    Polynomial power = ek;
    for (std::int64_t p = 1; p < map.component_power(k); ++p) power = multiply(power, ek, term_cap);

    std::vector<ExpansionTerm> terms;
    for (auto& [e, coef] : power) {
      ExpansionTerm t;
      t.exponent = e;
      for (auto& [lambda, mult] : coef) t.coefficient.push_back({mult, lambda});
      terms.push_back(std::move(t));
    }
    out.components.push_back(std::move(terms));
  }
  return out;
}

ComplexLogValue eval_expansion(const SymbolicExpansion& expansion, std::size_t k, std::span<const Complex> z) {
  if (k < 1 || k > expansion.components.size()) throw InputError("component index out of range");
  const auto x = log_moduli(z);
  std::vector<double> arg(z.size());
  for (std::size_t l = 0; l < z.size(); ++l) arg[l] = std::arg(z[l]);

  std::vector<PhasedTerm> terms;
  std::vector<double> e(z.size());
  for (const auto& term : expansion.components[k - 1]) {
    if (term.exponent.size() != z.size()) throw InputError("point has wrong dimension");
    for (std::size_t l = 0; l < z.size(); ++l) e[l] = static_cast<double>(term.exponent[l]);
    const double base = log_dot(e, x);
    double phase = 0.0;
    for (std::size_t l = 0; l < z.size(); ++l) phase += reduce_phase(term.exponent[l], arg[l]);
    phase = wrap_phase(phase);
    for (const auto& part : term.coefficient) {
      const double log_mult = std::log(part.multiplicity.get_d());
      terms.push_back({base + log_mult + to_double(part.log_magnitude), phase});
    }
  }
  return scaled_sum(terms, std::numbers::pi * static_cast<double>(expansion.q_s));
}

}  // namespace lemnis
