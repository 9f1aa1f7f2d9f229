#include "lemnis/types.hpp"

#include <cmath>

namespace lemnis {

LogPoint log_moduli(std::span<const Complex> z) {
  LogPoint x(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double r = std::abs(z[k]);
    x[k] = r > 0.0 ? std::log(r) : kNegInf;
  }
  return x;
}

LogPoint log_moduli(std::span<const double> modulus) {
  LogPoint x(modulus.size());
  for (std::size_t k = 0; k < modulus.size(); ++k) {
    x[k] = modulus[k] > 0.0 ? std::log(modulus[k]) : kNegInf;
  }
  return x;
}

double log_dot(std::span<const double> a, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0) continue;
    s += a[k] * x[k];
  }
  return s;
}

bool is_zero_vector(std::span<const Complex> z) {
  for (const auto& c : z) {
    if (c != Complex(0.0, 0.0)) return false;
  }
  return true;
}

}  // namespace lemnis

namespace lemnis {

CVector random_unit_sphere(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector z(n);
  double norm = 0.0;
  do {
    for (auto& c : z) c = Complex(gauss(rng), gauss(rng));
    norm = euclidean_norm(z);
  } while (!(norm > 1e-300));
  for (auto& c : z) c /= norm;
  return z;
}

double euclidean_norm(std::span<const Complex> z) {
  double s = 0.0;
  for (const auto& c : z) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace lemnis
